#include <gtest/gtest.h>

#include "moufang/flags.hpp"
#include "moufang/rootgroups.hpp"

using namespace moufang;

namespace {

std::shared_ptr<const PlaneModel> plane(std::int64_t p) { return std::make_shared<PlaneModel>(Field::prime(p)); }

// GQ(2,4): q = v1^2 + v1 v2 + v2^2 over F_2.
std::shared_ptr<const QuadricModel> gq24() {
  const FieldPtr f2 = Field::prime(2);
  const Element o = Element::one(f2), z = Element::zero(f2);
  return std::make_shared<QuadricModel>(QuadraticSpace(f2, {{o, o}, {z, o}}));
}

// Neighbour of x on a shortest path to y, by breadth-first search in the incidence graph.
GeoElement bfs_projection(const FiniteModel& fm, const GeoElement& x, const GeoElement& y) {
  const int xi = fm.find(x), yi = fm.find(y);
  const int d = graph_distance(fm.graph, xi, yi);
  for (int u : fm.graph.adj[static_cast<std::size_t>(xi)])
    if (graph_distance(fm.graph, u, yi) == d - 1) return fm.elements[static_cast<std::size_t>(u)];
  return x;
}

Flag flag(const FieldPtr& f, const std::vector<std::vector<std::int64_t>>& rows, std::size_t l) {
  std::vector<Vector> b;
  for (const auto& r : rows) {
    Vector v;
    for (auto c : r) v.push_back(Element::from_int(f, c));
    b.push_back(v);
  }
  return flag_from_basis(b, l);
}

}  // namespace

TEST(Incident, PlaneExamples) {
  auto m = plane(3);
  EXPECT_TRUE(m->incident(m->point("1", "1", "1"), m->line("1", "1", "1")));
  EXPECT_FALSE(m->incident(m->point("1", "0", "0"), m->line("1", "0", "0")));
  EXPECT_THROW(m->incident(m->point("1", "0", "0"), m->point("0", "1", "0")), KindMismatch);
}

TEST(Incident, QuadricContainment) {
  auto m = gq24();
  const auto e = [&](std::size_t k) { return m->basis(k); };
  const GeoElement l = m->make(Kind::line, {e(0), e(2)});
  EXPECT_TRUE(m->contains(l));
  EXPECT_TRUE(m->incident(m->make(Kind::point, {e(0)}), l));
  EXPECT_TRUE(m->incident(l, m->make(Kind::point, {e(2)})));
  EXPECT_FALSE(m->incident(m->make(Kind::point, {e(1)}), l));
}

TEST(Distance, FanoExamples) {
  auto m = plane(2);
  const GeoElement p = m->point("1", "0", "0"), q = m->point("0", "1", "0"), l = m->line("1", "0", "0");
  EXPECT_EQ(m->distance(p, l), 3);
  EXPECT_EQ(m->distance(p, p), 0);
  EXPECT_EQ(m->distance(p, q), 2);
  EXPECT_EQ(m->distance(q, l), 1);
}

TEST(Distance, AgreesWithGraphDistance) {
  for (ModelPtr m : std::vector<ModelPtr>{plane(2), plane(3), gq24()}) {
    FiniteModel fm(m);
    for (std::size_t a = 0; a < fm.elements.size(); ++a) {
      for (std::size_t b = 0; b < fm.elements.size(); ++b) {
        ASSERT_EQ(m->distance(fm.elements[a], fm.elements[b]), graph_distance(fm.graph, static_cast<int>(a), static_cast<int>(b)))
            << fm.elements[a].str() << " " << fm.elements[b].str();
      }
    }
  }
}

TEST(Project, MatchesBreadthFirstSearch) {
  for (ModelPtr m : std::vector<ModelPtr>{plane(2), gq24()}) {
    FiniteModel fm(m);
    const int n = m->gonality();
    for (const auto& x : fm.elements)
      for (const auto& y : fm.elements) {
        const int d = m->distance(x, y);
        if (d == 0 || d == n) {
          EXPECT_THROW(m->project(x, y), OppositeOrEqual);
          continue;
        }
        const GeoElement p = m->project(x, y);
        ASSERT_EQ(p, bfs_projection(fm, x, y)) << x.str() << " -> " << y.str();
        ASSERT_EQ(m->distance(x, p), 1);
        ASSERT_EQ(m->distance(p, y), d - 1);
      }
  }
}

TEST(Project, IncidentReturnsTarget) {
  auto m = plane(2);
  const GeoElement p = m->point("0", "1", "0"), l = m->line("1", "0", "0");
  EXPECT_EQ(m->project(p, l), l);
}

TEST(Project, OppositeQuadricPointsRefused) {
  auto m = gq24();
  EXPECT_THROW(m->project(m->make(Kind::point, {m->basis(0)}), m->make(Kind::point, {m->basis(1)})), OppositeOrEqual);
}

TEST(Project, SampledOverRationals) {
  auto m = std::make_shared<PlaneModel>(Field::rational());
  Rng rng(31);
  for (int k = 0; k < 300; ++k) {
    Vector a(3), b(3);
    for (auto& c : a) c = sample_element(m->field(), rng, 6);
    for (auto& c : b) c = sample_element(m->field(), rng, 6);
    if (is_zero_vector(a) || is_zero_vector(b)) continue;
    const GeoElement x = m->make(Kind::point, {a}), y = m->make(rng.coin() ? Kind::point : Kind::line, {b});
    const int d = m->distance(x, y);
    if (d == 0 || d == 3) continue;
    const GeoElement p = m->project(x, y);
    ASSERT_EQ(m->distance(x, p), 1);
    ASSERT_EQ(m->distance(p, y), d - 1);
  }
}

TEST(GpAxioms, FanoPlane) {
  FiniteModel fm(plane(2));
  const CheckReport r = verify_gp_axioms(fm.graph, 3);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.fact_value("points"), "7");
  EXPECT_EQ(r.fact_value("lines"), "7");
  EXPECT_EQ(r.fact_value("order"), "(2,2)");
}

TEST(GpAxioms, ElementCountsFromSubspaceEnumeration) {
  // 1- and 2-subspaces of F_q^3 counted by brute force over all vectors.
  for (std::int64_t q : {2, 3, 5}) {
    std::size_t nonzero = 0;
    for (std::int64_t a = 0; a < q * q * q; ++a) nonzero += a != 0;
    FiniteModel fm(plane(q));
    const CheckReport r = verify_gp_axioms(fm.graph, 3);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.fact_value("points"), std::to_string(nonzero / static_cast<std::size_t>(q - 1)));
    EXPECT_EQ(r.fact_value("order"), "(" + std::to_string(q) + "," + std::to_string(q) + ")");
  }
}

TEST(GpAxioms, GeneralizedQuadrangle24) {
  FiniteModel fm(gq24());
  const CheckReport r = verify_gp_axioms(fm.graph, 4);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.fact_value("points"), "27");
  EXPECT_EQ(r.fact_value("lines"), "45");
  EXPECT_EQ(r.fact_value("order"), "(2,4)");
}

TEST(GpAxioms, DualPlanePasses) {
  FiniteModel fm(plane(3));
  EXPECT_TRUE(verify_gp_axioms(fm.graph.dual(), 3).passed());
}

TEST(GpAxioms, DeletedLineFailsGP1) {
  FiniteModel fm(plane(2));
  IncidenceStructure g = fm.graph;
  g.remove(fm.find(plane(2)->line("1", "0", "0")));
  const CheckReport r = verify_gp_axioms(g, 3);
  EXPECT_FALSE(r.passed());
  ASSERT_NE(r.find("GP1"), nullptr);
  EXPECT_FALSE(r.find("GP1")->passed);
  EXPECT_FALSE(r.find("GP1")->witness.empty());
}

TEST(WeylDistance, Examples) {
  const FieldPtr f2 = Field::prime(2);
  const Flag a = flag(f2, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 2);
  EXPECT_EQ(flag_weyl_distance(a, a), perm_identity(3));
  const Flag b = flag(f2, {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}, 2);
  EXPECT_EQ(flag_weyl_distance(a, b), perm_simple(2, 3));
  const Flag c = flag(f2, {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}, 2);
  EXPECT_EQ(flag_weyl_distance(a, c), perm_simple(1, 3));
  const Flag opp = flag(f2, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}, 2);
  EXPECT_EQ(flag_weyl_distance(a, opp), perm_longest(3));
}

TEST(WeylDistance, InverseSymmetry) {
  const auto flags = enumerate_flags(Field::prime(2), 2);
  for (const auto& a : flags)
    for (const auto& b : flags) ASSERT_EQ(flag_weyl_distance(a, b), perm_inv(flag_weyl_distance(b, a)));
}

TEST(WeylDistance, OppositeCountOracle) {
  // Opposite chambers of a chamber in A_2(q) number q^3, the size of the unipotent radical.
  for (std::int64_t q : {2, 3}) {
    const auto flags = enumerate_flags(Field::prime(q), 2);
    std::size_t opp = 0;
    for (const auto& b : flags) opp += flag_weyl_distance(flags[0], b) == perm_longest(3);
    EXPECT_EQ(opp, static_cast<std::size_t>(q * q * q));
  }
}

TEST(WdAxioms, FlagsOfPG2F2) {
  const auto flags = enumerate_flags(Field::prime(2), 2);
  ASSERT_EQ(flags.size(), 21u);
  const CheckReport r = verify_wd_axioms(weyl_table(flags));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.fact_value("chambers"), "21");
  EXPECT_TRUE(verify_opposition(weyl_table(flags)).passed());
}

TEST(WdAxioms, FlagsOfPG3F2) {
  const auto flags = enumerate_flags(Field::prime(2), 3);
  ASSERT_EQ(flags.size(), 315u);
  const WeylTable t = weyl_table(flags);
  EXPECT_TRUE(verify_wd_axioms(t).passed());
  EXPECT_TRUE(verify_opposition(t).passed());
}

TEST(WdAxioms, CorruptedTableFails) {
  WeylTable t = weyl_table(enumerate_flags(Field::prime(2), 2));
  t.delta[0 * t.chambers + 5] = t.index_of(perm_identity(3));
  const CheckReport r = verify_wd_axioms(t);
  EXPECT_FALSE(r.passed());
  const bool wd1 = !r.find("WD1")->passed, wd2 = !r.find("WD2")->passed;
  EXPECT_TRUE(wd1 || wd2);
}

TEST(Moufang, PlanesOverSmallPrimes) {
  for (std::int64_t p : {2, 3}) {
    auto m = plane(p);
    const RootGroups rg = RootGroups::plane(m);
    FiniteModel fm(m);
    const CheckReport r = verify_moufang(fm, rg.datum());
    EXPECT_TRUE(r.passed()) << p;
    EXPECT_EQ(r.conditions.size(), 6u);
  }
}

TEST(Moufang, QuadrangleGQ24) {
  auto m = gq24();
  const RootGroups rg = RootGroups::quadric(m);
  FiniteModel fm(m);
  EXPECT_TRUE(verify_moufang(fm, rg.datum()).passed());
}

TEST(Moufang, IdentityOnlyGroupFails) {
  auto m = plane(2);
  const RootGroups rg = RootGroups::plane(m);
  FiniteModel fm(m);
  RootDatum d = rg.datum();
  d.group = [&](int) { return std::vector<Automorphism>{Automorphism::identity(m->field(), 3)}; };
  EXPECT_FALSE(verify_moufang(fm, d).passed());
}

TEST(Apartment, HatRackIsOrdinaryPolygon) {
  for (auto rg : {RootGroups::plane(plane(3)), RootGroups::quadric(gq24())}) {
    const int m = 2 * rg.n();
    for (int i = 0; i < m; ++i) {
      ASSERT_TRUE(rg.model().incident(rg.x(i), rg.x(i + 1)));
      ASSERT_EQ(rg.model().distance(rg.x(i), rg.x(i + rg.n())), rg.n());
      ASSERT_EQ(rg.x(i), rg.x(i + m));
    }
  }
}
