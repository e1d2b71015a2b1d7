#include <gtest/gtest.h>

#include <set>

#include "moufang/suites.hpp"

using namespace moufang;

namespace {

const FieldPtr Q = Field::rational();

Element q(long long n, long long d = 1) { return Element::fraction(Q, n, d); }

std::shared_ptr<const PlaneModel> plane_q() { return std::make_shared<PlaneModel>(Q); }

std::shared_ptr<const QuadricModel> quadric_q() {
  return std::make_shared<QuadricModel>(QuadraticSpace(Q, {{q(1), q(0)}, {q(0), q(1)}}));
}

FieldPtr f2st() { return Field::ratfunc("t", Field::ratfunc("s", Field::prime(2))); }

Valuation rank2(const FieldPtr& f) { return compose_valuations(Valuation::t_adic(f), Valuation::t_adic(f->base())); }

std::set<std::string> labels(const std::vector<GeoElement>& xs) {
  std::set<std::string> s;
  for (const auto& x : xs) s.insert(x.str());
  return s;
}

}  // namespace

TEST(ReduceElement, ThreeAdicPlanePoint) {
  auto m = plane_q();
  const Epimorphism e = Epimorphism::direct(m, Valuation::p_adic(Q, 3));
  const GeoElement y = e(m->point("1/3", "1", "2"));
  EXPECT_EQ(y.kind, Kind::point);
  EXPECT_EQ(vector_str(y.rows[0]), "1,0,0");
}

TEST(ReduceElement, TrivialValuationIsIdentity) {
  auto m = plane_q();
  const Epimorphism e = Epimorphism::direct(m, Valuation::trivial(Q));
  EXPECT_TRUE(e.is_identity());
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const GeoElement x = random_element(e, k % 2 ? Kind::line : Kind::point, rng);
    ASSERT_EQ(e(x), x);
  }
}

TEST(ReduceElement, QuadricPointsLandOnResidueQuadric) {
  auto m = quadric_q();
  const Valuation v = Valuation::p_adic(Q, 3);
  const Epimorphism e = Epimorphism::direct(m, v);
  const auto* target = dynamic_cast<const QuadricModel*>(e.target().get());
  ASSERT_NE(target, nullptr);
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const GeoElement x = random_element(e, k % 2 ? Kind::line : Kind::point, rng);
    ASSERT_TRUE(m->contains(x)) << x.str();
    const GeoElement y = e(x);
    // Residue form evaluated directly on the reduced coordinates.
    for (const auto& r : y.rows) {
      const Element qv = r[4] * r[4] + r[5] * r[5];
      ASSERT_TRUE((r[0] * r[1] + r[2] * r[3] + qv).is_zero()) << y.str();
    }
    ASSERT_TRUE(target->contains(y));
  }
}

TEST(ReduceElement, FieldMismatchRefused) {
  EXPECT_THROW(Epimorphism::direct(plane_q(), Valuation::t_adic(Field::ratfunc("t", Field::prime(2)))), FieldMismatch);
}

TEST(Descends, ThreeAdicExamples) {
  auto m = plane_q();
  const Epimorphism e = Epimorphism::direct(m, Valuation::p_adic(Q, 3));
  const RootGroups rg = RootGroups::plane(m);
  EXPECT_EQ(descends(e, rg, 0, {q(1, 3)}), Descent::no);
  EXPECT_EQ(descends(e, rg, 0, {q(3)}), Descent::yes_trivial);
  EXPECT_EQ(descends(e, rg, 0, {q(1)}), Descent::yes_nontrivial);
}

TEST(Descends, IdentityEpimorphism) {
  auto m = plane_q();
  const RootGroups rg = RootGroups::plane(m);
  const Epimorphism id = Epimorphism::identity(m);
  EXPECT_NO_THROW(require_apartment(id, rg));
  EXPECT_EQ(descends(id, rg, 2, {q(5)}), Descent::yes_nontrivial);
  EXPECT_EQ(descends(id, rg, 2, {q(0)}), Descent::yes_trivial);
}

TEST(PropertyStar, TrivialAndDescending) {
  auto m = plane_q();
  const RootGroups rg = RootGroups::plane(m);
  const Epimorphism id = Epimorphism::identity(m);
  EXPECT_TRUE(property_star(id, rg.elation(0, q(1, 3)), rg.x(0), 50, Rng(3)).passed());
  const Epimorphism e = Epimorphism::direct(m, Valuation::p_adic(Q, 3));
  Rng rng(4);
  for (int i = 0; i < 6; ++i) {
    const Automorphism g = rg.elation(i, q(1));
    for (const auto& x : rg.hatrack()) {
      const CheckReport r = property_star(e, g, x, 100, rng.split(static_cast<std::uint64_t>(i)));
      ASSERT_TRUE(r.passed()) << i << " " << x.str() << " " << r.conditions.front().witness;
      ASSERT_EQ(r.conditions.front().samples, 100u);
    }
  }
}

TEST(PropertyStar, NonDescendingElationBreaksFibres) {
  auto m = plane_q();
  const Epimorphism e = Epimorphism::direct(m, Valuation::p_adic(Q, 3));
  const RootGroups rg = RootGroups::plane(m);
  Rng rng(5);
  const auto w = fibre_violation(e, rg.elation(0, q(1, 3)), rng, 200);
  ASSERT_TRUE(w.has_value());
  EXPECT_FALSE(w->empty());
  Rng rng2(5);
  EXPECT_FALSE(fibre_violation(e, rg.elation(0, q(1)), rng2, 200).has_value());
}

TEST(FibersSample, ThreeAdicOrigin) {
  auto m = plane_q();
  const Epimorphism e = Epimorphism::direct(m, Valuation::p_adic(Q, 3));
  const GeoElement y = e(m->point("1", "0", "0"));
  Rng rng(6);
  const auto lifts = fibers_sample(e, y, 10, rng);
  ASSERT_EQ(lifts.size(), 10u);
  EXPECT_EQ(labels(lifts).size(), 10u);
  for (const auto& x : lifts) EXPECT_EQ(e(x), y);
}

TEST(FibersSample, TrivialValuationHasSingletonFibres) {
  auto m = plane_q();
  const Epimorphism id = Epimorphism::identity(m);
  Rng rng(7);
  EXPECT_THROW(fibers_sample(id, m->point("1", "0", "0"), 2, rng), LiftFailure);
  EXPECT_EQ(fibers_sample(id, m->point("1", "0", "0"), 1, rng).size(), 1u);
}

TEST(FibersSample, TAdicEveryTarget) {
  const FieldPtr f = Field::ratfunc("t", Field::prime(2));
  const Epimorphism e = Epimorphism::direct(std::make_shared<PlaneModel>(f), Valuation::t_adic(f));
  FiniteModel fm(e.target());
  ASSERT_EQ(fm.elements.size(), 14u);
  Rng rng(8);
  for (const auto& y : fm.elements) {
    const auto lifts = fibers_sample(e, y, 10, rng);
    ASSERT_EQ(labels(lifts).size(), 10u);
    for (const auto& x : lifts) ASSERT_EQ(e(x), y);
  }
}

TEST(FibersSample, QuadricTargets) {
  const Epimorphism e = Epimorphism::direct(quadric_q(), Valuation::p_adic(Q, 3));
  FiniteModel fm(e.target());
  Rng rng(9);
  for (std::size_t k = 0; k < fm.elements.size(); k += 3) {
    const auto lifts = fibers_sample(e, fm.elements[k], 4, rng);
    ASSERT_EQ(labels(lifts).size(), 4u);
    for (const auto& x : lifts) ASSERT_EQ(e(x), fm.elements[k]);
  }
}

TEST(Realize, TrivialIsIdentity) {
  auto m = plane_q();
  const Epimorphism e = realize({m, Valuation::trivial(Q), std::nullopt}, Rng(10));
  EXPECT_TRUE(e.is_identity());
  EXPECT_EQ(e.provenance(), "identity");
}

TEST(Realize, RankTwoMatchesDirectReduction) {
  const FieldPtr f = f2st();
  auto m = std::make_shared<PlaneModel>(f);
  const Valuation v = rank2(f);
  const Epimorphism two = realize({m, v, std::nullopt}, Rng(11));
  EXPECT_EQ(two.provenance(), "t-adic then s-adic");
  EXPECT_EQ(two.stages().size(), 2u);
  const Epimorphism one = Epimorphism::direct(m, v);
  EXPECT_EQ(two.target()->describe(), one.target()->describe());
  Rng rng(12);
  for (int k = 0; k < 100; ++k) {
    const GeoElement x = random_element(one, k % 2 ? Kind::line : Kind::point, rng);
    ASSERT_EQ(two(x), one(x)) << x.str();
  }
}

TEST(Realize, FiveAdicQuadricRefused) {
  const EpiDescriptor d{quadric_q(), Valuation::p_adic(Q, 5), Value::integer(1)};
  EXPECT_THROW(realize(d, Rng(13), 200), CompatibilityFailure);
  const EpiDescriptor good{quadric_q(), Valuation::p_adic(Q, 3), Value::integer(0)};
  EXPECT_NO_THROW(realize(good, Rng(13), 200));
}

TEST(Realize, SuccessImpliesCheckerPasses) {
  for (long long p : {3, 7, 11}) {
    const Valuation v = Valuation::p_adic(Q, p);
    const EpiDescriptor d{quadric_q(), v, Value::integer(0)};
    ASSERT_NO_THROW(realize(d, Rng(14), 100)) << p;
    EXPECT_TRUE(check_qq(quadric_q()->space(), v, Value::integer(0), Rng(15), 300).passed()) << p;
  }
}

TEST(FactorCheck, RankTwoPlane) {
  const FieldPtr f = f2st();
  auto m = std::make_shared<PlaneModel>(f);
  const Valuation v = rank2(f);
  const Epimorphism fine = Epimorphism::direct(m, coarsen(v).first);
  const Epimorphism coarse = Epimorphism::direct(m, v);
  const CheckReport r = factor_check(fine, coarse, 200, Rng(16));
  EXPECT_TRUE(r.passed()) << r.conditions.front().witness << r.conditions.back().witness;
  EXPECT_EQ(r.find("composition")->samples, 200u);
  EXPECT_EQ(r.find("fibre_refinement")->samples, 200u);
  EXPECT_EQ(r.fact_value("connecting_map"), "s-adic");
}

TEST(FactorCheck, IdenticalValuationsGiveIsomorphism) {
  auto m = plane_q();
  const Epimorphism e = Epimorphism::direct(m, Valuation::p_adic(Q, 3));
  const CheckReport r = factor_check(e, e, 50, Rng(17));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.fact_value("connecting_map"), "isomorphism");
  const Epimorphism id = Epimorphism::identity(m);
  EXPECT_TRUE(factor_check(id, id, 20, Rng(18)).passed());
}

TEST(FactorCheck, UnrelatedValuationsRefused) {
  const FieldPtr f = Field::ratfunc("t", Field::prime(3));
  const Epimorphism a = Epimorphism::direct(plane_q(), Valuation::p_adic(Q, 3));
  const Epimorphism b = Epimorphism::direct(std::make_shared<PlaneModel>(f), Valuation::t_adic(f));
  EXPECT_THROW(factor_check(a, b, 10, Rng(19)), FactorMismatch);
  const Epimorphism c = Epimorphism::direct(plane_q(), Valuation::p_adic(Q, 5));
  EXPECT_THROW(factor_check(a, c, 10, Rng(19)), FactorMismatch);
}

TEST(FactorCheck, CompositionRefusesMismatchedTargets) {
  const Epimorphism a = Epimorphism::direct(plane_q(), Valuation::p_adic(Q, 3));
  EXPECT_THROW(a.then(a), FactorMismatch);
}

TEST(DeriveVW, ThreeAdicU0) {
  auto m = plane_q();
  const Epimorphism e = Epimorphism::direct(m, Valuation::p_adic(Q, 3));
  const CheckReport r = derive_vw(e, RootGroups::plane(m), 0, 200, Rng(20));
  EXPECT_TRUE(r.passed()) << r.conditions.front().witness;
  EXPECT_EQ(r.conditions.front().samples, 200u);
  EXPECT_EQ(r.fact_value("level"), "0");
}

TEST(DeriveVW, TrivialValuation) {
  auto m = plane_q();
  const CheckReport r = derive_vw(Epimorphism::identity(m), RootGroups::plane(m), 0, 100, Rng(21));
  EXPECT_TRUE(r.passed());
  // Replay the parameter stream: W is exactly the zero parameters.
  Rng replay(21);
  std::size_t zeros = 1;
  for (int t = 1; t < 100; ++t) zeros += sample_element(Q, replay, 5).is_zero();
  EXPECT_EQ(r.fact_value("W"), std::to_string(zeros));
  EXPECT_EQ(r.fact_value("outside_V"), "0");
  EXPECT_EQ(r.fact_value("V_minus_W"), std::to_string(100 - zeros));
}

TEST(DeriveVW, RescaledLevelsAtU0AndUn) {
  auto m = plane_q();
  const Epimorphism e = Epimorphism::direct(m, Valuation::p_adic(Q, 3));
  const RootGroups rg = RootGroups::plane(m, {q(1), q(1), q(3)});
  const CheckReport r0 = derive_vw(e, rg, 0, 200, Rng(22));
  const CheckReport r3 = derive_vw(e, rg, 3, 200, Rng(23));
  EXPECT_TRUE(r0.passed()) << r0.conditions.front().witness;
  EXPECT_TRUE(r3.passed()) << r3.conditions.front().witness;
  EXPECT_EQ(r0.fact_value("level"), "1");
  EXPECT_EQ(r3.fact_value("level"), "-1");
}

TEST(DeriveVW, QuadricAllRoots) {
  auto m = quadric_q();
  const Epimorphism e = Epimorphism::direct(m, Valuation::p_adic(Q, 3));
  const RootGroups rg = RootGroups::quadric(m);
  for (int i = 0; i < 8; ++i) {
    const CheckReport r = derive_vw(e, rg, i, 60, Rng(24).split(static_cast<std::uint64_t>(i)));
    EXPECT_TRUE(r.passed()) << i << " " << r.conditions.front().witness;
  }
}

TEST(EpiProperties, SurjectiveIncidenceAndLifts) {
  const FieldPtr f = Field::ratfunc("t", Field::prime(2));
  auto m = std::make_shared<PlaneModel>(f);
  const Epimorphism e = Epimorphism::direct(m, Valuation::t_adic(f));
  const CheckReport s = epi_surjective(e, Rng(25));
  EXPECT_TRUE(s.passed());
  EXPECT_EQ(s.fact_value("target_elements"), "14");
  const CheckReport inc = epi_incidence(e, 300, Rng(26));
  EXPECT_TRUE(inc.passed()) << inc.conditions.front().witness;
  EXPECT_TRUE(epi_fibres(e, 10, Rng(27)).passed());
  EXPECT_TRUE(epi_find_lift(e, 30, Rng(28)).passed());
  EXPECT_TRUE(image_moufang(e, RootGroups::plane(m)).passed());
}

TEST(EpiProperties, QuadricIncidenceAndMoufangImage) {
  auto m = quadric_q();
  const Epimorphism e = Epimorphism::direct(m, Valuation::p_adic(Q, 3));
  const CheckReport inc = epi_incidence(e, 200, Rng(29));
  EXPECT_TRUE(inc.passed()) << inc.conditions.front().witness;
  EXPECT_TRUE(image_moufang(e, RootGroups::quadric(m)).passed());
  const CheckReport an = residue_anisotropic(m->space(), Valuation::p_adic(Q, 3));
  EXPECT_TRUE(an.passed());
  EXPECT_EQ(an.fact_value("search"), "exhaustive");
}

TEST(EpiProperties, ProductAndRigidity) {
  auto m = plane_q();
  const Epimorphism e = Epimorphism::direct(m, Valuation::p_adic(Q, 3));
  const RootGroups rg = RootGroups::plane(m);
  const CheckReport prod = lemma_prod(e, rg, 60, Rng(30), 20);
  EXPECT_TRUE(prod.passed()) << prod.conditions.front().witness;
  const CheckReport rigid = lemma_rigid(e, rg, 100, Rng(31));
  EXPECT_TRUE(rigid.passed()) << rigid.conditions.front().witness;
}

TEST(SubringRecovery, PlaneAndQuadric) {
  const Valuation v = Valuation::p_adic(Q, 3);
  const CheckReport plane = subring_recovery(RootGroups::plane(plane_q()), v, 200, Rng(33));
  EXPECT_TRUE(plane.passed()) << plane.conditions.back().witness;
  EXPECT_EQ(plane.fact_value("root"), "U0");
  const RootGroups rg = RootGroups::quadric(quadric_q());
  const CheckReport quad = subring_recovery(rg, v, 200, Rng(34));
  EXPECT_TRUE(quad.passed()) << quad.conditions.back().witness;
  EXPECT_EQ(quad.fact_value("root"), "U1");
  EXPECT_THROW(rg.eta(0, {q(1)}), BadParameterDomain);
}

TEST(ResidueModel, IsotropicResidueRefused) {
  EXPECT_THROW(Epimorphism::direct(quadric_q(), Valuation::p_adic(Q, 5)), CompatibilityFailure);
}

TEST(ReduceFlag, ChambersReduceToChambers) {
  const Valuation v = Valuation::p_adic(Q, 3);
  Rng rng(32);
  for (int k = 0; k < 100; ++k) {
    std::vector<Vector> b(3, Vector(3));
    for (auto& r : b)
      for (auto& c : r) c = sample_valued(v, rng, 5, 2);
    if (rank(b) < 3) continue;
    const Flag f = flag_from_basis(b, 2);
    const Flag g = reduce_flag(v, f);
    ASSERT_EQ(g.rank(), 2u);
    ASSERT_EQ(g.spaces[0].size(), 1u);
    ASSERT_EQ(g.spaces[1].size(), 2u);
    // The reduced point lies on the reduced line.
    ASSERT_EQ(rank(stack(g.spaces[1], g.spaces[0])), 2u);
  }
}
