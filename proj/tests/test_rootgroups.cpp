#include <gtest/gtest.h>

#include "moufang/rootgroups.hpp"

using namespace moufang;

namespace {

const FieldPtr Q = Field::rational();

Element q(long long n, long long d = 1) { return Element::fraction(Q, n, d); }

RootGroups plane_q() { return RootGroups::plane(std::make_shared<PlaneModel>(Q)); }

// q(v) = v1^2 + v2^2 over Q.
RootGroups quadric_q() {
  return RootGroups::quadric(std::make_shared<QuadricModel>(QuadraticSpace(Q, {{q(1), q(0)}, {q(0), q(1)}})));
}

RootGroups quadric_f2() {
  const FieldPtr f2 = Field::prime(2);
  const Element o = Element::one(f2), z = Element::zero(f2);
  return RootGroups::quadric(std::make_shared<QuadricModel>(QuadraticSpace(f2, {{o, o}, {z, o}})));
}

Vector neg(Vector v) {
  for (auto& c : v) c = -c;
  return v;
}

// True when g fixes every element incident with x_{i+1}..x_{i+n-1}. Pencils spanned linearly by
// the two hat-rack neighbours (every plane pencil, points of a quadric line) are sampled.
bool fixes_root_interior(const RootGroups& rg, int i, const Automorphism& g, Rng& rng) {
  const PolygonModel& m = rg.model();
  const bool plane = m.model_class() == ModelClass::T;
  for (int k = i + 1; k <= i + rg.n() - 1; ++k) {
    const GeoElement& c = rg.x(k);
    if (m.act(g, c) != c) return false;
    if (!plane && c.kind == Kind::point) continue;
    const Vector& u = rg.x(k - 1).rows[0];
    const Vector& w = rg.x(k + 1).rows[0];
    for (int s = 0; s < 20; ++s) {
      const Element a = sample_element(rg.field(), rng, 5), b = sample_element(rg.field(), rng, 5);
      Vector r(u.size());
      for (std::size_t j = 0; j < r.size(); ++j) r[j] = a * u[j] + b * w[j];
      if (is_zero_vector(r)) continue;
      const GeoElement e = m.make(rg.x(k + 1).kind, {r});
      if (!m.incident(e, c) || m.act(g, e) != e) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Elation, PlaneIdentityAndTransvection) {
  const RootGroups rg = plane_q();
  EXPECT_TRUE(rg.elation(0, q(0)).is_identity());
  const Automorphism g = rg.elation(0, q(2));
  std::size_t off = 0;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      if (r == c) {
        EXPECT_TRUE(g.m(r, c).is_one());
      } else if (!g.m(r, c).is_zero()) {
        ++off;
        EXPECT_EQ(g.m(r, c), q(2));
      }
    }
  EXPECT_EQ(off, 1u);
  // Points of x_1 are fixed.
  Rng rng(1);
  const auto& m = rg.model();
  for (int k = 0; k < 100; ++k) {
    Vector v{sample_element(Q, rng, 9), sample_element(Q, rng, 9), q(0)};
    if (is_zero_vector(v)) continue;
    const GeoElement p = m.make(Kind::point, {v});
    ASSERT_TRUE(m.incident(p, rg.x(1)));
    ASSERT_EQ(m.act(g, p), p);
  }
}

TEST(Elation, ParameterDomain) {
  const RootGroups rq = quadric_q();
  EXPECT_THROW(rq.elation(0, q(1)), BadParameterDomain);
  EXPECT_THROW(rq.elation(1, Vector{q(1), q(1)}), BadParameterDomain);
  EXPECT_THROW(plane_q().elation(0, Element::one(Field::prime(3))), BadParameterDomain);
}

TEST(Elation, QuadricEvenIndexFixesSubpencil) {
  const RootGroups rg = quadric_q();
  Rng rng(2);
  for (int i = 0; i < 8; ++i)
    for (int s = 0; s < 20; ++s) {
      const Automorphism g = rg.elation(i, rg.sample_nonzero_param(i, rng, 5));
      ASSERT_TRUE(fixes_root_interior(rg, i, g, rng)) << i;
      ASSERT_FALSE(g.is_identity());
      ASSERT_NE(rg.model().act(g, rg.x(i - 1)), rg.x(i - 1));
    }
}

TEST(Elation, HomomorphismProperty) {
  for (const auto& rg : {plane_q(), quadric_q()}) {
    Rng rng(3);
    for (int i = 0; i < 2 * rg.n(); ++i)
      for (int s = 0; s < 30; ++s) {
        Vector a = rg.sample_param(i, rng, 6), b = rg.sample_param(i, rng, 6), ab(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) ab[k] = a[k] + b[k];
        ASSERT_EQ(rg.elation(i, a) * rg.elation(i, b), rg.elation(i, ab)) << i;
      }
  }
}

TEST(Elation, PreservesQuadricForm) {
  const RootGroups rg = quadric_q();
  const auto* qm = dynamic_cast<const QuadricModel*>(&rg.model());
  Rng rng(4);
  for (int i = 0; i < 8; ++i)
    for (int s = 0; s < 20; ++s) {
      const Automorphism g = rg.elation(i, rg.sample_param(i, rng, 4));
      Vector x(6);
      for (auto& c : x) c = sample_element(Q, rng, 5);
      ASSERT_EQ(qm->space().qhat(row_times(x, g.m)), qm->space().qhat(x));
    }
}

TEST(Commutator, PlaneMiddleParameter) {
  const RootGroups rg = plane_q();
  const auto parts = rg.commutator(1, {q(2)}, 3, {q(3)});
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_TRUE(parts[0][0] == q(6) || parts[0][0] == q(-6)) << parts[0][0].str();
  // Sign of the eta identity for [u_1, u_n^{-1}], computed from matrices here.
  const auto p = rg.commutator(1, {q(2)}, 3, {q(-3)});
  const int sign = p[0][0] == q(6) ? 1 : -1;
  EXPECT_EQ(sign, easyprods_sign(rg));
}

TEST(Commutator, QuadricRelations) {
  const RootGroups rg = quadric_q();
  const auto* qm = dynamic_cast<const QuadricModel*>(&rg.model());
  const QuadraticSpace& s = qm->space();
  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    const Vector a = rg.sample_param(2, rng, 5), b = rg.sample_param(4, rng, 5);
    const auto p = rg.commutator(2, a, 4, neg(b));
    ASSERT_EQ(p.size(), 1u);
    ASSERT_EQ(p[0][0], s.f(a, b));
    const Element t = sample_element(Q, rng, 5);
    const auto r = rg.commutator(1, {t}, 4, neg(b));
    ASSERT_EQ(r.size(), 2u);
    Vector tb = b;
    for (auto& c : tb) c = t * c;
    ASSERT_EQ(r[0], tb);
    ASSERT_EQ(r[1][0], t * s.q(b));
  }
}

TEST(Commutator, ZeroParameterGivesZeroFactors) {
  for (const auto& rg : {plane_q(), quadric_q()}) {
    Rng rng(6);
    for (int i = 0; i < 2 * rg.n(); ++i)
      for (int j = i + 1; j <= i + rg.n() - 1; ++j) {
        const auto p = rg.commutator(i, rg.zero(i), j, rg.sample_param(j, rng, 4));
        for (const auto& v : p) ASSERT_TRUE(is_zero_vector(v));
      }
  }
}

TEST(Decompose, UniqueFactorizationRoundTrip) {
  for (const auto& rg : {plane_q(), quadric_q(), quadric_f2()}) {
    Rng rng(7);
    for (int s = 0; s < 60; ++s) {
      const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * rg.n())));
      const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(rg.n())));
      std::vector<Vector> params;
      Automorphism g = Automorphism::identity(rg.field(), rg.model().ambient_dim());
      for (int k = i; k <= j; ++k) {
        params.push_back(rg.sample_param(k, rng, 4));
        g = g * rg.elation(k, params.back());
      }
      ASSERT_EQ(rg.decompose(i, j, g), params);
    }
  }
}

TEST(Decompose, TooLongRangeFails) {
  const RootGroups rg = plane_q();
  EXPECT_THROW(rg.decompose(0, 3, rg.elation(0, q(1))), DecompositionFailure);
  EXPECT_THROW(rg.decompose(1, 1, rg.elation(0, q(1))), DecompositionFailure);
}

TEST(Kappa, PlaneInverseParameter) {
  const RootGroups rg = plane_q();
  EXPECT_EQ(rg.kappa(0, {q(2)}), Vector{q(1, 2)});
  EXPECT_EQ(rg.kappa(0, {q(1)}), Vector{q(1)});
  EXPECT_THROW(rg.kappa(0, {q(0)}), IdentityInput);
  Rng rng(8);
  for (int i = 0; i < 6; ++i)
    for (int s = 0; s < 30; ++s) {
      const Element a = sample_nonzero(Q, rng, 9);
      ASSERT_EQ(rg.kappa(i, {a}), Vector{a.inv()}) << i;
    }
}

TEST(Kappa, QuadricFormula) {
  const RootGroups rg = quadric_q();
  const auto* qm = dynamic_cast<const QuadricModel*>(&rg.model());
  Rng rng(9);
  for (int s = 0; s < 50; ++s) {
    const Vector u = rg.sample_nonzero_param(0, rng, 6);
    const Element qu = qm->space().q(u);
    Vector want = u;
    for (auto& c : want) c = c / qu;
    ASSERT_EQ(rg.kappa(0, u), want);
  }
}

TEST(Kappa, GeometricDefinitionAndInverse) {
  for (const auto& rg : {plane_q(), quadric_q()}) {
    Rng rng(10);
    const int n = rg.n();
    for (int i = 0; i < 2 * n; ++i)
      for (int s = 0; s < 10; ++s) {
        const Vector a = rg.sample_nonzero_param(i, rng, 5);
        const Vector b = rg.kappa(i, a);
        const GeoElement want = rg.model().act(rg.elation(i, a), rg.x(i + n + 1));
        ASSERT_EQ(rg.model().act(rg.elation(i + n, b), rg.x(i + n - 1)), want);
        if (rg.scalar(i)) {
          ASSERT_EQ(rg.kappa_inverse(i, b), a);
        }
      }
  }
}

TEST(Mu, PlaneConjugatesU1ToU2) {
  const RootGroups rg = plane_q();
  const Automorphism mu = rg.mu(0, {q(5)});
  Rng rng(11);
  for (int s = 0; s < 20; ++s) {
    const Element a = sample_nonzero(Q, rng, 7);
    const Automorphism conj = mu.inv() * rg.elation(1, a) * mu;
    ASSERT_EQ(rg.decompose(2, 2, conj).size(), 1u);
  }
}

TEST(Mu, ReflectsHatRackAndConjugatesRootGroups) {
  for (const auto& rg : {plane_q(), quadric_q()}) {
    Rng rng(12);
    const int n = rg.n(), m = 2 * n;
    for (int i = 0; i < m; ++i) {
      const Vector a = rg.sample_nonzero_param(i, rng, 5);
      const Automorphism mu = rg.mu(i, a);
      ASSERT_EQ(rg.model().act(mu, rg.x(i)), rg.x(i));
      ASSERT_EQ(rg.model().act(mu, rg.x(i + n)), rg.x(i + n));
      for (int j = 0; j < m; ++j) {
        // x_j maps to x_{2i-j}, and U_j conjugates into U_{2i+n-j}.
        ASSERT_EQ(rg.model().act(mu, rg.x(j)), rg.x(2 * i - j)) << i << " " << j;
        const Automorphism conj = mu.inv() * rg.elation(j, rg.sample_nonzero_param(j, rng, 4)) * mu;
        const int k = 2 * i + n - j;
        ASSERT_NO_THROW(rg.decompose(k, k, conj)) << i << " " << j;
        const Automorphism twice = (mu * mu).inv() * rg.elation(j, rg.sample_nonzero_param(j, rng, 4)) * (mu * mu);
        ASSERT_NO_THROW(rg.decompose(j, j, twice)) << i << " " << j;
      }
    }
  }
}

TEST(Mu, IdentityInputRefused) { EXPECT_THROW(plane_q().mu(0, {q(0)}), IdentityInput); }

TEST(VWClassify, ThreeAdicExamples) {
  const Valuation v = Valuation::p_adic(Q, 3);
  const Value l = v.zero();
  EXPECT_EQ(vw_classify(v, q(6), l), VWClass::W);
  EXPECT_EQ(vw_classify(v, q(2), l), VWClass::V_minus_W);
  EXPECT_EQ(vw_classify(v, q(1, 3), l), VWClass::outside_V);
}

TEST(SwitchMap, ThreeAdicExamples) {
  const Valuation v = Valuation::p_adic(Q, 3);
  const Value l = v.zero();
  EXPECT_EQ(switch_map(v, l, q(1), q(1, 3)), q(3));
  EXPECT_EQ(vw_classify(v, switch_map(v, l, q(1), q(1, 3)), l), VWClass::W);
  EXPECT_THROW(switch_map(v, l, q(1), q(3)), BadClassification);
  EXPECT_EQ(switch_map(v, l, q(2), q(1, 3)), q(12));
}

TEST(SwitchMap, ImageIsWOnSamples) {
  const Valuation v = Valuation::p_adic(Q, 3);
  Rng rng(13);
  for (int s = 0; s < 300; ++s) {
    const long long lv = rng.range(-2, 2);
    const Value l = Value::integer(lv);
    Element a = sample_nonzero(Q, rng, 20);
    a = a / v.element_of_value(v.value(a)) * v.element_of_value(l);
    Element b = sample_nonzero(Q, rng, 20);
    b = b / v.element_of_value(v.value(b)) * v.element_of_value(Value::integer(lv - 1 - static_cast<long long>(rng.below(3))));
    ASSERT_EQ(vw_classify(v, switch_map(v, l, a, b), l), VWClass::W);
  }
}

TEST(CorProd, VAndWClosedUnderCommutators) {
  // Levels are 0 on the unit hat-rack; commutator factors of V-inputs land in V, with a W input in W.
  for (const auto& rg : {plane_q(), quadric_q()}) {
    const Valuation v = Valuation::p_adic(Q, 3);
    Rng rng(14);
    auto integral = [&](int i, bool w) {
      Vector a = rg.sample_param(i, rng, 6);
      for (auto& c : a) {
        c = sample_integral(v, rng, 9);
        if (w) c = c * q(3);
      }
      return a;
    };
    const int n = rg.n();
    for (int s = 0; s < 100; ++s) {
      const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * n)));
      const int j = i + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      const bool w = rng.coin();
      const auto parts = rg.commutator(i, integral(i, w), j, integral(j, false));
      for (std::size_t k = 0; k < parts.size(); ++k) {
        const Element e = rg.eta(i + 1 + static_cast<int>(k), parts[k]);
        if (e.is_zero()) continue;
        ASSERT_GE(v.value(e), rg.level(i + 1 + static_cast<int>(k), v));
        if (w) {
          ASSERT_GT(v.value(e), rg.level(i + 1 + static_cast<int>(k), v));
        }
      }
    }
  }
}

TEST(LevelTable, TAndQQ) {
  const Value l = Value::integer(1), k = Value::integer(-2);
  EXPECT_EQ(level_table(EtaClass::T, l, k), (std::vector<Value>{l, Value::integer(-1), k}));
  EXPECT_EQ(level_table(EtaClass::QQ, l, k), (std::vector<Value>{l, Value::integer(0), Value::integer(-1), k}));
  EXPECT_THROW(level_table(EtaClass::H, l, k), UnsupportedClass);
}

TEST(Scaling, PlaneLevels) {
  auto m = std::make_shared<PlaneModel>(Q);
  const RootGroups rg = RootGroups::plane(m, {q(1), q(1), q(3)});
  const Valuation v = Valuation::p_adic(Q, 3);
  EXPECT_EQ(rg.level(0, v), Value::integer(1));
  EXPECT_EQ(rg.level(3, v), Value::integer(-1));
  EXPECT_EQ(rg.kappa(0, {q(1)}), Vector{q(1)});
}
