#pragma once

/**
 * @file suites.hpp
 * @brief Sampled property suites over root groups and epimorphisms: the kappa
 *        and switch lemmas, mu-conjugation, commutator containments, product
 *        descent, rigidity, subring recovery and epimorphism properties.
 */

#include <string>
#include <vector>

#include "moufang/epi.hpp"

namespace moufang {

/// V/W class of x_i(a) from nu(eta(a)) against the level of U_i.
inline VWClass classify(const RootGroups& rg, const Valuation& v, int i, const Vector& a) {
  return vw_classify(v, rg.eta(i, a), rg.level(i, v));
}

/// A parameter x_i(a) of class c, by rejection over scaled samples pi^k u.
inline Vector sample_in_class(const RootGroups& rg, const Valuation& v, int i, VWClass c, Rng& rng) {
  const Element pi = positive_element(v);
  const Element base = v.element_of_value(rg.level(i, v));
  for (int attempt = 0; attempt < 400; ++attempt) {
    Vector a(rg.param_dim(i));
    for (auto& x : a) x = sample_element(rg.field(), rng, 3);
    if (is_zero_vector(a)) continue;
    a = normalize_unit(v, a);
    const int k = static_cast<int>(rng.range(-3, 3));
    const Element s = pi.pow(k) * (rg.scalar(i) ? base : Element::one(rg.field()));
    for (auto& x : a) x = x * s;
    if (classify(rg, v, i, a) == c) return a;
  }
  throw BadClassification(std::string("no sample of class ") + vw_name(c) + " in U_" + std::to_string(rg.norm(i)));
}

inline const VWClass kAllClasses[3] = {VWClass::outside_V, VWClass::V_minus_W, VWClass::W};

inline std::string param_text(const RootGroups& rg, int i, const Vector& a) {
  return "x_" + std::to_string(rg.norm(i)) + "(" + vector_str(a) + ")";
}

/// kappa maps W* to U \ V, V \ W to V \ W and U \ V to W*.
inline CheckReport lemma_kappa(const RootGroups& rg, const Valuation& v, std::size_t samples, Rng rng) {
  CheckReport r;
  r.name = "lemma_kappa";
  auto& w_out = r.add("W_to_outside_V");
  auto& vw_vw = r.add("VW_to_VW");
  auto& out_w = r.add("outside_V_to_W");
  const int m = 2 * rg.n();
  for (std::size_t t = 0; t < samples; ++t) {
    const int i = static_cast<int>(t % static_cast<std::size_t>(m));
    const VWClass c = kAllClasses[(t / static_cast<std::size_t>(m)) % 3];
    const Vector a = sample_in_class(rg, v, i, c, rng);
    const Vector b = rg.kappa(i, a);
    const VWClass got = classify(rg, v, i + rg.n(), b);
    Condition& cond = c == VWClass::W ? w_out : c == VWClass::V_minus_W ? vw_vw : out_w;
    const VWClass want = c == VWClass::W ? VWClass::outside_V : c == VWClass::V_minus_W ? VWClass::V_minus_W : VWClass::W;
    ++cond.samples;
    if (got != want) r.fail(cond, "kappa(" + param_text(rg, i, a) + ") = " + param_text(rg, i + rg.n(), b) + " is " + vw_name(got));
  }
  return r;
}

/// For v in V \ W: g -> kappa^{-1}(kappa(v) kappa(g)) v^{-1} and g -> a g^{-1} a send U \ V into W*.
inline CheckReport lemma_switch(const RootGroups& rg, const Valuation& v, std::size_t samples, Rng rng) {
  CheckReport r;
  r.name = "lemma_switch";
  auto& geo = r.add("geometric_map");
  auto& alg = r.add("switch_map");
  std::vector<int> idx;
  for (int i = 0; i < 2 * rg.n(); ++i)
    if (rg.scalar(i)) idx.push_back(i);
  for (std::size_t t = 0; t < samples; ++t) {
    const int i = idx[t % idx.size()];
    const Vector a = sample_in_class(rg, v, i, VWClass::V_minus_W, rng);
    const Vector g = sample_in_class(rg, v, i, VWClass::outside_V, rng);
    const Vector ka = rg.kappa(i, a), kg = rg.kappa(i, g);
    const Vector prod{ka[0] + kg[0]};
    ++geo.samples;
    if (prod[0].is_zero()) {
      r.fail(geo, "kappa(" + param_text(rg, i, a) + ") kappa(" + param_text(rg, i, g) + ") is trivial");
    } else {
      const Vector w{rg.kappa_inverse(i, prod)[0] - a[0]};
      if (is_zero_vector(w) || classify(rg, v, i, w) != VWClass::W)
        r.fail(geo, "g=" + param_text(rg, i, g) + ", v=" + param_text(rg, i, a) + " gives " + param_text(rg, i, w));
    }
    ++alg.samples;
    const Element s = switch_map(v, rg.level(i, v), a[0], g[0]);
    if (classify(rg, v, i, {s}) != VWClass::W) r.fail(alg, "a g^-1 a = " + s.str() + " for a=" + a[0].str() + ", g=" + g[0].str());
  }
  return r;
}

/// U_j^{mu_i(u)} = U_{2i+n-j}, and for u in V_i \ W_i the V/W classes are carried along.
inline CheckReport cor_switch(const RootGroups& rg, const Valuation& v, std::size_t samples, Rng rng) {
  CheckReport r;
  r.name = "cor_switch";
  auto& index = r.add("conjugate_in_U_2i+n-j");
  auto& cls = r.add("classes_preserved");
  const int m = 2 * rg.n();
  for (std::size_t t = 0; t < samples; ++t) {
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
    const int k = 2 * i + rg.n() - j;
    const Vector u = sample_in_class(rg, v, i, VWClass::V_minus_W, rng);
    const VWClass c = kAllClasses[t % 3];
    const Vector a = sample_in_class(rg, v, j, c, rng);
    const Automorphism mu = rg.mu(i, u);
    const Automorphism conj = mu.inv() * rg.elation(j, a) * mu;
    ++index.samples;
    const auto b = rg.solve(k, rg.model().act(conj, rg.x(k - 1)));
    if (!b || !(rg.elation(k, *b).inv() * conj).is_identity()) {
      r.fail(index, "conjugate of " + param_text(rg, j, a) + " by mu_" + std::to_string(rg.norm(i)) + "(" + vector_str(u) + ") is not in U_" + std::to_string(rg.norm(k)));
      continue;
    }
    ++cls.samples;
    const VWClass got = classify(rg, v, k, *b);
    if (got != c) r.fail(cls, param_text(rg, j, a) + " (" + vw_name(c) + ") goes to " + param_text(rg, k, *b) + " (" + vw_name(got) + ")");
  }
  return r;
}

/// [V_i, V_j] <= V_[i+1,j-1] and [V_i, W_j], [W_i, V_j] <= W_[i+1,j-1].
inline CheckReport cor_prod(const RootGroups& rg, const Valuation& v, std::size_t samples, Rng rng) {
  CheckReport r;
  r.name = "cor_prod";
  auto& vv = r.add("V_V_in_V");
  auto& vw = r.add("V_W_in_W");
  auto& wv = r.add("W_V_in_W");
  const int n = rg.n();
  for (std::size_t t = 0; t < samples; ++t) {
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * n)));
    const int j = i + 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 2)));
    const int mode = static_cast<int>(t % 3);
    const Vector a = sample_in_class(rg, v, i, mode == 2 ? VWClass::W : VWClass::V_minus_W, rng);
    const Vector b = sample_in_class(rg, v, j, mode == 1 ? VWClass::W : VWClass::V_minus_W, rng);
    const auto factors = rg.commutator(i, a, j, b);
    Condition& cond = mode == 0 ? vv : mode == 1 ? vw : wv;
    ++cond.samples;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      const int k = i + 1 + static_cast<int>(f);
      const VWClass got = classify(rg, v, k, factors[f]);
      const bool ok = mode == 0 ? got != VWClass::outside_V : got == VWClass::W;
      if (!ok) {
        r.fail(cond, "[" + param_text(rg, i, a) + ", " + param_text(rg, j, b) + "] has factor " + param_text(rg, k, factors[f]) + " in " + vw_name(got));
        break;
      }
    }
  }
  return r;
}

/// A product u_i ... u_j descends iff every factor descends; fibre preservation decides the product.
inline CheckReport lemma_prod(const Epimorphism& e, const RootGroups& rg, std::size_t samples, Rng rng, std::size_t trials = 40) {
  CheckReport r;
  r.name = "lemma_prod";
  auto& c = r.add("product_descent_equivalence");
  const Valuation& v = e.valuation();
  const int n = rg.n();
  std::size_t descending = 0;
  for (std::size_t t = 0; t < samples; ++t) {
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * n)));
    const int len = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    // Bias toward all-descending products so both outcomes are exercised.
    const bool all_down = rng.coin();
    Automorphism g = Automorphism::identity(rg.field(), rg.model().ambient_dim());
    bool factors_descend = true;
    std::string desc;
    for (int k = i; k < i + len; ++k) {
      const VWClass cls = all_down ? kAllClasses[1 + rng.below(2)] : kAllClasses[rng.below(3)];
      const Vector a = sample_in_class(rg, v, k, cls, rng);
      factors_descend = factors_descend && descends(e, rg, k, a) != Descent::no;
      g = g * rg.elation(k, a);
      desc += param_text(rg, k, a);
    }
    Rng sub = rng.split(t);
    const auto violation = fibre_violation(e, g, sub, trials);
    const bool product_descends = !violation;
    descending += product_descends;
    ++c.samples;
    if (product_descends != factors_descend)
      r.fail(c, desc + (factors_descend ? " has descending factors but breaks fibres at " + *violation : " preserves sampled fibres with a non-descending factor"));
  }
  r.fact("descending_products", std::to_string(descending));
  return r;
}

/// x_1^omega maps opposite x_{n+1} iff every factor of omega = u_2 ... u_n descends.
inline CheckReport lemma_rigid(const Epimorphism& e, const RootGroups& rg, std::size_t samples, Rng rng) {
  CheckReport r;
  r.name = "lemma_rigid";
  auto& c = r.add("opposition_equivalence");
  const Valuation& v = e.valuation();
  const int n = rg.n();
  const GeoElement far = e(rg.x(n + 1));
  for (std::size_t t = 0; t < samples; ++t) {
    Automorphism w = Automorphism::identity(rg.field(), rg.model().ambient_dim());
    bool all = true;
    std::string desc;
    const bool all_down = rng.coin();
    for (int k = 2; k <= n; ++k) {
      const Vector a = sample_in_class(rg, v, k, all_down ? kAllClasses[1 + rng.below(2)] : kAllClasses[rng.below(3)], rng);
      all = all && descends(e, rg, k, a) != Descent::no;
      w = w * rg.elation(k, a);
      desc += param_text(rg, k, a);
    }
    const bool opp = e.target()->opposite(e(rg.model().act(w, rg.x(1))), far);
    ++c.samples;
    if (opp != all) r.fail(c, "omega = " + desc + (all ? ": image not opposite" : ": image opposite"));
  }
  return r;
}

/// R = B u C u {0} from the classes of x_i(y t), on the first root with scalar parameters,
/// is a total subring with units B.
inline CheckReport subring_recovery(const RootGroups& rg, const Valuation& v, std::size_t samples, Rng rng) {
  CheckReport r;
  r.name = "subring_recovery";
  int i = 0;
  while (!rg.scalar(i)) ++i;
  r.fact("root", "U" + std::to_string(i));
  const Element t = sample_in_class(rg, v, i, VWClass::V_minus_W, rng)[0];
  auto cls = [&](const Element& y) { return classify(rg, v, i, {y * t}); };
  auto in_r = [&](const Element& y) { return y.is_zero() || cls(y) != VWClass::outside_V; };
  auto& one = r.add("contains_one", in_r(Element::one(rg.field())), 1);
  if (!one.passed) one.witness = "1 is not in R";
  auto& add = r.add("closed_under_addition");
  auto& mul = r.add("closed_under_multiplication");
  auto& units = r.add("units_are_B");
  auto& total = r.add("total");
  auto& ring = r.add("equals_valuation_ring");
  auto member = [&](Rng& g) {
    const VWClass c = kAllClasses[1 + g.below(2)];
    return sample_in_class(rg, v, i, c, g)[0] / t;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    const Element a = member(rng), b = member(rng);
    ++add.samples;
    if (!in_r(a + b)) r.fail(add, a.str() + " + " + b.str());
    ++mul.samples;
    if (!in_r(a * b)) r.fail(mul, a.str() + " * " + b.str());
    if (!a.is_zero()) {
      ++units.samples;
      if (in_r(a.inv()) != (cls(a) == VWClass::V_minus_W)) r.fail(units, a.str() + " is " + vw_name(cls(a)) + " but its inverse is " + (in_r(a.inv()) ? "" : "not ") + "in R");
    }
    const Element y = sample_valued(v, rng, 4, 3);
    ++total.samples;
    if (!in_r(y) && !in_r(y.inv())) r.fail(total, "neither " + y.str() + " nor its inverse is in R");
    ++ring.samples;
    if (in_r(y) != (v.value(y) >= v.zero())) r.fail(ring, y.str() + " has value " + v.value(y).str());
  }
  r.fact("t", t.str());
  return r;
}

/// The quoted commutator relations of T and Q_Q, with the easyprods sign as a fact.
inline CheckReport commutator_relations(const RootGroups& rg, std::size_t samples, Rng rng) {
  CheckReport r;
  r.name = "commutator_relations";
  r.fact("easyprods_sign", std::to_string(easyprods_sign(rg)));
  auto neg = [](Vector b) {
    for (auto& c : b) c = -c;
    return b;
  };
  if (rg.eta_class() == EtaClass::T) {
    auto& c13 = r.add("[x1(a),x3(b)]=x2(ab)");
    auto& c02 = r.add("[x0(a),x2(b)]=x1(-ab)");
    for (std::size_t t = 0; t < samples; ++t) {
      const Vector a = rg.sample_param(1, rng, 9), b = rg.sample_param(3, rng, 9);
      ++c13.samples;
      if (rg.commutator(1, a, 3, b) != std::vector<Vector>{{a[0] * b[0]}}) r.fail(c13, "a=" + a[0].str() + ", b=" + b[0].str());
      ++c02.samples;
      if (rg.commutator(0, a, 2, b) != std::vector<Vector>{{-(a[0] * b[0])}}) r.fail(c02, "a=" + a[0].str() + ", b=" + b[0].str());
    }
    return r;
  }
  const auto& q = dynamic_cast<const QuadricModel&>(rg.model()).space();
  auto& c24 = r.add("[x2(a),x4(b)^-1]=x3(f(a,b))");
  auto& c14 = r.add("[x1(t),x4(b)^-1]=x2(tb)x3(tq(b))");
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector a = rg.sample_param(2, rng, 5), b = rg.sample_param(4, rng, 5);
    const Element t = sample_element(rg.field(), rng, 5);
    ++c24.samples;
    if (rg.commutator(2, a, 4, neg(b)) != std::vector<Vector>{{q.f(a, b)}}) r.fail(c24, "a=(" + vector_str(a) + "), b=(" + vector_str(b) + ")");
    Vector tb = b;
    for (auto& c : tb) c = c * t;
    ++c14.samples;
    if (rg.commutator(1, {t}, 4, neg(b)) != std::vector<Vector>{tb, {t * q.q(b)}}) r.fail(c14, "t=" + t.str() + ", b=(" + vector_str(b) + ")");
  }
  return r;
}

/// Refactoring a random product u_i ... u_j returns its factors.
inline CheckReport unique_decomposition(const RootGroups& rg, std::size_t samples, Rng rng) {
  CheckReport r;
  r.name = "unique_decomposition";
  auto& c = r.add("refactor");
  const int n = rg.n();
  for (std::size_t t = 0; t < samples; ++t) {
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * n)));
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    std::vector<Vector> params;
    Automorphism g = Automorphism::identity(rg.field(), rg.model().ambient_dim());
    for (int k = i; k <= j; ++k) {
      params.push_back(rg.sample_param(k, rng, 5));
      g = g * rg.elation(k, params.back());
    }
    ++c.samples;
    if (rg.decompose(i, j, g) != params) {
      std::string d;
      for (int k = i; k <= j; ++k) d += param_text(rg, k, params[static_cast<std::size_t>(k - i)]);
      r.fail(c, d);
    }
  }
  return r;
}

// ---------------------------------------------------------------- epimorphism properties

/// Every element of the finite target has an explicit lift.
inline CheckReport epi_surjective(const Epimorphism& e, Rng rng) {
  CheckReport r;
  r.name = "epi_surjective";
  if (!e.target()->field()->is_finite()) throw UnsupportedClass("surjectivity is checked exhaustively on finite targets only");
  FiniteModel fm(e.target());
  auto& c = r.add("every_target_element_lifted");
  for (const auto& y : fm.elements) {
    ++c.samples;
    try {
      const GeoElement x = e.is_identity() ? y : fibers_sample(e, y, 1, rng)[0];
      if (e(x) != y) r.fail(c, x.str() + " maps to " + e(x).str() + ", not " + y.str());
    } catch (const LiftFailure& f) {
      r.fail(c, f.what());
    }
  }
  r.fact("target_elements", std::to_string(fm.elements.size()));
  return r;
}

/// Incident pairs map to incident pairs of the target, and singular elements to singular elements.
inline CheckReport epi_incidence(const Epimorphism& e, std::size_t pairs, Rng rng) {
  CheckReport r;
  r.name = "epi_incidence";
  auto& c = r.add("incidence_preserved");
  auto& s = r.add("images_in_target");
  const PolygonModel& src = *e.source();
  const PolygonModel& dst = *e.target();
  for (std::size_t t = 0; t < pairs; ++t) {
    const GeoElement x = random_element(e, t % 2 ? Kind::line : Kind::point, rng);
    const GeoElement y = sample_incident_pair(e, x, rng, false).first;
    ++c.samples;
    ++s.samples;
    if (!src.contains(x) || !src.contains(y) || !src.incident(x, y)) {
      r.fail(c, "sampler produced a non-incident pair " + x.str() + ", " + y.str());
      continue;
    }
    const GeoElement a = e(x), b = e(y);
    if (!dst.contains(a) || !dst.contains(b)) r.fail(s, x.str() + " or " + y.str() + " leaves the target");
    else if (a.kind == b.kind || !dst.incident(a, b)) r.fail(c, x.str() + " I " + y.str() + " but images " + a.str() + ", " + b.str() + " are not incident");
  }
  return r;
}

/// At least n distinct preimages over every element of the finite target.
inline CheckReport epi_fibres(const Epimorphism& e, std::size_t n, Rng rng) {
  CheckReport r;
  r.name = "epi_fibres";
  if (!e.target()->field()->is_finite()) throw UnsupportedClass("fibres are enumerated over finite targets only");
  FiniteModel fm(e.target());
  auto& c = r.add("distinct_preimages");
  for (const auto& y : fm.elements) {
    ++c.samples;
    try {
      fibers_sample(e, y, n, rng);
    } catch (const LiftFailure& f) {
      r.fail(c, f.what());
    }
  }
  r.fact("per_element", std::to_string(n));
  return r;
}

/// Adjacent image chambers lift to adjacent source chambers: given a chamber (p, L) and
/// L' through p^phi, some line through p maps to L'.
inline CheckReport epi_find_lift(const Epimorphism& e, std::size_t samples, Rng rng, std::size_t budget = 400) {
  CheckReport r;
  r.name = "epi_find_lift";
  auto& c = r.add("adjacent_chamber_lifted");
  for (std::size_t t = 0; t < samples; ++t) {
    const GeoElement p = random_element(e, t % 2 ? Kind::line : Kind::point, rng);
    const GeoElement want = e(sample_incident_pair(e, p, rng, false).first);
    ++c.samples;
    bool found = false;
    for (std::size_t k = 0; k < budget && !found; ++k) found = e(sample_incident_pair(e, p, rng, false).first) == want;
    if (!found) r.fail(c, "no element incident with " + p.str() + " maps to " + want.str());
  }
  return r;
}

/// The image root groups satisfy the Moufang condition and the hat-rack lands on the image hat-rack.
inline CheckReport image_moufang(const Epimorphism& e, const RootGroups& rg) {
  if (!e.target()->field()->is_finite()) throw UnsupportedClass("Moufang verification needs a finite image");
  FiniteModel fm(e.target());
  std::optional<RootGroups> image;
  if (auto p = std::dynamic_pointer_cast<const PlaneModel>(e.target())) image = RootGroups::plane(p);
  else image = RootGroups::quadric(std::dynamic_pointer_cast<const QuadricModel>(e.target()));
  CheckReport r = verify_moufang(fm, image->datum());
  r.name = "image_moufang";
  auto& h = r.add("hatrack_image");
  for (int k = 0; k < 2 * rg.n(); ++k) {
    ++h.samples;
    if (e(rg.x(k)) != image->x(k)) r.fail(h, "x_" + std::to_string(k) + " maps to " + e(rg.x(k)).str() + ", not " + image->x(k).str());
  }
  return r;
}

/// The reduced form is anisotropic, exhaustively over a finite residue field.
inline CheckReport residue_anisotropic(const QuadraticSpace& s, const Valuation& v) {
  CheckReport r;
  r.name = "residue_anisotropic";
  const QuadraticSpace res = residue_space(s, v);
  const bool finite = res.field()->is_finite();
  std::size_t count = 1;
  if (finite)
    for (std::size_t k = 0; k < res.dim(); ++k) count *= res.field()->order();
  auto& c = r.add("no_isotropic_vector", true, finite ? count - 1 : 4096);
  if (auto w = isotropic_vector(res, Rng(0x5eed))) r.fail(c, "q(" + vector_str(*w) + ") = 0");
  r.fact("residue_form", res.str());
  r.fact("search", finite ? "exhaustive" : "sampled");
  return r;
}

}  // namespace moufang
