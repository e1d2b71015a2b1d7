#pragma once

/**
 * @file compat.hpp
 * @brief Sampling checkers for the valuation compatibility conditions of each
 *        polygon class, the rank-one strengthened inequalities and the
 *        exceptional-quadrangle condition list.
 *
 * A pass is a certificate on the sampled inputs only; every report records
 * the seed and sample counts, and every failure carries a witness.
 */

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "moufang/geometry.hpp"
#include "moufang/valuation.hpp"

namespace moufang {

namespace detail {

/// Deterministic probe elements: small integers, or small rational functions.
inline std::vector<Element> probe_elements(const FieldPtr& f) {
  std::vector<Element> out;
  if (f->kind() == FieldKind::rational) {
    for (int k : {0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5}) out.push_back(Element::from_int(f, k));
    return out;
  }
  if (f->is_finite()) return enumerate(f);
  out.push_back(Element::zero(f));
  out.push_back(Element::one(f));
  for (const auto& name : f->variables()) {
    const Element x = Element::variable(f, name);
    out.push_back(x);
    out.push_back(x + Element::one(f));
    out.push_back(x.inv());
  }
  return out;
}

/// All vectors of length d over the probe list, in lexicographic probe order.
inline std::vector<Vector> probe_vectors(const FieldPtr& f, std::size_t d, std::size_t limit) {
  const auto p = probe_elements(f);
  std::vector<Vector> out{Vector{}};
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<Vector> next;
    for (const auto& v : out)
      for (const auto& e : p) {
        Vector w = v;
        w.push_back(e);
        next.push_back(std::move(w));
        if (next.size() >= limit) break;
      }
    out = std::move(next);
  }
  std::vector<Vector> nz;
  for (auto& v : out)
    if (!is_zero_vector(v)) nz.push_back(std::move(v));
  return nz;
}

inline std::string vec_text(const Vector& v) { return "(" + vector_str(v) + ")"; }

/// Scalar a with nu(q(a u)) = nu(q(u)) + 2 nu(a) as small as possible but >= k (rank one only).
inline std::optional<Element> rescale_to(const Valuation& v, const Value& qu, const Value& k) {
  if (v.rank() != 1 || qu.is_infinite() || k.is_infinite()) return std::nullopt;
  const long long gap = k.first() - qu.first();
  const long long m = gap >= 0 ? (gap + 1) / 2 : -((-gap) / 2);
  return v.element_of_value(Value::integer(m));
}

}  // namespace detail

/// nu(q(u)), nu(q(v)) >= k  =>  nu(f(u,v)) >= k.
inline CheckReport check_qq(const QuadraticSpace& s, const Valuation& v, const Value& k, Rng rng, std::size_t samples) {
  CheckReport r;
  r.name = "compat_qq";
  auto& c = r.add("qq_inequality");
  r.fact("k", k.str());
  r.fact("seed", std::to_string(rng.seed()));
  std::size_t qualifying = 0;
  auto test = [&](const Vector& a, const Vector& b) {
    const Value qa = v.value(s.q(a)), qb = v.value(s.q(b));
    if (qa < k || qb < k) return;
    ++qualifying;
    const Value fab = v.value(s.f(a, b));
    if (fab < k) {
      r.fail(c, "u=" + detail::vec_text(a) + ", v=" + detail::vec_text(b) + ": nu(q(u))=" + qa.str() + ", nu(q(v))=" + qb.str() + ", nu(f(u,v))=" + fab.str() + " < " + k.str());
      if (r.fact_value("witness_u").empty()) {
        r.fact("witness_u", vector_str(a));
        r.fact("witness_v", vector_str(b));
      }
    }
  };
  // Box phase: each new qualifying vector is paired with itself and all earlier ones.
  std::vector<Vector> seen;
  for (const auto& u : detail::probe_vectors(s.field(), s.dim(), 4096)) {
    if (v.value(s.q(u)) < k) continue;
    seen.push_back(u);
    for (const auto& w : seen) {
      if (!c.passed) break;
      test(w, u);
    }
    if (!c.passed) break;
  }
  // Random phase with adversarial rescalings towards the threshold.
  for (std::size_t t = 0; t < samples && c.passed; ++t) {
    Vector a(s.dim()), b(s.dim());
    for (auto& x : a) x = rng.below(4) == 0 ? Element::zero(s.field()) : sample_valued(v, rng, 6, 2);
    for (auto& x : b) x = rng.below(4) == 0 ? Element::zero(s.field()) : sample_valued(v, rng, 6, 2);
    if (is_zero_vector(a) || is_zero_vector(b)) continue;
    for (Vector* w : {&a, &b})
      if (auto sc = detail::rescale_to(v, v.value(s.q(*w)), k))
        for (auto& x : *w) x = x * *sc;
    test(a, b);
  }
  c.samples = qualifying;
  r.fact("qualifying_pairs", std::to_string(qualifying));
  return r;
}

/// Pseudo-quadratic data: nu(t) = nu(t^sigma), and nu(t), nu(s) >= k => nu(f(u,v)) >= k on T.
struct QPForm {
  std::function<std::pair<Vector, Element>(Rng&)> sample_t;
  std::function<Element(const Vector&, const Vector&)> f;
};

inline CheckReport check_qp(const FieldHom& sigma, const Valuation& v, const Value& k, Rng rng, std::size_t samples,
                            const std::optional<QPForm>& form = std::nullopt) {
  CheckReport r;
  r.name = "compat_qp";
  r.fact("seed", std::to_string(rng.seed()));
  auto& inv = r.add("sigma_invariance");
  std::vector<Element> probes = detail::probe_elements(v.field());
  for (std::size_t t = 0; t < samples; ++t) probes.push_back(sample_valued(v, rng, 4, 2));
  for (const auto& t : probes) {
    if (t.is_zero()) continue;
    ++inv.samples;
    const Value a = v.value(t), b = v.value(sigma(t));
    if (a != b) {
      r.fail(inv, "t=" + t.str() + ": nu(t)=" + a.str() + ", nu(t^sigma)=" + b.str());
      break;
    }
  }
  if (form) {
    auto& ineq = r.add("form_inequality");
    for (std::size_t t = 0; t < samples && ineq.passed; ++t) {
      auto [u, tu] = form->sample_t(rng);
      auto [w, tw] = form->sample_t(rng);
      if (v.value(tu) < k || v.value(tw) < k) continue;
      ++ineq.samples;
      const Value fv = v.value(form->f(u, w));
      if (fv < k) r.fail(ineq, "(u,t)=(" + detail::vec_text(u) + "," + tu.str() + "), (v,s)=(" + detail::vec_text(w) + "," + tw.str() + "): nu(f)=" + fv.str());
    }
  }
  return r;
}

/// nu(N(u)) >= k, nu(N(v)) >= -k  =>  nu(T(u,v)) >= 0.
inline CheckReport check_hex(const std::function<Element(const Element&)>& N,
                             const std::function<Element(const Element&, const Element&)>& T, const Valuation& v, const Value& k,
                             Rng rng, std::size_t samples) {
  CheckReport r;
  r.name = "compat_hex";
  r.fact("seed", std::to_string(rng.seed()));
  auto& c = r.add("hex_inequality");
  const Value zero = v.zero();
  for (std::size_t t = 0; t < samples && c.passed; ++t) {
    const Element u = sample_valued(v, rng, 6, 3), w = sample_valued(v, rng, 6, 3);
    if (v.value(N(u)) < k || v.value(N(w)) < -k) continue;
    ++c.samples;
    const Value tv = v.value(T(u, w));
    if (tv < zero) r.fail(c, "u=" + u.str() + ", v=" + w.str() + ": nu(T(u,v))=" + tv.str());
  }
  return r;
}

/// nu(x) = 0 => nu(x^sigma) = 0; the Tits property x^{sigma sigma} = x^2 is reported only.
inline CheckReport check_oct(const FieldHom& sigma, const Valuation& v, Rng rng, std::size_t samples) {
  CheckReport r;
  r.name = "compat_oct";
  r.fact("seed", std::to_string(rng.seed()));
  auto& c = r.add("unit_preservation");
  std::vector<Element> xs = detail::probe_elements(v.field());
  for (std::size_t t = 0; t < samples; ++t) xs.push_back(sample_valued(v, rng, 4, 2));
  std::string tits = "holds";
  for (Element x : xs) {
    if (x.is_zero()) continue;
    if (!v.is_trivial()) x = x / v.element_of_value(v.value(x));
    ++c.samples;
    const Element sx = sigma(x);
    if (tits == "holds" && !(sigma(sx) == x * x)) tits = "fails at x=" + x.str();
    const Value sv = v.value(sx);
    if (!sv.is_zero()) {
      r.fail(c, "x=" + x.str() + ": nu(x)=0, x^sigma=" + sx.str() + " has nu=" + sv.str());
      r.fact("witness_x", x.str());
      break;
    }
  }
  r.fact("tits_property", tits);
  return r;
}

/// Value samples for the exceptional quadrangle conditions.
struct ExceptionalData {
  /// (phi(a), phi(b), phi(a b^{-1})) for sampled pairs in U_1 and in U_4.
  std::vector<std::array<Value, 3>> u1, u4;
  /// [u_1,u_3] = u_2 as (phi_1, phi_3, phi_2); [u_2,u_4] = u_3 as (phi_2, phi_4, phi_3).
  std::vector<std::array<Value, 3>> c13, c24;
  /// One mu-identity sample: name plus the values it relates.
  struct Mu {
    std::string identity;
    std::vector<Value> args;
    Value image;
  };
  std::vector<Mu> mu;
};

/// Expected image value of a mu identity, or nullopt for an unknown name.
inline std::optional<Value> mu_expected(const std::string& id, const std::vector<Value>& a) {
  auto arity = [&]() -> std::size_t {
    if (id == "phi3(u3^mu1(v1))" || id == "phi2(u2^mu4(v4))") return 1;
    if (id == "phi1(u1^mu1(v1)mu1(w1))" || id == "phi4(u4^mu4(v4)mu4(w4))") return 3;
    return 2;
  };
  if (a.size() != arity()) throw SchemaError("mu identity " + id + " takes " + std::to_string(arity()) + " values");
  // Argument order follows the right-hand sides of the identities.
  if (id == "phi4(u2^mu1(u1))") return a[1] - a[0];
  if (id == "phi2(u4^mu1(u1))") return a[1] + a[0];
  if (id == "phi3(u1^mu4(u4))") return a[0] + a[1].times(2);
  if (id == "phi1(u3^mu4(u4))") return a[0] - a[1].times(2);
  if (arity() == 3) return a[0] - a[1].times(2) + a[2].times(2);
  if (arity() == 1) return a[0];
  return std::nullopt;
}

inline CheckReport check_exceptional(const ExceptionalData& d, const Value& k, const Value& l) {
  CheckReport r;
  r.name = "compat_exceptional";
  auto subgroup = [&](const std::string& name, const std::vector<std::array<Value, 3>>& xs, const Value& level, bool strict) {
    auto& c = r.add(name, true, 0);
    auto in = [&](const Value& x) { return strict ? x > level : x >= level; };
    for (const auto& s : xs) {
      if (!in(s[0]) || !in(s[1])) continue;
      ++c.samples;
      if (!in(s[2])) r.fail(c, "phi(a)=" + s[0].str() + ", phi(b)=" + s[1].str() + ", phi(a b^-1)=" + s[2].str());
    }
  };
  subgroup("U1_geq_k_subgroup", d.u1, k, false);
  subgroup("U1_gt_k_subgroup", d.u1, k, true);
  subgroup("U4_geq_l_subgroup", d.u4, l, false);
  subgroup("U4_gt_l_subgroup", d.u4, l, true);
  const Value kl = k + l, k2l = k + l.times(2);
  enum Rel { eq, gt };
  auto implication = [&](const std::string& name, const std::vector<std::array<Value, 3>>& xs, Rel r0, const Value& t0, Rel r1,
                         const Value& t1, bool strict_out, const Value& out) {
    auto& c = r.add(name, true, 0);
    auto holds = [](Rel rel, const Value& x, const Value& t) { return rel == eq ? x == t : x > t; };
    for (const auto& s : xs) {
      if (!holds(r0, s[0], t0) || !holds(r1, s[1], t1)) continue;
      ++c.samples;
      const bool ok = strict_out ? s[2] > out : s[2] >= out;
      if (!ok) r.fail(c, "inputs " + s[0].str() + ", " + s[1].str() + " give " + s[2].str() + (strict_out ? " <= " : " < ") + out.str());
    }
  };
  implication("c13_eq_gt", d.c13, eq, k, gt, k2l, true, kl);
  implication("c13_gt_eq", d.c13, gt, k, eq, k2l, true, kl);
  implication("c13_eq_eq", d.c13, eq, k, eq, k2l, false, kl);
  implication("c24_eq_gt", d.c24, eq, kl, gt, l, true, k2l);
  implication("c24_gt_eq", d.c24, gt, kl, eq, l, true, k2l);
  implication("c24_eq_eq", d.c24, eq, kl, eq, l, false, k2l);
  auto& mu = r.add("mu_identities", true, 0);
  for (const auto& m : d.mu) {
    auto e = mu_expected(m.identity, m.args);
    if (!e) throw SchemaError("unknown mu identity '" + m.identity + "'");
    ++mu.samples;
    if (!(*e == m.image)) r.fail(mu, m.identity + ": expected " + e->str() + ", got " + m.image.str());
  }
  return r;
}

/// 2 nu(f(u,v)) >= nu(q(u)) + nu(q(v)), and the discrete variant with constant C = 3.
inline CheckReport strengthen_rank1(const QuadraticSpace& s, const Valuation& v, Rng rng, std::size_t samples) {
  if (v.rank() != 1) throw RankNotOne("strengthened inequality needs a rank-one valuation, got rank " + std::to_string(v.rank()));
  CheckReport r;
  r.name = "strengthen_rank1";
  r.fact("seed", std::to_string(rng.seed()));
  auto& half = r.add("halved_sum");
  auto& c3 = r.add("constant_C3");
  const Value six = Value::integer(6);
  auto test = [&](const Vector& a, const Vector& b) {
    const Value qa = v.value(s.q(a)), qb = v.value(s.q(b)), fv = v.value(s.f(a, b));
    const Value lhs = fv.times(2), rhs = qa + qb;
    ++half.samples;
    ++c3.samples;
    const std::string w = "u=" + detail::vec_text(a) + ", v=" + detail::vec_text(b) + ": nu(f)=" + fv.str() + ", nu(q(u))+nu(q(v))=" + rhs.str();
    if (lhs < rhs) r.fail(half, w);
    if (lhs + six < rhs) r.fail(c3, w);
  };
  const auto box = detail::probe_vectors(s.field(), s.dim(), 4096);
  for (std::size_t i = 0; i < box.size() && half.passed; ++i)
    for (std::size_t j = 0; j <= i; ++j) test(box[j], box[i]);
  for (std::size_t t = 0; t < samples; ++t) {
    Vector a(s.dim()), b(s.dim());
    for (auto& x : a) x = sample_valued(v, rng, 6, 2);
    for (auto& x : b) x = sample_valued(v, rng, 6, 2);
    test(a, b);
  }
  return r;
}

}  // namespace moufang
