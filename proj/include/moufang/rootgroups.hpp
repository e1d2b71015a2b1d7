#pragma once

/**
 * @file rootgroups.hpp
 * @brief Root groups of the hat-rack for T(K) and Q_Q(K, L0, q): matrix
 *        elations, unique decomposition, kappa and mu maps, norm functions
 *        and the V/W classification by levels.
 */

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "moufang/geometry.hpp"
#include "moufang/rng.hpp"
#include "moufang/valuation.hpp"

namespace moufang {

enum class VWClass { outside_V, V_minus_W, W };

inline const char* vw_name(VWClass c) {
  switch (c) {
    case VWClass::outside_V: return "outside-V";
    case VWClass::V_minus_W: return "V-minus-W";
    case VWClass::W: return "W";
  }
  return "?";
}

/// Three-way comparison of nu(eta(a)) with a level.
inline VWClass vw_classify(const Value& value, const Value& level) {
  if (value < level) return VWClass::outside_V;
  if (value == level) return VWClass::V_minus_W;
  return VWClass::W;
}
inline VWClass vw_classify(const Valuation& v, const Element& eta_value, const Value& level) {
  return vw_classify(v.value(eta_value), level);
}

/// a b^{-1} a for a in V minus W and b outside V.
inline Element switch_map(const Valuation& v, const Value& level, const Element& a, const Element& b) {
  if (vw_classify(v, a, level) != VWClass::V_minus_W)
    throw BadClassification("switch_map needs a in V minus W, " + a.str() + " is " + vw_name(vw_classify(v, a, level)));
  if (vw_classify(v, b, level) != VWClass::outside_V)
    throw BadClassification("switch_map needs b outside V, " + b.str() + " is " + vw_name(vw_classify(v, b, level)));
  const Element r = a * b.inv() * a;
  if (vw_classify(v, r, level) != VWClass::W) throw BadClassification("switch image " + r.str() + " is not in W");
  return r;
}

/// Norm functions eta of the root group parameters, per class and parity.
enum class EtaClass { T, QQ, QD, QP, QE, QF, H, O };

inline std::string eta_name(EtaClass c, bool odd) {
  switch (c) {
    case EtaClass::T: return "id";
    case EtaClass::QQ: return odd ? "id" : "q";
    case EtaClass::QD: return odd ? "a" : "a^2";
    case EtaClass::QP: return odd ? "(a,t) -> t" : "id";
    case EtaClass::QE: return odd ? "(a,t) -> q(pi(a)+t)" : "q";
    case EtaClass::QF: return odd ? "qhat" : "q";
    case EtaClass::H: return odd ? "N" : "id";
    case EtaClass::O: return odd ? "id" : "R(u,v)";
  }
  return "?";
}

/// R(u,v) = v^{sigma+2} + uv + u^sigma.
inline Element octagon_R(const FieldHom& sigma, const Element& u, const Element& v) { return sigma(v) * v * v + u * v + sigma(u); }

/// Root groups U_0..U_{2n-1} attached to the coordinate hat-rack.
class RootGroups {
 public:
  /// Plane root groups, optionally reparametrized by the diagonal scaling d: x'_i(a) = D^{-1} x_i(a) D.
  static RootGroups plane(std::shared_ptr<const PlaneModel> m, Vector scaling = {}) {
    RootGroups r;
    const auto& f = m->field();
    if (scaling.empty()) scaling = Vector(3, Element::one(f));
    for (const auto& s : scaling)
      if (s.is_zero()) throw DivisionByZero("hat-rack scaling entries must be nonzero");
    r.scaling_ = std::move(scaling);
    r.plane_ = m;
    r.model_ = m;
    r.hat_ = {m->point("1", "0", "0"), m->line("0", "0", "1"), m->point("0", "1", "0"),
              m->line("1", "0", "0"), m->point("0", "0", "1"), m->line("0", "1", "0")};
    return r;
  }
  static RootGroups quadric(std::shared_ptr<const QuadricModel> m) {
    RootGroups r;
    r.quad_ = m;
    r.model_ = m;
    auto e = [&](std::size_t k) { return m->basis(k); };
    auto pt = [&](std::size_t k) { return m->make(Kind::point, {e(k)}); };
    auto ln = [&](std::size_t a, std::size_t b) { return m->make(Kind::line, {e(a), e(b)}); };
    r.hat_ = {pt(0), ln(0, 2), pt(2), ln(2, 1), pt(1), ln(1, 3), pt(3), ln(3, 0)};
    return r;
  }

  const PolygonModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  const FieldPtr& field() const { return model_->field(); }
  int n() const { return model_->gonality(); }
  int norm(int i) const { return ((i % (2 * n())) + 2 * n()) % (2 * n()); }
  const GeoElement& x(int i) const { return hat_[static_cast<std::size_t>(norm(i))]; }
  const std::vector<GeoElement>& hatrack() const { return hat_; }
  const Vector& scaling() const { return scaling_; }

  bool scalar(int i) const { return plane_ || norm(i) % 2 == 1; }
  std::size_t param_dim(int i) const { return scalar(i) ? 1 : quad_->space().dim(); }
  Vector zero(int i) const { return Vector(param_dim(i), Element::zero(field())); }

  Automorphism elation(int i, const Vector& a) const {
    if (a.size() != param_dim(i)) throw BadParameterDomain("U_" + std::to_string(norm(i)) + " takes " + std::to_string(param_dim(i)) + " coordinates, got " + std::to_string(a.size()));
    for (const auto& c : a)
      if (!same_field(c.field(), field())) throw BadParameterDomain("parameter " + c.str() + " is not in " + field()->describe());
    const int k = norm(i);
    if (plane_) {
      static const std::size_t rc[6][2] = {{2, 1}, {0, 1}, {0, 2}, {1, 2}, {1, 0}, {2, 0}};
      const std::size_t r = rc[k][0], c = rc[k][1];
      const Element t = a[0] * scaling_[c] / scaling_[r];
      Matrix m = Matrix::identity(field(), 3), d = Matrix::identity(field(), 3);
      m(r, c) = t;
      d(c, r) = -t;
      return {m, d};
    }
    static const int eps[8] = {-1, 1, 1, 1, 1, -1, -1, -1};
    const Element e = Element::from_int(field(), eps[k]);
    if (k % 2 == 0) {
      Vector v = quad_->l0_vector(a);
      for (auto& c : v) c = c * e;
      return Automorphism(quad_->eichler(x(k + 2).rows[0], v));
    }
    static const std::size_t pairs[8][2] = {{0, 0}, {2, 1}, {0, 0}, {1, 3}, {0, 0}, {3, 0}, {0, 0}, {0, 2}};
    return Automorphism(quad_->siegel(quad_->basis(pairs[k][0]), quad_->basis(pairs[k][1]), a[0] * e));
  }
  Automorphism elation(int i, const Element& a) const { return elation(i, Vector{a}); }

  Element eta(int i, const Vector& a) const {
    if (a.size() != param_dim(i)) throw BadParameterDomain("U_" + std::to_string(norm(i)) + " takes " + std::to_string(param_dim(i)) + " coordinates, got " + std::to_string(a.size()));
    if (scalar(i)) return a[0];
    return quad_->space().q(a);
  }
  EtaClass eta_class() const { return plane_ ? EtaClass::T : EtaClass::QQ; }

  /// Level of U_i under the hat-rack scaling: nu(d_r) - nu(d_c) on the plane, 0 otherwise.
  Value level(int i, const Valuation& v) const {
    if (!plane_) return v.zero();
    static const std::size_t rc[6][2] = {{2, 1}, {0, 1}, {0, 2}, {1, 2}, {1, 0}, {2, 0}};
    const int k = norm(i);
    return v.value(scaling_[rc[k][0]]) - v.value(scaling_[rc[k][1]]);
  }

  /// The parameter a with x_{i-1}^{x_i(a)} = target, if any.
  std::optional<Vector> solve(int i, const GeoElement& target) const {
    const GeoElement& base = x(i - 1);
    if (target == base) return zero(i);
    if (scalar(i)) return solve_scalar(i, base, target);
    // The image of x_{i-2} is the point of the target line collinear with x_{i+4}.
    if (target.kind != Kind::line || !quad_->incident(x(i), target) || quad_->incident(x(i + 4), target)) return std::nullopt;
    const GeoElement y = quad_->perp_point(target, x(i + 4));
    const Vector& yb = x(i - 2).rows[0];
    std::size_t piv = 0;
    while (yb[piv].is_zero()) ++piv;
    if (y.rows[0][piv].is_zero()) return std::nullopt;
    const Element s = y.rows[0][piv].inv();
    static const int eps[8] = {-1, 1, 1, 1, 1, -1, -1, -1};
    const Element e = Element::from_int(field(), eps[norm(i)]);
    Vector v;
    for (std::size_t k = 4; k < quad_->ambient_dim(); ++k) v.push_back(y.rows[0][k] * s * e);
    if (model_->act(elation(i, v), base) == target) return v;
    return std::nullopt;
  }

  /// For scalar U_i: the a with base^{x_i(a)} = target, for any base moved linearly by U_i.
  std::optional<Vector> solve_scalar(int i, const GeoElement& base, const GeoElement& target) const {
    if (!scalar(i)) throw BadParameterDomain("U_" + std::to_string(norm(i)) + " is not a scalar root group");
    if (target == base) return zero(i);
    if (target.kind != base.kind) return std::nullopt;
    const Vector y = base.rows[0];
    const Vector w = raw(elation(i, Element::one(field())), base);
    std::size_t piv = 0;
    while (y[piv].is_zero()) ++piv;
    const Vector& t = target.rows[0];
    if (t[piv].is_zero()) return std::nullopt;
    const Element s = y[piv] / t[piv];
    std::optional<Vector> a;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const Element delta = w[k] - y[k];
      if (delta.is_zero()) continue;
      a = Vector{(t[k] * s - y[k]) / delta};
      break;
    }
    if (a && model_->act(elation(i, *a), base) == target) return a;
    return std::nullopt;
  }

  /// The element g of U_i with kappa_i(g) = x_{i+n}(b), for scalar U_i.
  Vector kappa_inverse(int i, const Vector& b) const {
    if (is_zero_vector(b)) throw IdentityInput("kappa is defined on nonidentity elations");
    const GeoElement t = model_->act(elation(i + n(), b), x(i + n() - 1));
    auto a = solve_scalar(i, x(i + n() + 1), t);
    if (!a) throw DecompositionFailure("no element of U_" + std::to_string(norm(i)) + " maps x_" + std::to_string(norm(i + n() + 1)) + " to " + t.str());
    return *a;
  }

  /// Unique factorization g = u_i u_{i+1} ... u_j with u_k in U_k (j - i < n).
  std::vector<Vector> decompose(int i, int j, Automorphism g) const {
    if (j - i >= n()) throw DecompositionFailure("decomposition range [" + std::to_string(i) + "," + std::to_string(j) + "] is too long");
    std::vector<Vector> out(static_cast<std::size_t>(std::max(0, j - i + 1)));
    for (int k = j; k >= i; --k) {
      const GeoElement t = model_->act(g, x(k - 1));
      auto a = solve(k, t);
      if (!a) throw DecompositionFailure("x_" + std::to_string(k - 1) + " is moved to " + t.str() + ", outside the U_" + std::to_string(norm(k)) + "-orbit");
      out[static_cast<std::size_t>(k - i)] = *a;
      g = g * elation(k, *a).inv();
    }
    if (!g.is_identity()) throw DecompositionFailure("residual element after peeling U_" + std::to_string(norm(i)) + "..U_" + std::to_string(norm(j)));
    return out;
  }

  /// [x_i(a), x_j(b)] factored through U_{i+1} .. U_{j-1}.
  std::vector<Vector> commutator(int i, const Vector& a, int j, const Vector& b) const {
    if (j <= i || j - i > n() - 1) throw DecompositionFailure("commutator needs i < j <= i+n-1");
    return decompose(i + 1, j - 1, moufang::commutator(elation(i, a), elation(j, b)));
  }

  /// kappa_i(x_i(a)) in U_{i+n}: the element mapping x_{i+n-1} to x_{i+n+1}^{x_i(a)}.
  Vector kappa(int i, const Vector& a) const {
    if (is_zero_vector(a)) throw IdentityInput("kappa is defined on nonidentity elations");
    const GeoElement t = model_->act(elation(i, a), x(i + n() + 1));
    auto b = solve(i + n(), t);
    if (!b) throw DecompositionFailure("kappa target " + t.str() + " is not in the U_" + std::to_string(norm(i + n())) + "-orbit");
    return *b;
  }

  /// The reflection kappa(u^{-1}) u kappa(u)^{-1} attached to u = x_i(a).
  Automorphism mu(int i, const Vector& a) const {
    if (is_zero_vector(a)) throw IdentityInput("mu is defined on nonidentity elations");
    Vector neg = a;
    for (auto& c : neg) c = -c;
    return elation(i + n(), kappa(i, neg)) * elation(i, a) * elation(i + n(), kappa(i, a)).inv();
  }

  Vector sample_param(int i, Rng& rng, int bound) const {
    Vector v(param_dim(i));
    for (auto& c : v) c = sample_element(field(), rng, bound);
    return v;
  }
  Vector sample_nonzero_param(int i, Rng& rng, int bound) const {
    for (;;) {
      Vector v = sample_param(i, rng, bound);
      if (!is_zero_vector(v)) return v;
    }
  }

  /// Every parameter of U_i over a finite field.
  std::vector<Vector> all_params(int i) const {
    auto elems = enumerate(field());
    std::vector<Vector> out{Vector{}};
    for (std::size_t k = 0; k < param_dim(i); ++k) {
      std::vector<Vector> next;
      for (const auto& v : out)
        for (const auto& e : elems) {
          Vector w = v;
          w.push_back(e);
          next.push_back(w);
        }
      out = std::move(next);
    }
    return out;
  }
  RootDatum datum() const {
    return {hat_, [this](int i) {
              std::vector<Automorphism> g;
              for (const auto& a : all_params(i)) g.push_back(elation(i, a));
              return g;
            }};
  }

  std::string describe() const {
    std::string s = "hat-rack ";
    for (std::size_t k = 0; k < hat_.size(); ++k) s += (k ? " " : "") + hat_[k].str();
    if (plane_) s += " scaling (" + vector_str(scaling_) + ")";
    return s;
  }

 private:
  RootGroups() = default;

  Vector raw(const Automorphism& g, const GeoElement& e) const {
    return row_times(e.rows[0], e.kind == Kind::point || !plane_ ? g.m : g.dual);
  }

  ModelPtr model_;
  std::shared_ptr<const PlaneModel> plane_;
  std::shared_ptr<const QuadricModel> quad_;
  std::vector<GeoElement> hat_;
  Vector scaling_;
};

/// Level vector over U_1..U_n for the T and Q_Q tables.
inline std::vector<Value> level_table(EtaClass c, const Value& l, const Value& k) {
  if (c == EtaClass::T) return {l, l + k, k};
  if (c == EtaClass::QQ) return {l, l.times(2) + k, l + k, k};
  throw UnsupportedClass("level table is implemented for T and Q_Q");
}

/// The sign in eta_j(u_j) = +- eta_1(u_1) eta_n(u_n) for [u_1, u_n^{-1}], j = n-1.
inline int easyprods_sign(const RootGroups& rg) {
  const FieldPtr& f = rg.field();
  const int n = rg.n();
  Vector a = rg.zero(1), b = rg.zero(n);
  a[0] = Element::one(f);
  b[0] = Element::one(f);
  Vector binv = b;
  for (auto& c : binv) c = -c;
  const auto parts = rg.decompose(2, n - 1, commutator(rg.elation(1, a), rg.elation(n, binv)));
  const Element lhs = rg.eta(n - 1, parts.back());
  const Element rhs = rg.eta(1, a) * rg.eta(n, b);
  if (lhs == rhs) return 1;
  if (lhs == -rhs) return -1;
  throw DecompositionFailure("eta_{n-1} factor " + lhs.str() + " is not +-" + rhs.str());
}

}  // namespace moufang
