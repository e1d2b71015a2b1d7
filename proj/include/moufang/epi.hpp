#pragma once

/**
 * @file epi.hpp
 * @brief Place-induced epimorphisms onto residue geometries, the geometric
 *        descent oracle, Property (*), fibre lifting, realization of
 *        descriptors of finite rank and factorization through coarsening.
 */

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "moufang/compat.hpp"
#include "moufang/flags.hpp"
#include "moufang/rootgroups.hpp"

namespace moufang {

// ---------------------------------------------------------------- reduction

/// Index of the first coordinate of minimal value.
inline std::size_t min_value_index(const Valuation& v, const Vector& x, std::size_t end = std::size_t(-1)) {
  std::size_t best = x.size();
  Value bv = v.infinity();
  for (std::size_t i = 0; i < x.size() && i < end; ++i) {
    if (x[i].is_zero()) continue;
    const Value vi = v.value(x[i]);
    if (best == x.size() || vi < bv) {
      best = i;
      bv = vi;
    }
  }
  if (best == x.size()) throw DivisionByZero("zero vector has no pivot");
  return best;
}

/// Scale x by the inverse of its first coordinate of minimal value.
inline Vector normalize_unit(const Valuation& v, Vector x) {
  const Element s = x[min_value_index(v, x)].inv();
  for (auto& c : x) c = c * s;
  return x;
}

inline Vector reduce_coordinates(const Valuation& v, const Vector& x) {
  Vector out;
  out.reserve(x.size());
  for (const auto& c : x) out.push_back(v.reduce(c));
  return out;
}

/// Nested Hermite pivoting: row k becomes integral with a unit pivot and zeros
/// at the pivots of earlier rows, so the first k rows span the saturated lattice.
inline std::vector<Vector> saturate(const Valuation& v, std::vector<Vector> rows) {
  std::vector<std::size_t> piv;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    Vector& r = rows[k];
    for (std::size_t m = 0; m < k; ++m) {
      const Element c = r[piv[m]];
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < r.size(); ++j) r[j] -= c * rows[m][j];
    }
    if (is_zero_vector(r)) throw RankCollapse("dependent rows in a subspace basis");
    const std::size_t p = min_value_index(v, r);
    const Element s = r[p].inv();
    for (auto& c : r) c = c * s;
    piv.push_back(p);
  }
  return rows;
}

inline std::vector<Vector> reduce_subspace(const Valuation& v, const std::vector<Vector>& rows) {
  std::vector<Vector> out;
  for (const auto& r : saturate(v, rows)) out.push_back(reduce_coordinates(v, r));
  if (rank(out) != rows.size()) throw RankCollapse("reduced basis lost rank");
  return out;
}

/// Reduced coefficients of q; they must lie in the valuation ring.
inline QuadraticSpace residue_space(const QuadraticSpace& s, const Valuation& v) {
  std::vector<std::vector<Element>> c(s.dim(), std::vector<Element>(s.dim(), Element::zero(v.residue_field())));
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = i; j < s.dim(); ++j) {
      try {
        c[i][j] = v.reduce(s.coefficients()[i][j]);
      } catch (const NotInValuationRing&) {
        throw CompatibilityFailure("form coefficient " + s.coefficients()[i][j].str() + " is not integral for the " + v.describe() + " valuation");
      }
    }
  return QuadraticSpace(v.residue_field(), std::move(c));
}

/// Nonzero isotropic vector: exhaustive over finite fields, sampled otherwise.
inline std::optional<Vector> isotropic_vector(const QuadraticSpace& s, Rng rng, std::size_t samples = 1000) {
  if (s.field()->is_finite()) return s.find_isotropic();
  for (const auto& u : detail::probe_vectors(s.field(), s.dim(), 4096))
    if (s.q(u).is_zero()) return u;
  for (std::size_t t = 0; t < samples; ++t) {
    Vector u(s.dim());
    for (auto& c : u) c = sample_element(s.field(), rng, 3);
    if (!is_zero_vector(u) && s.q(u).is_zero()) return u;
  }
  return std::nullopt;
}

/// The residue polygon of m under v; an isotropic residue form is refused.
inline ModelPtr residue_model(const ModelPtr& m, const Valuation& v) {
  if (v.is_trivial()) return m;
  if (auto q = std::dynamic_pointer_cast<const QuadricModel>(m)) {
    QuadraticSpace r = residue_space(q->space(), v);
    if (auto w = isotropic_vector(r, Rng(0x5eed)))
      throw CompatibilityFailure("residue form " + r.str() + " over " + r.field()->describe() + " is isotropic at (" + vector_str(*w) + ")");
    return std::make_shared<QuadricModel>(std::move(r));
  }
  return std::make_shared<PlaneModel>(v.residue_field());
}

/// One place reduction between two models.
struct Stage {
  Valuation valuation;
  ModelPtr source, target;
};

inline GeoElement reduce_element(const Stage& st, const GeoElement& x) {
  if (st.valuation.is_trivial()) return x;
  const Valuation& v = st.valuation;
  if (x.rows.size() == 1) return st.target->make(x.kind, {reduce_coordinates(v, normalize_unit(v, x.rows[0]))});
  return st.target->make(x.kind, reduce_subspace(v, x.rows));
}

enum class Descent { no, yes_trivial, yes_nontrivial };

inline const char* descent_name(Descent d) {
  switch (d) {
    case Descent::no: return "no";
    case Descent::yes_trivial: return "yes-trivial-image";
    case Descent::yes_nontrivial: return "yes-nontrivial";
  }
  return "?";
}

/// Composition of place reductions, applied left to right.
class Epimorphism {
 public:
  static Epimorphism identity(ModelPtr m) {
    Epimorphism e;
    e.source_ = e.target_ = m;
    e.v_ = Valuation::trivial(m->field());
    e.provenance_ = "identity";
    return e;
  }
  static Epimorphism direct(ModelPtr m, const Valuation& v) {
    if (!same_field(m->field(), v.field())) throw FieldMismatch("valuation on " + v.field()->describe() + " for a model over " + m->field()->describe());
    if (v.is_trivial()) return identity(m);
    Epimorphism e;
    e.source_ = m;
    e.target_ = residue_model(m, v);
    e.v_ = v;
    e.stages_.push_back({v, m, e.target_});
    e.provenance_ = v.describe();
    return e;
  }

  /// this followed by next.
  Epimorphism then(const Epimorphism& next) const {
    if (next.source_->describe() != target_->describe()) throw FactorMismatch("cannot compose: " + next.source_->describe() + " is not " + target_->describe());
    if (next.stages_.empty()) return *this;
    if (stages_.empty()) return next;
    Epimorphism e = *this;
    e.target_ = next.target_;
    e.stages_.insert(e.stages_.end(), next.stages_.begin(), next.stages_.end());
    e.v_ = compose_valuations(v_, next.v_);
    e.provenance_ = provenance_ + " then " + next.provenance_;
    return e;
  }

  const ModelPtr& source() const { return source_; }
  const ModelPtr& target() const { return target_; }
  const Valuation& valuation() const { return v_; }
  const std::vector<Stage>& stages() const { return stages_; }
  bool is_identity() const { return stages_.empty(); }
  const std::string& provenance() const { return provenance_; }

  GeoElement operator()(const GeoElement& x) const {
    GeoElement y = x;
    for (const auto& st : stages_) y = reduce_element(st, y);
    return y;
  }

 private:
  Epimorphism() : v_(Valuation::trivial(Field::prime(2))) {}

  ModelPtr source_, target_;
  Valuation v_;
  std::vector<Stage> stages_;
  std::string provenance_;
};

// ---------------------------------------------------------------- sampling in the source

namespace detail {

inline const QuadricModel* as_quadric(const ModelPtr& m) { return dynamic_cast<const QuadricModel*>(m.get()); }

/// Singular point (1, -q(w) + s c, -c, s, w) with hyperbolic coordinates permuted so index 0 moves to pivot.
inline GeoElement quadric_point(const QuadricModel& q, const Element& c, const Element& s, const Vector& w, std::size_t pivot) {
  static const std::size_t perm[4][4] = {{0, 1, 2, 3}, {1, 0, 2, 3}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  Vector x(q.ambient_dim());
  x[0] = Element::one(q.field());
  x[1] = -q.space().q(w) + s * c;
  x[2] = -c;
  x[3] = s;
  for (std::size_t k = 0; k < w.size(); ++k) x[4 + k] = w[k];
  Vector y = x;
  for (std::size_t k = 0; k < 4; ++k) y[perm[pivot][k]] = x[k];
  return q.make(Kind::point, {y});
}

inline std::size_t hyperbolic_pivot(const Valuation& v, const Vector& p) { return min_value_index(v, p, 4); }

/// Coordinates (c, s, w) of a normalized quadric point relative to its pivot.
struct QuadricChart {
  std::size_t pivot;
  Element c, s;
  Vector w;
};

inline QuadricChart chart(const Vector& p, std::size_t pivot) {
  static const std::size_t perm[4][4] = {{0, 1, 2, 3}, {1, 0, 2, 3}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  Vector x = p;
  for (std::size_t k = 0; k < 4; ++k) x[k] = p[perm[pivot][k]];
  const Element s0 = x[0].inv();
  for (auto& c : x) c = c * s0;
  return {pivot, -x[2], x[3], QuadraticSpace::tail(x)};
}

}  // namespace detail

/// Random element of the source model with values spread around zero.
inline GeoElement random_element(const Epimorphism& e, Kind k, Rng& rng, int spread = 2);

/// Element incident with x; if mate is set, a second one in the same fibre of e.
inline std::pair<GeoElement, GeoElement> sample_incident_pair(const Epimorphism& e, const GeoElement& x, Rng& rng, bool mate) {
  const PolygonModel& m = *e.source();
  const Valuation& v = e.valuation();
  const Kind other = x.kind == Kind::point ? Kind::line : Kind::point;
  auto small = [&](bool integral) {
    if (v.is_trivial()) return sample_element(m.field(), rng, 4);
    return integral ? sample_integral(v, rng, 4) : (rng.below(3) == 0 ? Element::zero(m.field()) : sample_valued(v, rng, 4, 2));
  };
  const auto* q = detail::as_quadric(e.source());
  if (q && x.kind == Kind::point) {
    // Lines through e1 transported to x.
    const Vector p = v.is_trivial() ? x.rows[0] : normalize_unit(v, x.rows[0]);
    const std::size_t pivot = v.is_trivial() ? min_value_index(Valuation::trivial(m.field()), p, 4) : detail::hyperbolic_pivot(v, p);
    const Automorphism T = q->transport(q->make(Kind::point, {p}), pivot);
    auto line = [&](const std::optional<Vector>& w) { return q->act(T, q->line_through_e1(w)); };
    std::optional<Vector> w;
    if (rng.below(8) != 0) {
      w = Vector(q->space().dim());
      for (auto& c : *w) c = small(mate);
    }
    GeoElement a = line(w);
    if (!mate) {
      std::optional<Vector> w2;
      if (rng.below(8) != 0) {
        w2 = Vector(q->space().dim());
        for (auto& c : *w2) c = small(false);
      }
      return {a, line(w2)};
    }
    if (v.is_trivial()) return {a, a};
    const Element z = positive_element(v);
    Vector w2(q->space().dim());
    if (w) {
      for (std::size_t k = 0; k < w2.size(); ++k) w2[k] = (*w)[k] + z * sample_integral(v, rng, 4);
    } else {
      // Lines <e1, r(w)> with w of large negative value reduce to <e1, e3>.
      const Element scale = z.inv().pow(1 + static_cast<long long>(rng.below(3)));
      for (std::size_t k = 0; k < w2.size(); ++k) {
        const Element u = k == 0 ? Element::one(m.field()) + z * sample_integral(v, rng, 4) : sample_integral(v, rng, 4);
        w2[k] = scale * u;
      }
    }
    return {a, line(w2)};
  }
  // Linear pencils: lines through a plane point, points on a plane line or a quadric line.
  std::vector<Vector> basis;
  if (x.rows.size() == 1 && !q) basis = null_space(x.rows, 3, m.field());
  else basis = x.rows;
  if (!v.is_trivial()) basis = saturate(v, basis);
  auto combo = [&](const Element& c0, const Element& c1) {
    Vector r(basis[0].size());
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = c0 * basis[0][j] + c1 * basis[1][j];
    return m.make(other, {r});
  };
  auto coeffs = [&] {
    Element c0 = small(false), c1 = small(false);
    if (c0.is_zero() && c1.is_zero()) c0 = Element::one(m.field());
    if (!v.is_trivial()) {
      Vector cc = normalize_unit(v, {c0, c1});
      c0 = cc[0];
      c1 = cc[1];
    }
    return std::make_pair(c0, c1);
  };
  auto [c0, c1] = coeffs();
  GeoElement a = combo(c0, c1);
  if (!mate) {
    auto [d0, d1] = coeffs();
    return {a, combo(d0, d1)};
  }
  if (v.is_trivial()) return {a, a};
  const Element z = positive_element(v);
  return {a, combo(c0 + z * sample_integral(v, rng, 4), c1 + z * sample_integral(v, rng, 4))};
}

inline GeoElement random_element(const Epimorphism& e, Kind k, Rng& rng, int spread) {
  const PolygonModel& m = *e.source();
  const Valuation& v = e.valuation();
  auto r = [&] { return rng.below(4) == 0 ? Element::zero(m.field()) : (v.is_trivial() ? sample_element(m.field(), rng, 4) : sample_valued(v, rng, 4, spread)); };
  if (const auto* q = detail::as_quadric(e.source())) {
    Vector w(q->space().dim());
    for (auto& c : w) c = r();
    GeoElement p = detail::quadric_point(*q, r(), r(), w, static_cast<std::size_t>(rng.below(4)));
    if (k == Kind::point) return p;
    return sample_incident_pair(e, p, rng, false).first;
  }
  Vector x(3);
  do
    for (auto& c : x) c = r();
  while (is_zero_vector(x));
  return m.make(k, {x});
}

/// n distinct elements of the fibre over y, by lifting and perturbing with maximal-ideal multiples.
inline std::vector<GeoElement> fibers_sample(const Epimorphism& e, const GeoElement& y, std::size_t n, Rng& rng) {
  if (e.is_identity()) {
    if (n > 1) throw LiftFailure("fibres of the identity are singletons, asked for " + std::to_string(n));
    return {y};
  }
  const Valuation& v = e.valuation();
  const Element z = positive_element(v);
  const PolygonModel& m = *e.source();
  auto lift = [&](const Element& c) { return v.lift(c); };
  auto jiggle = [&](const Element& c, bool first) { return first ? c : c + z * sample_integral(v, rng, 4); };
  std::vector<GeoElement> out;
  std::set<std::string> seen;
  const auto* q = detail::as_quadric(e.source());
  const auto* qt = detail::as_quadric(e.target());
  for (std::size_t attempt = 0; out.size() < n && attempt < 50 * n + 10; ++attempt) {
    const bool first = attempt == 0;
    GeoElement cand;
    if (!q) {
      Vector x;
      for (const auto& c : y.rows[0]) x.push_back(jiggle(lift(c), first));
      cand = m.make(y.kind, {x});
    } else {
      auto lift_point = [&](const Vector& pbar, std::size_t pivot) {
        const auto ch = detail::chart(pbar, pivot);
        Vector w;
        for (const auto& c : ch.w) w.push_back(jiggle(lift(c), first));
        return detail::quadric_point(*q, jiggle(lift(ch.c), first), jiggle(lift(ch.s), first), w, pivot);
      };
      auto pivot_of = [](const Vector& p) {
        std::size_t k = 0;
        while (p[k].is_zero()) ++k;
        if (k >= 4) throw LiftFailure("residue point without hyperbolic coordinate");
        return k;
      };
      if (y.kind == Kind::point) {
        cand = lift_point(y.rows[0], pivot_of(y.rows[0]));
      } else {
        const Vector& pbar = y.rows[0];
        const std::size_t pivot = pivot_of(pbar);
        const GeoElement pt = lift_point(pbar, pivot);
        const Automorphism Tbar = qt->transport(qt->make(Kind::point, {pbar}), pivot);
        const GeoElement through = qt->act(Tbar.inv(), y);
        const Vector& u = through.rows[1];
        std::optional<Vector> w;
        if (!u[3].is_zero()) {
          const Element s = u[3].inv();
          Vector wb;
          for (std::size_t k = 4; k < u.size(); ++k) wb.push_back(jiggle(lift(u[k] * s), first));
          w = wb;
        }
        const Automorphism T = q->transport(pt, pivot);
        cand = q->act(T, q->line_through_e1(w));
      }
    }
    if (e(cand) != y) throw LiftFailure("lift " + cand.str() + " reduces to " + e(cand).str() + ", not " + y.str());
    if (seen.insert(cand.str()).second) out.push_back(cand);
  }
  if (out.size() < n) throw LiftFailure("found only " + std::to_string(out.size()) + " distinct preimages of " + y.str());
  return out;
}

// ---------------------------------------------------------------- descent

inline void require_apartment(const Epimorphism& e, const RootGroups& rg) {
  const int n = rg.n();
  for (int k = 0; k < n; ++k)
    if (!e.target()->opposite(e(rg.x(k)), e(rg.x(k + n))))
      throw CollapsedHatRack("images of x_" + std::to_string(k) + " and x_" + std::to_string(k + n) + " are not opposite");
}

/// Geometric descent test for g = x_i(a): compare the image of x_{i-1}^g with those of x_{i+1} and x_{i-1}.
inline Descent descends(const Epimorphism& e, const RootGroups& rg, int i, const Vector& a) {
  require_apartment(e, rg);
  const GeoElement y = e(rg.model().act(rg.elation(i, a), rg.x(i - 1)));
  if (y == e(rg.x(i + 1))) return Descent::no;
  if (y == e(rg.x(i - 1))) return Descent::yes_trivial;
  return Descent::yes_nontrivial;
}

inline VWClass descent_class(Descent d) {
  switch (d) {
    case Descent::no: return VWClass::outside_V;
    case Descent::yes_trivial: return VWClass::W;
    default: return VWClass::V_minus_W;
  }
}

/// Property (*) at x: a^phi = b^phi iff a^{g phi} = b^{g phi}, for sampled a, b incident with x.
inline CheckReport property_star(const Epimorphism& e, const Automorphism& g, const GeoElement& x, std::size_t budget, Rng rng) {
  CheckReport r;
  r.name = "property_star";
  auto& c = r.add("star", true, 0);
  const PolygonModel& m = *e.source();
  for (std::size_t t = 0; t < budget && c.passed; ++t) {
    auto [a, b] = sample_incident_pair(e, x, rng, rng.coin());
    ++c.samples;
    const bool before = e(a) == e(b);
    const bool after = e(m.act(g, a)) == e(m.act(g, b));
    if (before != after) r.fail(c, "a=" + a.str() + ", b=" + b.str() + (before ? ": equal images separate under g" : ": distinct images merge under g"));
  }
  return r;
}

/// Sampled fibre preservation by g and g^{-1}: a^phi = b^phi implies a^{h phi} = b^{h phi}.
inline std::optional<std::string> fibre_violation(const Epimorphism& e, const Automorphism& g, Rng& rng, std::size_t trials) {
  const PolygonModel& m = *e.source();
  if (e.is_identity()) return std::nullopt;
  const Automorphism gi = g.inv();
  for (std::size_t t = 0; t < trials; ++t) {
    const bool inverse = t % 2 == 1;
    const GeoElement a = random_element(e, rng.coin() ? Kind::point : Kind::line, rng);
    const GeoElement b = fibers_sample(e, e(a), 2, rng)[1];
    const Automorphism& h = inverse ? gi : g;
    if (e(m.act(h, a)) != e(m.act(h, b))) return std::string(inverse ? "under the inverse, " : "") + "a=" + a.str() + ", b=" + b.str();
  }
  return std::nullopt;
}

/// The oracle classification of sampled U_i parameters against nu(eta(a)) vs level.
inline CheckReport derive_vw(const Epimorphism& e, const RootGroups& rg, int i, std::size_t samples, Rng rng) {
  require_apartment(e, rg);
  CheckReport r;
  r.name = "descent_bridge_U" + std::to_string(rg.norm(i));
  const Valuation& v = e.valuation();
  const Value level = rg.level(i, v);
  auto& c = r.add("oracle_matches_formula", true, 0);
  std::size_t counts[3] = {0, 0, 0};
  for (std::size_t t = 0; t < samples; ++t) {
    Vector a(rg.param_dim(i));
    for (auto& x : a) x = t == 0 ? Element::zero(rg.field()) : (v.is_trivial() ? sample_element(rg.field(), rng, 5) : sample_valued(v, rng, 5, 3));
    const VWClass oracle = descent_class(descends(e, rg, i, a));
    const VWClass formula = vw_classify(v, rg.eta(i, a), level);
    ++counts[static_cast<int>(oracle)];
    ++c.samples;
    if (oracle != formula)
      r.fail(c, "a=(" + vector_str(a) + "): oracle " + vw_name(oracle) + ", formula " + vw_name(formula) + " at level " + level.str());
  }
  r.fact("level", level.str());
  r.fact("outside_V", std::to_string(counts[0]));
  r.fact("V_minus_W", std::to_string(counts[1]));
  r.fact("W", std::to_string(counts[2]));
  return r;
}

// ---------------------------------------------------------------- realization

/// Root group labeling data reduced to what the concrete models need.
struct EpiDescriptor {
  ModelPtr model;
  Valuation valuation;
  /// Level k for the Q_Q inequality (zero for the unit hat-rack).
  std::optional<Value> level;
};

/// Construct the epimorphism of a descriptor of finite rank, one coarsening at a time.
inline Epimorphism realize(const EpiDescriptor& d, Rng rng, std::size_t samples = 500) {
  const Valuation& v = d.valuation;
  if (!same_field(d.model->field(), v.field())) throw FieldMismatch("descriptor valuation lives on " + v.field()->describe());
  if (v.is_trivial()) return Epimorphism::identity(d.model);
  if (const auto* q = detail::as_quadric(d.model)) {
    const Value k = d.level.value_or(v.zero());
    auto rep = check_qq(q->space(), v, k, rng.split(1), samples);
    if (!rep.passed()) throw CompatibilityFailure("Q_Q compatibility fails: " + rep.conditions.front().witness);
  }
  if (v.rank() == 1) return Epimorphism::direct(d.model, v);
  auto [first, rest] = coarsen(v);
  Epimorphism head = Epimorphism::direct(d.model, first);
  std::optional<Value> rest_level;
  if (d.level && d.level->kind() == GroupKind::lex) {
    std::vector<long long> c(d.level->coords().begin() + 1, d.level->coords().end());
    rest_level = c.size() == 1 ? Value::integer(c[0]) : Value::lex(c);
  }
  return head.then(realize({head.target(), rest, rest_level}, rng.split(2), samples));
}

/// Reduction of flags of A_l(K) by nested Hermite pivoting.
inline Flag reduce_flag(const Valuation& v, const Flag& f) {
  std::vector<Vector> basis;
  for (const auto& s : f.spaces)
    for (const auto& row : s)
      if (rank(stack(basis, {row})) > basis.size()) {
        basis.push_back(row);
        break;
      }
  if (v.is_trivial()) return f;
  return flag_from_basis(reduce_subspace(v, basis), f.rank());
}

// ---------------------------------------------------------------- factorization

/// fine has the smaller fibres; coarse = (residue map) o fine on sampled elements.
inline CheckReport factor_check(const Epimorphism& fine, const Epimorphism& coarse, std::size_t samples, Rng rng) {
  if (fine.source()->describe() != coarse.source()->describe())
    throw FactorMismatch("epimorphisms have different sources: " + fine.source()->describe() + " vs " + coarse.source()->describe());
  CheckReport r;
  r.name = "factor";
  std::optional<Epimorphism> link;
  if (fine.valuation().same_as(coarse.valuation())) {
    link = Epimorphism::identity(fine.target());
    r.fact("connecting_map", "isomorphism");
  } else {
    const Valuation& cv = coarse.valuation();
    if (cv.rank() < 2) throw FactorMismatch(cv.describe() + " does not coarsen to " + fine.valuation().describe());
    auto [first, rest] = coarsen(cv);
    if (!first.same_as(fine.valuation())) throw FactorMismatch(cv.describe() + " coarsens to " + first.describe() + ", not " + fine.valuation().describe());
    link = Epimorphism::direct(fine.target(), rest);
    r.fact("connecting_map", rest.describe());
  }
  auto& comp = r.add("composition", true, 0);
  auto& refine = r.add("fibre_refinement", true, 0);
  for (std::size_t t = 0; t < samples; ++t) {
    const GeoElement x = random_element(fine, t % 2 ? Kind::line : Kind::point, rng);
    ++comp.samples;
    const GeoElement two = (*link)(fine(x)), one = coarse(x);
    if (two != one) r.fail(comp, "x=" + x.str() + ": two-step image " + two.str() + ", direct image " + one.str());
    if (fine.is_identity()) continue;
    const GeoElement y = fibers_sample(fine, fine(x), 2, rng)[1];
    ++refine.samples;
    if (coarse(x) != coarse(y)) r.fail(refine, "x=" + x.str() + ", y=" + y.str() + " share the fine image but not the coarse one");
  }
  return r;
}

}  // namespace moufang
