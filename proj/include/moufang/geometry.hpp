#pragma once

/**
 * @file geometry.hpp
 * @brief Projective planes, orthogonal quadrangles, finite incidence
 *        structures and the polygon axiom verifiers.
 */

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "moufang/linalg.hpp"
#include "moufang/report.hpp"

namespace moufang {

enum class Kind { point, line };

inline const char* kind_name(Kind k) { return k == Kind::point ? "point" : "line"; }

/// Point or line of a polygon model. Planes store lines by dual coordinates;
/// quadric lines are reduced row echelon bases of 2-spaces.
struct GeoElement {
  Kind kind = Kind::point;
  std::vector<Vector> rows;

  bool operator==(const GeoElement& o) const { return kind == o.kind && rows == o.rows; }
  bool operator!=(const GeoElement& o) const { return !(*this == o); }
  std::string str() const {
    std::string s = kind == Kind::point ? "(" : "[";
    for (std::size_t i = 0; i < rows.size(); ++i) s += (i ? "; " : "") + vector_str(rows[i]);
    return s + (kind == Kind::point ? ")" : "]");
  }
};

/// Invertible linear map together with its inverse transpose.
struct Automorphism {
  Matrix m, dual;

  Automorphism() = default;
  explicit Automorphism(Matrix mm) : m(std::move(mm)), dual(inverse(m).transpose()) {}
  Automorphism(Matrix mm, Matrix dd) : m(std::move(mm)), dual(std::move(dd)) {}

  static Automorphism identity(const FieldPtr& f, std::size_t n) { return {Matrix::identity(f, n), Matrix::identity(f, n)}; }
  Automorphism operator*(const Automorphism& o) const { return {m * o.m, dual * o.dual}; }
  Automorphism inv() const { return {dual.transpose(), m.transpose()}; }
  bool operator==(const Automorphism& o) const { return m == o.m; }
  bool is_identity() const { return m.is_identity(); }
};

inline Automorphism commutator(const Automorphism& g, const Automorphism& h) { return g.inv() * h.inv() * g * h; }

// ---------------------------------------------------------------- quadratic space

/// Anisotropic quadratic form q on L0 = K^d, q(v) = sum_{i<=j} c_ij v_i v_j.
class QuadraticSpace {
 public:
  QuadraticSpace(FieldPtr f, std::vector<std::vector<Element>> upper) : f_(std::move(f)), c_(std::move(upper)) {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i].size() != c_.size()) throw DescriptorMismatch("quadratic form coefficients must be square");
  }

  const FieldPtr& field() const { return f_; }
  std::size_t dim() const { return c_.size(); }
  const std::vector<std::vector<Element>>& coefficients() const { return c_; }

  Element q(const Vector& v) const {
    Element s = Element::zero(f_);
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = i; j < dim(); ++j)
        if (!c_[i][j].is_zero()) s += c_[i][j] * v[i] * v[j];
    return s;
  }
  Element f(const Vector& u, const Vector& v) const {
    Element s = Element::zero(f_);
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = i; j < dim(); ++j) {
        if (c_[i][j].is_zero()) continue;
        if (i == j) s += c_[i][i] * (u[i] * v[i] + u[i] * v[i]);
        else s += c_[i][j] * (u[i] * v[j] + u[j] * v[i]);
      }
    return s;
  }

  /// Ambient form x1x2 + x3x4 + q(v) on K^4 + L0.
  Element qhat(const Vector& x) const { return x[0] * x[1] + x[2] * x[3] + q(tail(x)); }
  Element fhat(const Vector& x, const Vector& y) const {
    return x[0] * y[1] + x[1] * y[0] + x[2] * y[3] + x[3] * y[2] + f(tail(x), tail(y));
  }
  static Vector tail(const Vector& x) { return Vector(x.begin() + 4, x.end()); }

  /// Nonzero isotropic vector of q, searched exhaustively over a finite field.
  std::optional<Vector> find_isotropic() const {
    auto elems = enumerate(f_);
    const std::size_t q = elems.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < dim(); ++i) total *= q;
    for (std::size_t code = 1; code < total; ++code) {
      Vector v(dim());
      std::size_t x = code;
      for (auto& vi : v) {
        vi = elems[x % q];
        x /= q;
      }
      if (q_is_zero(v)) return v;
    }
    return std::nullopt;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = i; j < dim(); ++j) {
        if (c_[i][j].is_zero()) continue;
        std::string mono = i == j ? "v" + std::to_string(i + 1) + "^2" : "v" + std::to_string(i + 1) + "*v" + std::to_string(j + 1);
        std::string cs = c_[i][j].str();
        if (!s.empty()) s += "+";
        s += cs == "1" ? mono : "(" + cs + ")*" + mono;
      }
    return s.empty() ? "0" : s;
  }

 private:
  bool q_is_zero(const Vector& v) const { return q(v).is_zero(); }

  FieldPtr f_;
  std::vector<std::vector<Element>> c_;
};

// ---------------------------------------------------------------- models

enum class ModelClass { T, QQ };

inline const char* class_name(ModelClass c) { return c == ModelClass::T ? "T" : "QQ"; }

class PolygonModel {
 public:
  virtual ~PolygonModel() = default;

  virtual ModelClass model_class() const = 0;
  virtual const FieldPtr& field() const = 0;
  virtual int gonality() const = 0;
  virtual std::size_t ambient_dim() const = 0;

  /// Canonical form of an element spanned by rows (dual rows for plane lines).
  virtual GeoElement make(Kind k, std::vector<Vector> rows) const = 0;
  virtual bool contains(const GeoElement& x) const = 0;
  virtual bool incident(const GeoElement& x, const GeoElement& y) const = 0;
  virtual int distance(const GeoElement& x, const GeoElement& y) const = 0;
  virtual GeoElement project(const GeoElement& x, const GeoElement& y) const = 0;
  virtual GeoElement act(const Automorphism& g, const GeoElement& x) const = 0;
  /// All elements of a kind; finite fields only.
  virtual std::vector<GeoElement> enumerate_kind(Kind k) const = 0;
  virtual std::string describe() const = 0;

  bool opposite(const GeoElement& x, const GeoElement& y) const { return distance(x, y) == gonality(); }

 protected:
  static void require_kinds(const GeoElement& x, const GeoElement& y) {
    if (x.kind == y.kind) throw KindMismatch(std::string("incidence between two elements of kind ") + kind_name(x.kind));
  }
};

using ModelPtr = std::shared_ptr<const PolygonModel>;

namespace detail {

inline std::vector<Vector> all_projective_vectors(const FieldPtr& f, std::size_t n) {
  auto elems = enumerate(f);
  std::vector<Vector> out;
  const std::size_t q = elems.size();
  for (std::size_t lead = 0; lead < n; ++lead) {
    const std::size_t free = n - lead - 1;
    std::size_t total = 1;
    for (std::size_t i = 0; i < free; ++i) total *= q;
    for (std::size_t code = 0; code < total; ++code) {
      Vector v(n, Element::zero(f));
      v[lead] = Element::one(f);
      std::size_t x = code;
      for (std::size_t i = lead + 1; i < n; ++i) {
        v[i] = elems[x % q];
        x /= q;
      }
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace detail

/// The projective plane PG(2,K) with point rows and dual line rows.
class PlaneModel final : public PolygonModel {
 public:
  explicit PlaneModel(FieldPtr f) : f_(std::move(f)) {}

  ModelClass model_class() const override { return ModelClass::T; }
  const FieldPtr& field() const override { return f_; }
  int gonality() const override { return 3; }
  std::size_t ambient_dim() const override { return 3; }

  GeoElement make(Kind k, std::vector<Vector> rows) const override {
    if (rows.size() != 1 || rows[0].size() != 3) throw KindMismatch("plane elements are single 3-vectors");
    return {k, {canonical(rows[0])}};
  }
  GeoElement point(const std::string& a, const std::string& b, const std::string& c) const {
    return make(Kind::point, {{parse_element(f_, a), parse_element(f_, b), parse_element(f_, c)}});
  }
  GeoElement line(const std::string& a, const std::string& b, const std::string& c) const {
    return make(Kind::line, {{parse_element(f_, a), parse_element(f_, b), parse_element(f_, c)}});
  }
  bool contains(const GeoElement& x) const override { return x.rows.size() == 1 && !is_zero_vector(x.rows[0]); }
  bool incident(const GeoElement& x, const GeoElement& y) const override {
    require_kinds(x, y);
    return dot(x.rows[0], y.rows[0]).is_zero();
  }
  int distance(const GeoElement& x, const GeoElement& y) const override {
    if (x == y) return 0;
    if (x.kind != y.kind) return incident(x, y) ? 1 : 3;
    return 2;
  }
  GeoElement project(const GeoElement& x, const GeoElement& y) const override {
    const int d = distance(x, y);
    if (d == 0 || d == 3) throw OppositeOrEqual("projection needs 0 < distance < 3, got " + std::to_string(d));
    if (d == 1) return y;
    return make(x.kind == Kind::point ? Kind::line : Kind::point, {cross(x.rows[0], y.rows[0])});
  }
  GeoElement act(const Automorphism& g, const GeoElement& x) const override {
    return make(x.kind, {row_times(x.rows[0], x.kind == Kind::point ? g.m : g.dual)});
  }
  std::vector<GeoElement> enumerate_kind(Kind k) const override {
    std::vector<GeoElement> out;
    for (auto& v : detail::all_projective_vectors(f_, 3)) out.push_back({k, {v}});
    return out;
  }
  std::string describe() const override { return "PG(2," + f_->describe() + ")"; }

  static Vector cross(const Vector& a, const Vector& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  }

 private:
  FieldPtr f_;
};

/// Totally singular points and lines of x1x2 + x3x4 + q(v).
class QuadricModel final : public PolygonModel {
 public:
  explicit QuadricModel(QuadraticSpace s) : s_(std::move(s)) {}

  const QuadraticSpace& space() const { return s_; }
  ModelClass model_class() const override { return ModelClass::QQ; }
  const FieldPtr& field() const override { return s_.field(); }
  int gonality() const override { return 4; }
  std::size_t ambient_dim() const override { return 4 + s_.dim(); }

  GeoElement make(Kind k, std::vector<Vector> rows) const override {
    if (k == Kind::point) {
      if (rows.size() != 1) throw KindMismatch("quadric points are single vectors");
      return {k, {canonical(rows[0])}};
    }
    auto r = rref(std::move(rows));
    if (r.size() != 2) throw RankCollapse("quadric line basis has rank " + std::to_string(r.size()));
    return {k, r};
  }
  bool contains(const GeoElement& x) const override {
    for (const auto& r : x.rows)
      if (!s_.qhat(r).is_zero()) return false;
    if (x.kind == Kind::line) return x.rows.size() == 2 && s_.fhat(x.rows[0], x.rows[1]).is_zero();
    return x.rows.size() == 1;
  }
  bool incident(const GeoElement& x, const GeoElement& y) const override {
    require_kinds(x, y);
    const GeoElement& p = x.kind == Kind::point ? x : y;
    const GeoElement& l = x.kind == Kind::point ? y : x;
    return rank(stack(l.rows, p.rows)) == 2;
  }
  bool collinear(const GeoElement& p, const GeoElement& r) const { return s_.fhat(p.rows[0], r.rows[0]).is_zero(); }
  int distance(const GeoElement& x, const GeoElement& y) const override {
    if (x == y) return 0;
    if (x.kind != y.kind) return incident(x, y) ? 1 : 3;
    if (x.kind == Kind::point) return collinear(x, y) ? 2 : 4;
    return rank(stack(x.rows, y.rows)) == 3 ? 2 : 4;
  }
  GeoElement project(const GeoElement& x, const GeoElement& y) const override {
    const int d = distance(x, y);
    if (d == 0 || d == 4) throw OppositeOrEqual("projection needs 0 < distance < 4, got " + std::to_string(d));
    if (d == 1) return y;
    if (d == 2) {
      if (x.kind == Kind::point) return make(Kind::line, {x.rows[0], y.rows[0]});
      return meet(x, y);
    }
    if (x.kind == Kind::point) return make(Kind::line, {x.rows[0], perp_point(y, x).rows[0]});
    return perp_point(x, y);
  }
  GeoElement act(const Automorphism& g, const GeoElement& x) const override {
    std::vector<Vector> r;
    for (const auto& row : x.rows) r.push_back(row_times(row, g.m));
    return make(x.kind, std::move(r));
  }
  std::vector<GeoElement> enumerate_kind(Kind k) const override {
    std::vector<GeoElement> pts;
    for (auto& v : detail::all_projective_vectors(field(), ambient_dim()))
      if (s_.qhat(v).is_zero()) pts.push_back({Kind::point, {v}});
    if (k == Kind::point) return pts;
    std::map<std::string, GeoElement> lines;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        if (collinear(pts[i], pts[j])) {
          GeoElement l = make(Kind::line, {pts[i].rows[0], pts[j].rows[0]});
          lines.emplace(l.str(), l);
        }
    std::vector<GeoElement> out;
    for (auto& [key, l] : lines) out.push_back(l);
    return out;
  }
  std::string describe() const override { return "Q(" + field()->describe() + ", q=" + s_.str() + ")"; }

  /// The point of line l collinear with point p (p not on l).
  GeoElement perp_point(const GeoElement& l, const GeoElement& p) const {
    const Element a = s_.fhat(l.rows[0], p.rows[0]);
    const Element b = s_.fhat(l.rows[1], p.rows[0]);
    Vector v(ambient_dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = b * l.rows[0][i] - a * l.rows[1][i];
    return make(Kind::point, {v});
  }
  /// Common point of two distinct intersecting lines.
  GeoElement meet(const GeoElement& a, const GeoElement& b) const {
    // Solve x a0 + y a1 = z b0 + w b1 via the null space of the stacked rows' transpose.
    std::vector<Vector> cols(ambient_dim(), Vector(4));
    for (std::size_t i = 0; i < ambient_dim(); ++i) cols[i] = {a.rows[0][i], a.rows[1][i], -b.rows[0][i], -b.rows[1][i]};
    auto ns = null_space(cols, 4, field());
    if (ns.empty()) throw OppositeOrEqual("lines do not meet");
    Vector v(ambient_dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = ns[0][0] * a.rows[0][i] + ns[0][1] * a.rows[1][i];
    return make(Kind::point, {v});
  }

  // Raw transvections (right action on row vectors).

  /// Siegel transvection x -> x + c (f(x,a) b - f(x,b) a) for a totally singular pair a, b.
  Matrix siegel(const Vector& a, const Vector& b, const Element& c) const {
    const std::size_t n = ambient_dim();
    Matrix m = Matrix::identity(field(), n);
    for (std::size_t k = 0; k < n; ++k) {
      Vector e(n, Element::zero(field()));
      e[k] = Element::one(field());
      const Element fa = s_.fhat(e, a) * c, fb = s_.fhat(e, b) * c;
      for (std::size_t j = 0; j < n; ++j) m(k, j) += fa * b[j] - fb * a[j];
    }
    return m;
  }
  /// Eichler transvection x -> x + f(x,u) v - f(x,v) u - q(v) f(x,u) u, u singular, v in L0.
  Matrix eichler(const Vector& u, const Vector& v) const {
    const std::size_t n = ambient_dim();
    Matrix m = Matrix::identity(field(), n);
    const Element qv = s_.qhat(v);
    for (std::size_t k = 0; k < n; ++k) {
      Vector e(n, Element::zero(field()));
      e[k] = Element::one(field());
      const Element fu = s_.fhat(e, u), fv = s_.fhat(e, v);
      for (std::size_t j = 0; j < n; ++j) m(k, j) += fu * v[j] - fv * u[j] - qv * fu * u[j];
    }
    return m;
  }
  Vector basis(std::size_t k) const {
    Vector e(ambient_dim(), Element::zero(field()));
    e[k] = Element::one(field());
    return e;
  }
  Vector l0_vector(const Vector& w) const {
    Vector v(ambient_dim(), Element::zero(field()));
    for (std::size_t i = 0; i < w.size(); ++i) v[4 + i] = w[i];
    return v;
  }

  /// Isometry sending e1 to the point p, built around the hyperbolic coordinate pivot (0..3), p[pivot] != 0.
  Automorphism transport(const GeoElement& p, std::size_t pivot) const {
    static const std::size_t perm[4][4] = {{0, 1, 2, 3}, {1, 0, 2, 3}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    const std::size_t n = ambient_dim();
    Matrix P(field(), n, n);
    for (std::size_t k = 0; k < n; ++k) P(k, k < 4 ? perm[pivot][k] : k) = Element::one(field());
    Vector x = row_times(p.rows[0], P);
    const Element s = x[0].inv();
    for (auto& xi : x) xi = xi * s;
    const Vector w = QuadraticSpace::tail(x);
    // e1 -> e1 - c e3 -> (1, -q(w), -c, 0, w) -> (1, -q(w) + s c, -c, s, w).
    const Element c = -x[2], t = x[3];
    Matrix h = siegel(basis(2), basis(1), c) * eichler(basis(1), l0_vector(w)) * siegel(basis(1), basis(3), t);
    return Automorphism(h * P);
  }
  /// Lines through e1: <e1,e3> (w empty) or <e1, (0,0,-q(w),1,w)>.
  GeoElement line_through_e1(const std::optional<Vector>& w) const {
    if (!w) return make(Kind::line, {basis(0), basis(2)});
    Vector r = l0_vector(*w);
    r[2] = -s_.q(*w);
    r[3] = Element::one(field());
    return make(Kind::line, {basis(0), r});
  }

 private:
  QuadraticSpace s_;
};

// ---------------------------------------------------------------- finite incidence structures

/// Bipartite incidence graph of a finite geometry.
struct IncidenceStructure {
  std::vector<std::string> labels;
  std::vector<bool> is_point;
  std::vector<std::vector<int>> adj;

  std::size_t size() const { return labels.size(); }
  std::size_t count(bool points) const {
    std::size_t c = 0;
    for (bool b : is_point) c += b == points;
    return c;
  }
  IncidenceStructure dual() const {
    IncidenceStructure d = *this;
    for (std::size_t i = 0; i < d.is_point.size(); ++i) d.is_point[i] = !d.is_point[i];
    return d;
  }
  int index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return static_cast<int>(i);
    return -1;
  }
  void remove(int v) {
    for (int u : adj[v]) {
      auto& a = adj[u];
      a.erase(std::remove(a.begin(), a.end(), v), a.end());
    }
    adj.erase(adj.begin() + v);
    labels.erase(labels.begin() + v);
    is_point.erase(is_point.begin() + v);
    for (auto& a : adj)
      for (auto& u : a)
        if (u > v) --u;
  }
};

/// Complete enumeration of a finite polygon model.
struct FiniteModel {
  ModelPtr model;
  std::vector<GeoElement> elements;
  IncidenceStructure graph;
  std::map<std::string, int> index;

  explicit FiniteModel(ModelPtr m) : model(std::move(m)) {
    if (!model->field()->is_finite()) throw DescriptorMismatch("finite enumeration over infinite field " + model->field()->describe());
    for (Kind k : {Kind::point, Kind::line})
      for (auto& e : model->enumerate_kind(k)) add(e);
    const std::size_t n = elements.size();
    graph.adj.assign(n, {});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (elements[i].kind != elements[j].kind && model->incident(elements[i], elements[j])) {
          graph.adj[i].push_back(static_cast<int>(j));
          graph.adj[j].push_back(static_cast<int>(i));
        }
  }

  int find(const GeoElement& e) const {
    auto it = index.find(e.str());
    return it == index.end() ? -1 : it->second;
  }
  std::vector<int> pencil(const GeoElement& e) const { return graph.adj.at(static_cast<std::size_t>(find(e))); }

 private:
  void add(const GeoElement& e) {
    index.emplace(e.str(), static_cast<int>(elements.size()));
    elements.push_back(e);
    graph.labels.push_back(e.str());
    graph.is_point.push_back(e.kind == Kind::point);
  }
};

namespace detail {

struct Bfs {
  std::vector<int> dist;
  std::vector<std::uint64_t> paths;
  std::vector<int> parent;
};

inline Bfs bfs(const IncidenceStructure& g, int s) {
  Bfs r{std::vector<int>(g.size(), -1), std::vector<std::uint64_t>(g.size(), 0), std::vector<int>(g.size(), -1)};
  std::queue<int> q;
  r.dist[s] = 0;
  r.paths[s] = 1;
  q.push(s);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : g.adj[u]) {
      if (r.dist[v] < 0) {
        r.dist[v] = r.dist[u] + 1;
        r.parent[v] = u;
        q.push(v);
      }
      if (r.dist[v] == r.dist[u] + 1) r.paths[v] += r.paths[u];
    }
  }
  return r;
}

inline std::string path_str(const IncidenceStructure& g, const Bfs& b, int t) {
  std::vector<int> p;
  for (int v = t; v >= 0; v = b.parent[v]) p.push_back(v);
  std::string s;
  for (auto it = p.rbegin(); it != p.rend(); ++it) s += (s.empty() ? "" : " - ") + g.labels[*it];
  return s;
}

}  // namespace detail

/// Graph distance in a finite incidence structure (-1 when disconnected).
inline int graph_distance(const IncidenceStructure& g, int a, int b) { return detail::bfs(g, a).dist[b]; }

/// GP1-GP3 for a generalized n-gon, with order (s,t) when the structure is regular.
inline CheckReport verify_gp_axioms(const IncidenceStructure& g, int n) {
  CheckReport r;
  r.name = "gp_axioms";
  auto& gp1 = r.add("GP1", true, g.size());
  auto& gp2 = r.add("GP2", true, g.size() * g.size());
  auto& gp3 = r.add("GP3", true, g.size() * g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (g.adj[v].size() < 3) r.fail(gp1, g.labels[v] + " is incident with only " + std::to_string(g.adj[v].size()) + " elements");
    for (int u : g.adj[v])
      if (g.is_point[static_cast<std::size_t>(u)] == g.is_point[v]) r.fail(gp1, "incidence between " + g.labels[v] + " and " + g.labels[static_cast<std::size_t>(u)] + " of the same kind");
  }
  for (std::size_t a = 0; a < g.size(); ++a) {
    auto b = detail::bfs(g, static_cast<int>(a));
    for (std::size_t c = 0; c < g.size(); ++c) {
      if (b.dist[c] < 0 || b.dist[c] > n) {
        r.fail(gp2, g.labels[a] + " and " + g.labels[c] + " at distance " + std::to_string(b.dist[c]) + " > " + std::to_string(n));
      } else if (b.dist[c] < n && b.paths[c] != 1) {
        r.fail(gp3, std::to_string(b.paths[c]) + " shortest paths of length " + std::to_string(b.dist[c]) + ", one is " + detail::path_str(g, b, static_cast<int>(c)));
      }
    }
  }
  std::size_t point_deg = 0, line_deg = 0;
  bool regular = true;
  for (std::size_t v = 0; v < g.size(); ++v) {
    std::size_t& d = g.is_point[v] ? point_deg : line_deg;
    if (d == 0) d = g.adj[v].size();
    else if (d != g.adj[v].size()) regular = false;
  }
  r.fact("points", std::to_string(g.count(true)));
  r.fact("lines", std::to_string(g.count(false)));
  if (regular && point_deg && line_deg) r.fact("order", "(" + std::to_string(line_deg - 1) + "," + std::to_string(point_deg - 1) + ")");
  return r;
}

// ---------------------------------------------------------------- Moufang condition

/// Apartment x_0..x_{2n-1} with candidate root groups U_i as explicit element lists.
struct RootDatum {
  std::vector<GeoElement> apartment;
  std::function<std::vector<Automorphism>(int)> group;
};

/// For every root of the apartment: U_i fixes the pencils of x_{i+1}..x_{i+n-1}
/// and acts transitively on the pencil of x_i minus x_{i+1}.
inline CheckReport verify_moufang(const FiniteModel& fm, const RootDatum& d) {
  const int n = fm.model->gonality();
  const int m = 2 * n;
  CheckReport r;
  r.name = "moufang";
  auto x = [&](int i) { return d.apartment[static_cast<std::size_t>(((i % m) + m) % m)]; };
  for (int i = 0; i < m; ++i) {
    auto& c = r.add("root_" + std::to_string(i));
    const auto group = d.group(i);
    c.samples = group.size();
    for (const auto& g : group) {
      for (int k = i + 1; k <= i + n - 1 && c.passed; ++k) {
        for (int idx : fm.pencil(x(k))) {
          const auto& e = fm.elements[static_cast<std::size_t>(idx)];
          if (fm.model->act(g, e) != e) {
            r.fail(c, "element " + e.str() + " incident with x_" + std::to_string(k) + " is moved");
            break;
          }
        }
      }
    }
    std::map<std::string, int> orbit;
    const GeoElement start = x(i - 1);
    for (const auto& g : group) orbit.emplace(fm.model->act(g, start).str(), 0);
    std::size_t target = 0;
    for (int idx : fm.pencil(x(i))) {
      const auto& e = fm.elements[static_cast<std::size_t>(idx)];
      if (e == x(i + 1)) continue;
      ++target;
      if (!orbit.count(e.str())) r.fail(c, "pencil element " + e.str() + " of x_" + std::to_string(i) + " not in the orbit of x_" + std::to_string(i - 1));
    }
    if (orbit.size() != target) r.fail(c, "orbit size " + std::to_string(orbit.size()) + " differs from pencil size " + std::to_string(target));
  }
  return r;
}

}  // namespace moufang
