#pragma once

/**
 * @file field.hpp
 * @brief Exact field towers: F_p, GF(p^n), Q and univariate rational
 *        function fields over any of these.
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "moufang/errors.hpp"
#include "moufang/rng.hpp"

namespace moufang {

using BigInt = boost::multiprecision::cpp_int;

class Field;
using FieldPtr = std::shared_ptr<const Field>;
class Element;
struct Poly;
struct RatFuncData;

enum class FieldKind { prime, galois, rational, ratfunc };

class Field {
 public:
  /// F_p. p must be a prime below 2^31.
  static FieldPtr prime(std::int64_t p);
  /// F_p[a]/(m) for a monic irreducible m given low-to-high, p^n <= 2^16.
  static FieldPtr galois(std::int64_t p, std::vector<std::int64_t> modulus, std::string generator = "a");
  static FieldPtr rational();
  static FieldPtr ratfunc(std::string var, FieldPtr base);

  FieldKind kind() const { return kind_; }
  std::int64_t p() const { return p_; }
  int degree() const { return static_cast<int>(modulus_.size()) - 1; }
  const std::vector<std::int64_t>& modulus() const { return modulus_; }
  const std::string& variable() const { return var_; }
  const FieldPtr& base() const { return base_; }

  std::int64_t characteristic() const {
    if (kind_ == FieldKind::ratfunc) return base_->characteristic();
    return kind_ == FieldKind::rational ? 0 : p_;
  }
  bool is_finite() const { return kind_ == FieldKind::prime || kind_ == FieldKind::galois; }
  std::uint64_t order() const;

  bool same_as(const Field& o) const;
  std::string describe() const;
  /// Variable names of the tower, outermost first (includes a Galois generator).
  std::vector<std::string> variables() const;

 private:
  FieldKind kind_ = FieldKind::rational;
  std::int64_t p_ = 0;
  std::vector<std::int64_t> modulus_;
  std::string var_;
  FieldPtr base_;
};

inline bool same_field(const FieldPtr& a, const FieldPtr& b) { return a == b || (a && b && a->same_as(*b)); }

struct Rational {
  BigInt num, den;
};

class Element {
 public:
  Element() = default;

  static Element zero(const FieldPtr& f);
  static Element one(const FieldPtr& f) { return from_int(f, 1); }
  static Element from_int(const FieldPtr& f, const BigInt& n);
  static Element fraction(const FieldPtr& f, const BigInt& num, const BigInt& den);
  /// The tower variable (or Galois generator) called name, viewed in f.
  static Element variable(const FieldPtr& f, const std::string& name);
  /// Canonical element num/den of the rational function field f.
  static Element from_poly(const FieldPtr& f, Poly num, Poly den);
  static Element galois_from(const FieldPtr& f, std::vector<std::int64_t> coeffs);

  const FieldPtr& field() const { return f_; }
  bool valid() const { return static_cast<bool>(f_); }
  bool is_zero() const;
  bool is_one() const;

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator*(const Element& o) const;
  Element operator/(const Element& o) const { return *this * o.inv(); }
  Element operator-() const;
  Element& operator+=(const Element& o) { return *this = *this + o; }
  Element& operator-=(const Element& o) { return *this = *this - o; }
  Element& operator*=(const Element& o) { return *this = *this * o; }
  Element inv() const;
  Element pow(long long e) const;

  bool operator==(const Element& o) const;
  bool operator!=(const Element& o) const { return !(*this == o); }

  std::string str() const;

  std::int64_t residue() const { return std::get<std::int64_t>(v_); }
  const std::vector<std::int64_t>& coeffs() const { return std::get<std::vector<std::int64_t>>(v_); }
  const Rational& rat() const { return std::get<Rational>(v_); }
  const Poly& numer() const;
  const Poly& denom() const;

 private:
  void require_same(const Element& o) const;

  FieldPtr f_;
  std::variant<std::monostate, std::int64_t, std::vector<std::int64_t>, Rational,
               std::shared_ptr<const RatFuncData>>
      v_;

  friend int compare(const Element& a, const Element& b);
};

/// Dense polynomial over a field, coefficients low-to-high, no trailing zeros.
struct Poly {
  FieldPtr field;
  std::vector<Element> c;

  Poly() = default;
  explicit Poly(FieldPtr f) : field(std::move(f)) {}
  Poly(FieldPtr f, std::vector<Element> cs) : field(std::move(f)), c(std::move(cs)) { trim(); }

  static Poly constant(const Element& e) { return Poly(e.field(), {e}); }
  static Poly monomial(const Element& e, std::size_t k) {
    std::vector<Element> cs(k + 1, Element::zero(e.field()));
    cs[k] = e;
    return Poly(e.field(), std::move(cs));
  }

  void trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  const Element& lead() const { return c.back(); }
  Element coeff(std::size_t k) const { return k < c.size() ? c[k] : Element::zero(field); }
  /// Index of the lowest nonzero coefficient; -1 for the zero polynomial.
  int order() const {
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!c[i].is_zero()) return static_cast<int>(i);
    return -1;
  }
  bool operator==(const Poly& o) const { return c == o.c; }
};

struct RatFuncData {
  Poly num, den;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly scale(const Poly& a, const Element& s);
std::pair<Poly, Poly> poly_divmod(const Poly& num, const Poly& den);
Poly poly_gcd(Poly a, Poly b);
Element poly_eval(const Poly& p, const Element& x);

/// Total order on elements of one field, used only for containers.
int compare(const Element& a, const Element& b);
struct ElementLess {
  bool operator()(const Element& a, const Element& b) const { return compare(a, b) < 0; }
};

// ---------------------------------------------------------------- helpers

namespace detail {

inline std::int64_t mod(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

inline std::int64_t mod_big(const BigInt& a, std::int64_t p) {
  BigInt r = a % p;
  if (r < 0) r += p;
  return static_cast<std::int64_t>(r);
}

inline std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t p) {
  std::int64_t r = 1 % p;
  b = mod(b, p);
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

inline bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

using IntPoly = std::vector<std::int64_t>;

inline void trim(IntPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

/// Remainder of a modulo b over F_p; b must be nonzero.
inline IntPoly int_rem(IntPoly a, const IntPoly& b, std::int64_t p) {
  trim(a);
  const std::int64_t inv_lead = pow_mod(b.back(), p - 2, p);
  while (a.size() >= b.size()) {
    const std::int64_t f = a.back() * inv_lead % p;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = mod(a[shift + i] - f * b[i], p);
    trim(a);
  }
  return a;
}

inline bool int_irreducible(const IntPoly& m, std::int64_t p) {
  const int n = static_cast<int>(m.size()) - 1;
  // Trial division by every monic polynomial of degree 1..n/2.
  for (int d = 1; 2 * d <= n; ++d) {
    IntPoly f(d + 1, 0);
    f[d] = 1;
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= static_cast<std::uint64_t>(p);
    for (std::uint64_t code = 0; code < count; ++code) {
      std::uint64_t c = code;
      for (int i = 0; i < d; ++i) {
        f[i] = static_cast<std::int64_t>(c % p);
        c /= p;
      }
      if (int_rem(m, f, p).empty()) return false;
    }
  }
  return true;
}

inline bool is_atomic(const std::string& s) {
  if (s.empty()) return true;
  std::size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                     [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; });
}

inline std::string wrap(const std::string& s) { return is_atomic(s) ? s : "(" + s + ")"; }

/// True when s has a '+' or binary '-' outside parentheses.
inline bool is_sum(const std::string& s) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char ch = s[i];
    if (ch == '(') ++depth;
    else if (ch == ')') --depth;
    else if (depth == 0 && i > 0 && (ch == '+' || (ch == '-' && s[i - 1] != '^'))) return true;
  }
  return false;
}

inline std::string wrap_sum(const std::string& s) { return is_sum(s) ? "(" + s + ")" : s; }

}  // namespace detail

// ---------------------------------------------------------------- Field

inline FieldPtr Field::prime(std::int64_t p) {
  if (p >= (std::int64_t{1} << 31) || !detail::is_prime(p)) throw DescriptorMismatch("prime field needs a prime below 2^31, got " + std::to_string(p));
  auto f = std::make_shared<Field>();
  f->kind_ = FieldKind::prime;
  f->p_ = p;
  return f;
}

inline FieldPtr Field::galois(std::int64_t p, std::vector<std::int64_t> modulus, std::string generator) {
  if (!detail::is_prime(p)) throw DescriptorMismatch("galois field needs prime characteristic");
  for (auto& c : modulus) c = detail::mod(c, p);
  detail::trim(modulus);
  if (modulus.size() < 2 || modulus.back() != 1) throw DescriptorMismatch("galois modulus must be monic of degree >= 1");
  const int n = static_cast<int>(modulus.size()) - 1;
  std::uint64_t size = 1;
  for (int i = 0; i < n; ++i) {
    size *= static_cast<std::uint64_t>(p);
    if (size > 65536) throw DescriptorMismatch("galois field larger than 2^16");
  }
  if (!detail::int_irreducible(modulus, p)) throw DescriptorMismatch("galois modulus is reducible");
  auto f = std::make_shared<Field>();
  f->kind_ = FieldKind::galois;
  f->p_ = p;
  f->modulus_ = std::move(modulus);
  f->var_ = std::move(generator);
  return f;
}

inline FieldPtr Field::rational() {
  static const FieldPtr q = [] {
    auto f = std::make_shared<Field>();
    f->kind_ = FieldKind::rational;
    return f;
  }();
  return q;
}

inline FieldPtr Field::ratfunc(std::string var, FieldPtr base) {
  if (!base) throw DescriptorMismatch("rational function field needs a base");
  if (var.empty() || !std::isalpha(static_cast<unsigned char>(var[0]))) throw DescriptorMismatch("bad variable name '" + var + "'");
  for (const auto& v : base->variables())
    if (v == var) throw DescriptorMismatch("variable '" + var + "' already used in the tower");
  auto f = std::make_shared<Field>();
  f->kind_ = FieldKind::ratfunc;
  f->var_ = std::move(var);
  f->base_ = std::move(base);
  return f;
}

inline std::uint64_t Field::order() const {
  if (kind_ == FieldKind::prime) return static_cast<std::uint64_t>(p_);
  if (kind_ == FieldKind::galois) {
    std::uint64_t s = 1;
    for (int i = 0; i < degree(); ++i) s *= static_cast<std::uint64_t>(p_);
    return s;
  }
  return 0;
}

inline bool Field::same_as(const Field& o) const {
  if (this == &o) return true;
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case FieldKind::prime: return p_ == o.p_;
    case FieldKind::galois: return p_ == o.p_ && modulus_ == o.modulus_ && var_ == o.var_;
    case FieldKind::rational: return true;
    case FieldKind::ratfunc: return var_ == o.var_ && base_->same_as(*o.base_);
  }
  return false;
}

inline std::string Field::describe() const {
  switch (kind_) {
    case FieldKind::prime: return "F_" + std::to_string(p_);
    case FieldKind::galois: {
      std::string m;
      for (int i = degree(); i >= 0; --i) {
        if (modulus_[i] == 0) continue;
        if (!m.empty()) m += "+";
        if (i == 0 || modulus_[i] != 1) m += std::to_string(modulus_[i]);
        if (i > 0) m += (i == 0 || modulus_[i] != 1 ? "*" : "") + var_ + (i > 1 ? "^" + std::to_string(i) : "");
      }
      return "GF(" + std::to_string(p_) + "^" + std::to_string(degree()) + ")[" + m + "]";
    }
    case FieldKind::rational: return "Q";
    case FieldKind::ratfunc: return base_->describe() + "(" + var_ + ")";
  }
  return "?";
}

inline std::vector<std::string> Field::variables() const {
  std::vector<std::string> out;
  if (kind_ == FieldKind::ratfunc) {
    out.push_back(var_);
    auto rest = base_->variables();
    out.insert(out.end(), rest.begin(), rest.end());
  } else if (kind_ == FieldKind::galois) {
    out.push_back(var_);
  }
  return out;
}

// ---------------------------------------------------------------- Element

inline Element Element::zero(const FieldPtr& f) { return from_int(f, 0); }

inline Element Element::from_int(const FieldPtr& f, const BigInt& n) {
  Element e;
  e.f_ = f;
  switch (f->kind()) {
    case FieldKind::prime: e.v_ = detail::mod_big(n, f->p()); break;
    case FieldKind::galois: {
      std::vector<std::int64_t> cs(f->degree(), 0);
      cs[0] = detail::mod_big(n, f->p());
      e.v_ = std::move(cs);
      break;
    }
    case FieldKind::rational: e.v_ = Rational{n, 1}; break;
    case FieldKind::ratfunc: {
      Element c = from_int(f->base(), n);
      auto d = std::make_shared<RatFuncData>();
      d->num = Poly(f->base(), {c});
      d->den = Poly(f->base(), {one(f->base())});
      e.v_ = std::shared_ptr<const RatFuncData>(std::move(d));
      break;
    }
  }
  return e;
}

inline Element Element::fraction(const FieldPtr& f, const BigInt& num, const BigInt& den) {
  return from_int(f, num) / from_int(f, den);
}

inline Element Element::galois_from(const FieldPtr& f, std::vector<std::int64_t> coeffs) {
  if (f->kind() != FieldKind::galois) throw DescriptorMismatch("not a galois field");
  detail::IntPoly c = std::move(coeffs);
  for (auto& x : c) x = detail::mod(x, f->p());
  detail::trim(c);
  if (c.size() > static_cast<std::size_t>(f->degree())) c = detail::int_rem(c, f->modulus(), f->p());
  c.resize(f->degree(), 0);
  Element e;
  e.f_ = f;
  e.v_ = std::move(c);
  return e;
}


inline Element Element::from_poly(const FieldPtr& f, Poly num, Poly den) {
  if (f->kind() != FieldKind::ratfunc) throw DescriptorMismatch("from_poly needs a rational function field");
  const FieldPtr& base = f->base();
  if (den.is_zero()) throw DivisionByZero("rational function with zero denominator");
  num.field = base;
  den.field = base;
  if (num.is_zero()) {
    den = Poly(base, {one(base)});
  } else {
    Poly g = poly_gcd(num, den);
    if (g.degree() > 0) {
      num = poly_divmod(num, g).first;
      den = poly_divmod(den, g).first;
    }
    const Element inv_lead = den.lead().inv();
    if (!inv_lead.is_one()) {
      num = scale(num, inv_lead);
      den = scale(den, inv_lead);
    }
  }
  Element e;
  e.f_ = f;
  auto d = std::make_shared<RatFuncData>();
  d->num = std::move(num);
  d->den = std::move(den);
  e.v_ = std::shared_ptr<const RatFuncData>(std::move(d));
  return e;
}

inline Element Element::variable(const FieldPtr& f, const std::string& name) {
  switch (f->kind()) {
    case FieldKind::galois:
      if (name == f->variable()) return galois_from(f, {0, 1});
      break;
    case FieldKind::ratfunc: {
      const FieldPtr& b = f->base();
      if (name == f->variable()) return from_poly(f, Poly(b, {zero(b), one(b)}), Poly(b, {one(b)}));
      Element inner = variable(b, name);
      return from_poly(f, Poly(b, {inner}), Poly(b, {one(b)}));
    }
    default: break;
  }
  throw ParseError("unknown variable '" + name + "' in " + f->describe());
}

inline const Poly& Element::numer() const { return std::get<std::shared_ptr<const RatFuncData>>(v_)->num; }
inline const Poly& Element::denom() const { return std::get<std::shared_ptr<const RatFuncData>>(v_)->den; }

inline bool Element::is_zero() const {
  switch (f_->kind()) {
    case FieldKind::prime: return residue() == 0;
    case FieldKind::galois:
      return std::all_of(coeffs().begin(), coeffs().end(), [](std::int64_t c) { return c == 0; });
    case FieldKind::rational: return rat().num == 0;
    case FieldKind::ratfunc: return numer().is_zero();
  }
  return false;
}

inline bool Element::is_one() const {
  switch (f_->kind()) {
    case FieldKind::prime: return residue() == 1;
    case FieldKind::galois: {
      const auto& c = coeffs();
      if (c[0] != 1) return false;
      return std::all_of(c.begin() + 1, c.end(), [](std::int64_t x) { return x == 0; });
    }
    case FieldKind::rational: return rat().num == 1 && rat().den == 1;
    case FieldKind::ratfunc: return numer().degree() == 0 && denom().degree() == 0 && numer().c[0].is_one();
  }
  return false;
}

inline void Element::require_same(const Element& o) const {
  if (!f_ || !o.f_) throw DescriptorMismatch("operation on an empty element");
  if (!same_field(f_, o.f_)) throw DescriptorMismatch(f_->describe() + " vs " + o.f_->describe());
}

namespace detail {

inline Rational make_rat(BigInt n, BigInt d) {
  if (d == 0) throw DivisionByZero("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  BigInt g = boost::multiprecision::gcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n == 0) d = 1;
  return Rational{std::move(n), std::move(d)};
}

inline std::vector<std::int64_t> galois_mul(const FieldPtr& f, const std::vector<std::int64_t>& a,
                                            const std::vector<std::int64_t>& b) {
  const std::int64_t p = f->p();
  IntPoly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  }
  IntPoly r = int_rem(prod, f->modulus(), p);
  r.resize(f->degree(), 0);
  return r;
}

}  // namespace detail

inline Element Element::operator+(const Element& o) const {
  require_same(o);
  Element e;
  e.f_ = f_;
  switch (f_->kind()) {
    case FieldKind::prime: e.v_ = (residue() + o.residue()) % f_->p(); break;
    case FieldKind::galois: {
      auto c = coeffs();
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = (c[i] + o.coeffs()[i]) % f_->p();
      e.v_ = std::move(c);
      break;
    }
    case FieldKind::rational:
      e.v_ = detail::make_rat(rat().num * o.rat().den + o.rat().num * rat().den, rat().den * o.rat().den);
      break;
    case FieldKind::ratfunc:
      if (denom() == o.denom()) return from_poly(f_, numer() + o.numer(), denom());
      return from_poly(f_, numer() * o.denom() + o.numer() * denom(), denom() * o.denom());
  }
  return e;
}

inline Element Element::operator-() const {
  Element e;
  e.f_ = f_;
  switch (f_->kind()) {
    case FieldKind::prime: e.v_ = detail::mod(-residue(), f_->p()); break;
    case FieldKind::galois: {
      auto c = coeffs();
      for (auto& x : c) x = detail::mod(-x, f_->p());
      e.v_ = std::move(c);
      break;
    }
    case FieldKind::rational: e.v_ = Rational{-rat().num, rat().den}; break;
    case FieldKind::ratfunc: {
      Poly n = numer();
      for (auto& c : n.c) c = -c;
      auto d = std::make_shared<RatFuncData>();
      d->num = std::move(n);
      d->den = denom();
      e.v_ = std::shared_ptr<const RatFuncData>(std::move(d));
      break;
    }
  }
  return e;
}

inline Element Element::operator-(const Element& o) const { return *this + (-o); }

inline Element Element::operator*(const Element& o) const {
  require_same(o);
  Element e;
  e.f_ = f_;
  switch (f_->kind()) {
    case FieldKind::prime: e.v_ = residue() * o.residue() % f_->p(); break;
    case FieldKind::galois: e.v_ = detail::galois_mul(f_, coeffs(), o.coeffs()); break;
    case FieldKind::rational: e.v_ = detail::make_rat(rat().num * o.rat().num, rat().den * o.rat().den); break;
    case FieldKind::ratfunc:
      if (is_zero() || o.is_zero()) return zero(f_);
      return from_poly(f_, numer() * o.numer(), denom() * o.denom());
  }
  return e;
}

inline Element Element::inv() const {
  if (!f_) throw DescriptorMismatch("inverse of an empty element");
  if (is_zero()) throw DivisionByZero("inverse of zero in " + f_->describe());
  Element e;
  e.f_ = f_;
  switch (f_->kind()) {
    case FieldKind::prime: e.v_ = detail::pow_mod(residue(), f_->p() - 2, f_->p()); break;
    case FieldKind::galois: return pow(static_cast<long long>(f_->order()) - 2);
    case FieldKind::rational: e.v_ = detail::make_rat(rat().den, rat().num); break;
    case FieldKind::ratfunc: return from_poly(f_, denom(), numer());
  }
  return e;
}

inline Element Element::pow(long long n) const {
  if (n < 0) return inv().pow(-n);
  Element r = one(f_), b = *this;
  while (n > 0) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

inline bool Element::operator==(const Element& o) const {
  if (!f_ || !o.f_) return !f_ && !o.f_;
  if (!same_field(f_, o.f_)) return false;
  switch (f_->kind()) {
    case FieldKind::prime: return residue() == o.residue();
    case FieldKind::galois: return coeffs() == o.coeffs();
    case FieldKind::rational: return rat().num == o.rat().num && rat().den == o.rat().den;
    case FieldKind::ratfunc: return numer() == o.numer() && denom() == o.denom();
  }
  return false;
}

namespace detail {

inline std::string poly_str(const Poly& p, const std::string& var) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int k = p.degree(); k >= 0; --k) {
    const Element& c = p.c[k];
    if (c.is_zero()) continue;
    std::string cs = c.str();
    std::string term;
    const std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
    if (k == 0) {
      term = wrap_sum(cs);
    } else if (cs == "1") {
      term = mono;
    } else if (cs == "-1") {
      term = "-" + mono;
    } else {
      term = wrap_sum(cs) + "*" + mono;
    }
    if (!out.empty() && term[0] != '-') out += "+";
    out += term;
  }
  return out;
}

}  // namespace detail

inline std::string Element::str() const {
  if (!f_) return "<empty>";
  switch (f_->kind()) {
    case FieldKind::prime: return std::to_string(residue());
    case FieldKind::galois: {
      std::vector<Element> cs;
      FieldPtr fp = Field::prime(f_->p());
      for (auto c : coeffs()) cs.push_back(from_int(fp, c));
      return detail::poly_str(Poly(fp, cs), f_->variable());
    }
    case FieldKind::rational: {
      std::string n = rat().num.str();
      return rat().den == 1 ? n : n + "/" + rat().den.str();
    }
    case FieldKind::ratfunc: {
      std::string n = detail::poly_str(numer(), f_->variable());
      if (denom().degree() == 0) return n;
      return detail::wrap_sum(n) + "/" + detail::wrap(detail::poly_str(denom(), f_->variable()));
    }
  }
  return "?";
}

inline int compare(const Element& a, const Element& b) {
  a.require_same(b);
  auto cmp_poly = [](const Poly& x, const Poly& y) {
    if (x.c.size() != y.c.size()) return x.c.size() < y.c.size() ? -1 : 1;
    for (std::size_t i = x.c.size(); i-- > 0;) {
      int c = compare(x.c[i], y.c[i]);
      if (c) return c;
    }
    return 0;
  };
  switch (a.f_->kind()) {
    case FieldKind::prime: return a.residue() < b.residue() ? -1 : (a.residue() > b.residue() ? 1 : 0);
    case FieldKind::galois: return a.coeffs() < b.coeffs() ? -1 : (a.coeffs() > b.coeffs() ? 1 : 0);
    case FieldKind::rational: {
      if (a.rat().den != b.rat().den) return a.rat().den < b.rat().den ? -1 : 1;
      if (a.rat().num != b.rat().num) return a.rat().num < b.rat().num ? -1 : 1;
      return 0;
    }
    case FieldKind::ratfunc: {
      int c = cmp_poly(a.denom(), b.denom());
      return c ? c : cmp_poly(a.numer(), b.numer());
    }
  }
  return 0;
}

// ---------------------------------------------------------------- Poly

inline Poly operator+(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  std::vector<Element> c(std::max(a.c.size(), b.c.size()), Element::zero(a.field));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < a.c.size() && i < b.c.size()) c[i] = a.c[i] + b.c[i];
    else c[i] = i < a.c.size() ? a.c[i] : b.c[i];
  }
  return Poly(a.field, std::move(c));
}

inline Poly operator-(const Poly& a, const Poly& b) {
  Poly nb = b;
  for (auto& x : nb.c) x = -x;
  return a + nb;
}

inline Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly(a.field ? a.field : b.field);
  std::vector<Element> c(a.c.size() + b.c.size() - 1, Element::zero(a.field));
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) c[i + j] += a.c[i] * b.c[j];
  }
  return Poly(a.field, std::move(c));
}

inline Poly scale(const Poly& a, const Element& s) {
  std::vector<Element> c = a.c;
  for (auto& x : c) x = x * s;
  return Poly(a.field, std::move(c));
}

inline std::pair<Poly, Poly> poly_divmod(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw DivisionByZero("polynomial division by zero");
  const FieldPtr& f = den.field;
  Poly r = num;
  r.field = f;
  if (r.degree() < den.degree()) return {Poly(f), r};
  std::vector<Element> q(r.c.size() - den.c.size() + 1, Element::zero(f));
  const Element inv_lead = den.lead().inv();
  while (!r.is_zero() && r.degree() >= den.degree()) {
    const std::size_t shift = static_cast<std::size_t>(r.degree() - den.degree());
    const Element factor = r.lead() * inv_lead;
    q[shift] = factor;
    for (std::size_t i = 0; i < den.c.size(); ++i) r.c[shift + i] -= factor * den.c[i];
    r.c.pop_back();
    r.trim();
  }
  return {Poly(f, std::move(q)), r};
}

inline Poly poly_gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero() && !a.lead().is_one()) a = scale(a, a.lead().inv());
  return a;
}

inline Element poly_eval(const Poly& p, const Element& x) {
  Element r = Element::zero(x.field());
  for (std::size_t i = p.c.size(); i-- > 0;) r = r * x + p.c[i];
  return r;
}

// ---------------------------------------------------------------- embedding, parsing

/// View x, an element of a subfield in the tower of target, inside target.
inline Element embed(const FieldPtr& target, const Element& x) {
  if (same_field(target, x.field())) return x;
  if (target->kind() == FieldKind::ratfunc) {
    const FieldPtr& b = target->base();
    return Element::from_poly(target, Poly(b, {embed(b, x)}), Poly(b, {Element::one(b)}));
  }
  throw DescriptorMismatch("cannot embed " + x.field()->describe() + " into " + target->describe());
}

namespace detail {

class ExprParser {
 public:
  ExprParser(FieldPtr f, const std::string& s) : f_(std::move(f)), s_(s) {}

  Element parse() {
    Element e = sum();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char ch) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError(why + " at offset " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  Element sum() {
    Element acc;
    bool neg = false;
    skip();
    if (eat('-')) neg = true;
    else eat('+');
    acc = product();
    if (neg) acc = -acc;
    for (;;) {
      if (eat('+')) acc = acc + product();
      else if (eat('-')) acc = acc - product();
      else return acc;
    }
  }
  Element product() {
    Element acc = power();
    for (;;) {
      if (eat('*')) acc = acc * power();
      else if (eat('/')) acc = acc / power();
      else return acc;
    }
  }
  Element power() {
    Element b = atom();
    if (eat('^')) {
      skip();
      bool neg = eat('-');
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      long long e = std::stoll(s_.substr(start, pos_ - start));
      b = b.pow(neg ? -e : e);
    }
    return b;
  }
  Element atom() {
    skip();
    if (eat('(')) {
      Element e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (eat('-')) return -atom();
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Element::from_int(f_, BigInt(s_.substr(start, pos_ - start)));
    }
    if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      return Element::variable(f_, s_.substr(start, pos_ - start));
    }
    fail("unexpected character");
  }

  FieldPtr f_;
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse an arithmetic expression (integers, tower variables, + - * / ^, parentheses).
inline Element parse_element(const FieldPtr& f, const std::string& text) { return detail::ExprParser(f, text).parse(); }

// ---------------------------------------------------------------- enumeration, sampling

inline std::vector<Element> enumerate(const FieldPtr& f) {
  if (!f->is_finite()) throw DescriptorMismatch("cannot enumerate infinite field " + f->describe());
  std::vector<Element> out;
  if (f->kind() == FieldKind::prime) {
    for (std::int64_t r = 0; r < f->p(); ++r) out.push_back(Element::from_int(f, r));
    return out;
  }
  const std::uint64_t q = f->order();
  for (std::uint64_t code = 0; code < q; ++code) {
    std::vector<std::int64_t> c(f->degree());
    std::uint64_t x = code;
    for (auto& ci : c) {
      ci = static_cast<std::int64_t>(x % static_cast<std::uint64_t>(f->p()));
      x /= static_cast<std::uint64_t>(f->p());
    }
    out.push_back(Element::galois_from(f, c));
  }
  return out;
}

inline Element sample_element(const FieldPtr& f, Rng& rng, int bound) {
  if (bound < 1) bound = 1;
  switch (f->kind()) {
    case FieldKind::prime: return Element::from_int(f, static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(f->p()))));
    case FieldKind::galois: {
      std::vector<std::int64_t> c(f->degree());
      for (auto& x : c) x = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(f->p())));
      return Element::galois_from(f, c);
    }
    case FieldKind::rational: {
      const BigInt n = rng.range(-bound, bound);
      const BigInt d = rng.range(1, bound);
      return Element::fraction(f, n, d);
    }
    case FieldKind::ratfunc: {
      const FieldPtr& b = f->base();
      const bool nested = b->kind() == FieldKind::ratfunc;
      const int cb = nested ? 1 : bound;
      const int db = nested ? std::min(bound, 2) : bound;
      const int deg = static_cast<int>(rng.below(static_cast<std::uint64_t>(db) + 1));
      std::vector<Element> num(deg + 1), den;
      for (auto& c : num) c = sample_element(b, rng, cb);
      Poly dp(b);
      while (dp.is_zero()) {
        const int dd = static_cast<int>(rng.below(static_cast<std::uint64_t>(db) + 1));
        den.assign(dd + 1, Element());
        for (auto& c : den) c = sample_element(b, rng, cb);
        dp = Poly(b, den);
      }
      return Element::from_poly(f, Poly(b, std::move(num)), std::move(dp));
    }
  }
  return Element::zero(f);
}

inline Element sample_nonzero(const FieldPtr& f, Rng& rng, int bound) {
  for (;;) {
    Element e = sample_element(f, rng, bound);
    if (!e.is_zero()) return e;
  }
}

// ---------------------------------------------------------------- homomorphisms

/// Field homomorphism determined by images of the tower variables.
class FieldHom {
 public:
  /// images maps variable names of src to expressions in dst; missing names map to themselves.
  static FieldHom from_images(FieldPtr src, FieldPtr dst, const std::map<std::string, std::string>& images = {}) {
    FieldHom h;
    h.src_ = std::move(src);
    h.dst_ = std::move(dst);
    if (h.src_->characteristic() != h.dst_->characteristic()) throw DescriptorMismatch("homomorphism between fields of different characteristic");
    if (h.src_->kind() == FieldKind::galois || h.src_->kind() == FieldKind::ratfunc) {
      auto it = images.find(h.src_->variable());
      h.image_ = parse_element(h.dst_, it != images.end() ? it->second : h.src_->variable());
    }
    if (h.src_->kind() == FieldKind::galois) {
      const auto& m = h.src_->modulus();
      std::vector<Element> mc;
      for (auto c : m) mc.push_back(Element::from_int(h.dst_, c));
      if (!poly_eval(Poly(h.dst_, mc), h.image_).is_zero()) throw DescriptorMismatch("generator image is not a root of the modulus");
    }
    if (h.src_->kind() == FieldKind::ratfunc) h.base_ = std::make_shared<FieldHom>(from_images(h.src_->base(), h.dst_, images));
    return h;
  }

  const FieldPtr& source() const { return src_; }
  const FieldPtr& target() const { return dst_; }

  Element operator()(const Element& x) const {
    switch (src_->kind()) {
      case FieldKind::prime: return Element::from_int(dst_, x.residue());
      case FieldKind::rational: return Element::fraction(dst_, x.rat().num, x.rat().den);
      case FieldKind::galois: {
        Element r = Element::zero(dst_);
        for (std::size_t i = x.coeffs().size(); i-- > 0;) r = r * image_ + Element::from_int(dst_, x.coeffs()[i]);
        return r;
      }
      case FieldKind::ratfunc: {
        auto eval = [&](const Poly& p) {
          Element r = Element::zero(dst_);
          for (std::size_t i = p.c.size(); i-- > 0;) r = r * image_ + (*base_)(p.c[i]);
          return r;
        };
        return eval(x.numer()) / eval(x.denom());
      }
    }
    return x;
  }

 private:
  FieldPtr src_, dst_;
  Element image_;
  std::shared_ptr<const FieldHom> base_;
};

}  // namespace moufang
