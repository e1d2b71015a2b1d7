#pragma once

/**
 * @file valuation.hpp
 * @brief Ordered value groups, valuations of finite rank, places,
 *        composition and coarsening.
 */

#include <cctype>
#include <compare>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "moufang/field.hpp"

namespace moufang {

enum class GroupKind { trivial, integers, lex, quadratic_real };

inline const char* group_name(GroupKind k) {
  switch (k) {
    case GroupKind::trivial: return "trivial";
    case GroupKind::integers: return "integers";
    case GroupKind::lex: return "lex";
    case GroupKind::quadratic_real: return "quadratic-real";
  }
  return "?";
}

/// Element of an ordered abelian group, or the symbol infinity.
class Value {
 public:
  Value() = default;

  static Value trivial() { return Value(GroupKind::trivial, {}); }
  static Value integer(long long n) { return Value(GroupKind::integers, {n}); }
  static Value lex(std::vector<long long> c) { return Value(GroupKind::lex, std::move(c)); }
  /// a + b*sqrt(2).
  static Value quadratic(long long a, long long b) { return Value(GroupKind::quadratic_real, {a, b}); }
  static Value infinity(GroupKind k, std::size_t rank) {
    Value v(k, std::vector<long long>(k == GroupKind::quadratic_real ? 2 : rank, 0));
    v.inf_ = true;
    return v;
  }
  static Value zero_of(GroupKind k, std::size_t rank) {
    return Value(k, std::vector<long long>(k == GroupKind::quadratic_real ? 2 : rank, 0));
  }

  GroupKind kind() const { return kind_; }
  std::size_t rank() const { return kind_ == GroupKind::quadratic_real ? 1 : c_.size(); }
  bool is_infinite() const { return inf_; }
  const std::vector<long long>& coords() const { return c_; }
  long long first() const { return c_.empty() ? 0 : c_[0]; }
  bool is_zero() const {
    if (inf_) return false;
    for (auto x : c_)
      if (x) return false;
    return true;
  }

  Value operator+(const Value& o) const {
    check(o);
    if (inf_ || o.inf_) return infinity(kind_, c_.size());
    Value r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
  }
  Value operator-() const {
    if (inf_) throw GroupMismatch("negating infinity");
    Value r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  Value operator-(const Value& o) const { return *this + (-o); }
  Value times(long long k) const {
    if (inf_) return *this;
    Value r = *this;
    for (auto& x : r.c_) x *= k;
    return r;
  }
  /// Multiplication by sqrt(2) inside the quadratic-real group.
  Value times_sqrt2() const {
    if (kind_ != GroupKind::quadratic_real) throw GroupMismatch("sqrt(2) scaling needs the quadratic-real group");
    if (inf_) return *this;
    return quadratic(2 * c_[1], c_[0]);
  }

  std::strong_ordering operator<=>(const Value& o) const {
    check(o);
    if (inf_ || o.inf_) {
      if (inf_ && o.inf_) return std::strong_ordering::equal;
      return inf_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (kind_ == GroupKind::quadratic_real) {
      const int s = sign_sqrt2(c_[0] - o.c_[0], c_[1] - o.c_[1]);
      return s < 0 ? std::strong_ordering::less : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != o.c_[i]) return c_[i] < o.c_[i] ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  bool operator==(const Value& o) const { return (*this <=> o) == 0; }

  std::string str() const {
    if (inf_) return "inf";
    switch (kind_) {
      case GroupKind::trivial: return "0";
      case GroupKind::integers: return std::to_string(c_[0]);
      case GroupKind::quadratic_real: {
        std::string b = std::to_string(c_[1]);
        return std::to_string(c_[0]) + (c_[1] < 0 ? "" : "+") + b + "*sqrt2";
      }
      case GroupKind::lex: {
        std::string s = "(";
        for (std::size_t i = 0; i < c_.size(); ++i) s += (i ? "," : "") + std::to_string(c_[i]);
        return s + ")";
      }
    }
    return "?";
  }

  /// Exact sign of a + b*sqrt(2).
  static int sign_sqrt2(long long a, long long b) {
    if (a >= 0 && b >= 0) return (a || b) ? 1 : 0;
    if (a <= 0 && b <= 0) return -1;
    const BigInt a2 = BigInt(a) * a, b2 = BigInt(2) * BigInt(b) * b;
    if (a > 0) return a2 > b2 ? 1 : -1;
    return b2 > a2 ? 1 : -1;
  }

 private:
  Value(GroupKind k, std::vector<long long> c) : kind_(k), c_(std::move(c)) {}
  void check(const Value& o) const {
    if (kind_ != o.kind_ || c_.size() != o.c_.size())
      throw GroupMismatch(std::string(group_name(kind_)) + " vs " + group_name(o.kind_));
  }

  GroupKind kind_ = GroupKind::trivial;
  std::vector<long long> c_;
  bool inf_ = false;
};

inline Value concat(const Value& a, const Value& b) {
  std::vector<long long> c = a.coords();
  c.insert(c.end(), b.coords().begin(), b.coords().end());
  return Value::lex(std::move(c));
}

/// Parse "inf", "3", "(1,0)" or "a+b*sqrt2" as an element of the group of kind k and given rank.
inline Value parse_value(const std::string& text, GroupKind k, std::size_t rank) {
  std::string t;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  if (t == "inf") return Value::infinity(k, rank);
  auto num = [&](const std::string& s) {
    std::size_t pos = 0;
    long long x = 0;
    try {
      x = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw ParseError("bad group element '" + text + "'");
    }
    if (pos != s.size()) throw ParseError("bad group element '" + text + "'");
    return x;
  };
  switch (k) {
    case GroupKind::trivial:
      if (t != "0") throw ParseError("trivial group has only 0, got '" + text + "'");
      return Value::trivial();
    case GroupKind::integers: return Value::integer(num(t));
    case GroupKind::lex: {
      if (t.size() < 2 || t.front() != '(' || t.back() != ')') throw ParseError("lex element needs parentheses: '" + text + "'");
      std::vector<long long> c;
      std::size_t start = 1;
      for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] == ',' || t[i] == ')') {
          c.push_back(num(t.substr(start, i - start)));
          start = i + 1;
        }
      if (c.size() != rank) throw ParseError("lex element '" + text + "' has the wrong rank");
      return Value::lex(std::move(c));
    }
    case GroupKind::quadratic_real: {
      const auto star = t.find("*sqrt2");
      if (star == std::string::npos) return Value::quadratic(num(t), 0);
      std::size_t split = t.find_last_of("+-", star);
      if (split == 0 || split == std::string::npos) return Value::quadratic(0, num(t.substr(0, star)));
      return Value::quadratic(num(t.substr(0, split)), num(t.substr(split, star - split)));
    }
  }
  throw ParseError("unknown group");
}

enum class ValuationRule { trivial, p_adic, t_adic, composite };

/// Surjective valuation of finite rank with its place.
class Valuation {
 public:
  static Valuation trivial(FieldPtr f) {
    auto d = std::make_shared<Data>();
    d->rule = ValuationRule::trivial;
    d->field = f;
    d->residue = std::move(f);
    return Valuation(d);
  }
  static Valuation p_adic(FieldPtr q, std::int64_t p) {
    if (q->kind() != FieldKind::rational) throw FieldMismatch("p-adic valuation needs Q, got " + q->describe());
    auto d = std::make_shared<Data>();
    d->rule = ValuationRule::p_adic;
    d->field = std::move(q);
    d->residue = Field::prime(p);
    d->p = p;
    d->rank = 1;
    return Valuation(d);
  }
  /// Order of vanishing at var = 0 on a rational function field.
  static Valuation t_adic(FieldPtr f) {
    if (f->kind() != FieldKind::ratfunc) throw FieldMismatch("t-adic valuation needs a rational function field, got " + f->describe());
    auto d = std::make_shared<Data>();
    d->rule = ValuationRule::t_adic;
    d->residue = f->base();
    d->field = std::move(f);
    d->rank = 1;
    return Valuation(d);
  }
  static Valuation composite(const Valuation& inner, const Valuation& outer) {
    if (!same_field(inner.residue_field(), outer.field()))
      throw FieldMismatch("outer valuation lives on " + outer.field()->describe() + ", inner residue field is " +
                          inner.residue_field()->describe());
    auto d = std::make_shared<Data>();
    d->rule = ValuationRule::composite;
    d->field = inner.field();
    d->residue = outer.residue_field();
    d->inner = inner.d_;
    d->outer = outer.d_;
    d->rank = inner.rank() + outer.rank();
    return Valuation(d);
  }

  ValuationRule rule() const { return d_->rule; }
  const FieldPtr& field() const { return d_->field; }
  const FieldPtr& residue_field() const { return d_->residue; }
  std::size_t rank() const { return d_->rank; }
  bool is_trivial() const { return d_->rank == 0; }
  std::int64_t prime() const { return d_->p; }
  Valuation inner() const { return Valuation(d_->inner); }
  Valuation outer() const { return Valuation(d_->outer); }

  GroupKind group() const {
    switch (d_->rule) {
      case ValuationRule::trivial: return GroupKind::trivial;
      case ValuationRule::composite: return GroupKind::lex;
      default: return GroupKind::integers;
    }
  }
  Value zero() const { return Value::zero_of(group(), rank()); }
  Value infinity() const { return Value::infinity(group(), rank()); }

  Value value(const Element& x) const {
    require(x);
    if (x.is_zero()) return infinity();
    switch (d_->rule) {
      case ValuationRule::trivial: return Value::trivial();
      case ValuationRule::p_adic: return Value::integer(pval(x.rat().num) - pval(x.rat().den));
      case ValuationRule::t_adic: return Value::integer(x.numer().order() - x.denom().order());
      case ValuationRule::composite: {
        const Valuation in = inner(), out = outer();
        const Value vi = in.value(x);
        const Element unit = in.reduce(x / in.element_of_value(vi));
        return concat(vi, out.value(unit));
      }
    }
    return zero();
  }

  /// Place map on the valuation ring.
  Element reduce(const Element& x) const {
    require(x);
    switch (d_->rule) {
      case ValuationRule::trivial: return x;
      case ValuationRule::p_adic: {
        const long long v = x.is_zero() ? 1 : pval(x.rat().num) - pval(x.rat().den);
        if (v < 0) throw NotInValuationRing(x.str() + " has " + std::to_string(d_->p) + "-adic value " + std::to_string(v));
        if (v > 0) return Element::zero(d_->residue);
        return Element::from_int(d_->residue, x.rat().num) / Element::from_int(d_->residue, x.rat().den);
      }
      case ValuationRule::t_adic: {
        if (x.is_zero()) return Element::zero(d_->residue);
        const int v = x.numer().order() - x.denom().order();
        if (v < 0) throw NotInValuationRing(x.str() + " has a pole at " + d_->field->variable() + " = 0");
        if (v > 0) return Element::zero(d_->residue);
        return x.numer().c[0] / x.denom().c[0];
      }
      case ValuationRule::composite: return outer().reduce(inner().reduce(x));
    }
    return x;
  }

  /// Section of the place: a valuation-ring element reducing to y.
  Element lift(const Element& y) const {
    if (!same_field(y.field(), d_->residue)) throw FieldMismatch("lift expects an element of " + d_->residue->describe());
    switch (d_->rule) {
      case ValuationRule::trivial: return y;
      case ValuationRule::p_adic: return Element::from_int(d_->field, y.residue());
      case ValuationRule::t_adic: return embed(d_->field, y);
      case ValuationRule::composite: return inner().lift(outer().lift(y));
    }
    return y;
  }

  /// The stored element of value v: powers of the uniformizer, stacked for composites.
  Element element_of_value(const Value& v) const {
    if (v.is_infinite()) return Element::zero(d_->field);
    switch (d_->rule) {
      case ValuationRule::trivial: return Element::one(d_->field);
      case ValuationRule::p_adic:
      case ValuationRule::t_adic: return uniformizer().pow(v.first());
      case ValuationRule::composite: {
        const Valuation in = inner(), out = outer();
        const auto& c = v.coords();
        const std::size_t ri = in.rank();
        auto part = [](GroupKind k, std::vector<long long> cs) {
          if (k == GroupKind::trivial) return Value::trivial();
          if (k == GroupKind::integers) return Value::integer(cs.at(0));
          return Value::lex(std::move(cs));
        };
        const Value vi = part(in.group(), std::vector<long long>(c.begin(), c.begin() + static_cast<long>(ri)));
        const Value vo = part(out.group(), std::vector<long long>(c.begin() + static_cast<long>(ri), c.end()));
        return in.element_of_value(vi) * in.lift(out.element_of_value(vo));
      }
    }
    return Element::one(d_->field);
  }

  Element uniformizer() const {
    switch (d_->rule) {
      case ValuationRule::p_adic: return Element::from_int(d_->field, d_->p);
      case ValuationRule::t_adic: return Element::variable(d_->field, d_->field->variable());
      default: throw RankNotOne("uniformizer needs a discrete rank-one rule");
    }
  }

  /// Elements whose values are the unit vectors of the value group.
  std::vector<Element> generator_preimages() const {
    std::vector<Element> out;
    for (std::size_t k = 0; k < rank(); ++k) {
      std::vector<long long> c(rank(), 0);
      c[k] = 1;
      out.push_back(element_of_value(group() == GroupKind::integers ? Value::integer(1) : Value::lex(c)));
    }
    return out;
  }

  std::string describe() const {
    switch (d_->rule) {
      case ValuationRule::trivial: return "trivial";
      case ValuationRule::p_adic: return std::to_string(d_->p) + "-adic";
      case ValuationRule::t_adic: return d_->field->variable() + "-adic";
      case ValuationRule::composite: return "composite(" + inner().describe() + "; " + outer().describe() + ")";
    }
    return "?";
  }

  bool same_as(const Valuation& o) const {
    if (d_ == o.d_) return true;
    if (d_->rule != o.d_->rule || !same_field(d_->field, o.d_->field)) return false;
    if (d_->rule == ValuationRule::p_adic) return d_->p == o.d_->p;
    if (d_->rule == ValuationRule::composite) return inner().same_as(o.inner()) && outer().same_as(o.outer());
    return true;
  }

 private:
  struct Data {
    ValuationRule rule = ValuationRule::trivial;
    FieldPtr field, residue;
    std::int64_t p = 0;
    std::size_t rank = 0;
    std::shared_ptr<const Data> inner, outer;
  };

  explicit Valuation(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

  void require(const Element& x) const {
    if (!same_field(x.field(), d_->field)) throw FieldMismatch(x.field()->describe() + " is not " + d_->field->describe());
  }
  long long pval(BigInt n) const {
    if (n == 0) return 0;
    long long v = 0;
    if (n < 0) n = -n;
    while (n % d_->p == 0) {
      n /= d_->p;
      ++v;
    }
    return v;
  }

  std::shared_ptr<const Data> d_;
};

/// Stack outer (on the residue field of inner) below inner; values are (inner, outer).
inline Valuation compose_valuations(const Valuation& inner, const Valuation& outer) { return Valuation::composite(inner, outer); }

/// Split a lex valuation of rank n >= 2 into its first coordinate and the residual rank n-1 valuation.
inline std::pair<Valuation, Valuation> coarsen(const Valuation& v) {
  if (v.rule() != ValuationRule::composite || v.rank() < 2) throw RankTooLow("coarsen needs a composite valuation of rank >= 2, got " + v.describe());
  const Valuation in = v.inner();
  if (in.rank() == 0) return coarsen(v.outer());
  if (in.rank() == 1) return {in, v.outer()};
  auto [c, r] = coarsen(in);
  return {c, compose_valuations(r, v.outer())};
}

/// Reduction from the valuation ring onto the residue field.
class Place {
 public:
  explicit Place(Valuation v) : v_(std::move(v)) {}
  const Valuation& valuation() const { return v_; }
  const FieldPtr& source_field() const { return v_.field(); }
  const FieldPtr& residue_field() const { return v_.residue_field(); }
  Element reduce(const Element& x) const { return v_.reduce(x); }
  Element lift(const Element& y) const { return v_.lift(y); }

 private:
  Valuation v_;
};

/// Random element with value spread across roughly [-spread, spread] along each generator.
inline Element sample_valued(const Valuation& v, Rng& rng, int bound, int spread) {
  Element x = sample_nonzero(v.field(), rng, bound);
  if (v.is_trivial() || spread <= 0) return x;
  for (const auto& g : v.generator_preimages()) x = x * g.pow(rng.range(-spread, spread));
  return x;
}

/// Random element of the valuation ring (value >= 0), zero allowed.
inline Element sample_integral(const Valuation& v, Rng& rng, int bound) {
  Element x = sample_element(v.field(), rng, bound);
  if (x.is_zero() || v.is_trivial()) return x;
  const Value val = v.value(x);
  if (val < v.zero()) x = x / v.element_of_value(val);
  return x;
}

/// Element of smallest stored positive value (in the maximal ideal).
inline Element positive_element(const Valuation& v) {
  if (v.is_trivial()) throw LiftFailure("the trivial valuation has no maximal ideal");
  return v.generator_preimages().back();
}

}  // namespace moufang
