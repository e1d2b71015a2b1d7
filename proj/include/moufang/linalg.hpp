#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "moufang/field.hpp"

namespace moufang {

using Vector = std::vector<Element>;

struct Matrix {
  FieldPtr field;
  std::size_t rows = 0, cols = 0;
  std::vector<Element> a;

  Matrix() = default;
  Matrix(FieldPtr f, std::size_t r, std::size_t c) : field(f), rows(r), cols(c), a(r * c, Element::zero(f)) {}

  static Matrix identity(const FieldPtr& f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Element::one(f);
    return m;
  }
  static Matrix from_rows(const FieldPtr& f, const std::vector<Vector>& rs) {
    Matrix m(f, rs.size(), rs.empty() ? 0 : rs[0].size());
    for (std::size_t i = 0; i < m.rows; ++i)
      for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = rs[i][j];
    return m;
  }

  Element& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Element& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  Vector row(std::size_t i) const { return Vector(a.begin() + static_cast<long>(i * cols), a.begin() + static_cast<long>((i + 1) * cols)); }

  Matrix operator*(const Matrix& o) const {
    Matrix m(field, rows, o.cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t k = 0; k < cols; ++k) {
        const Element& x = (*this)(i, k);
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < o.cols; ++j) m(i, j) += x * o(k, j);
      }
    return m;
  }
  Matrix transpose() const {
    Matrix m(field, cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(j, i) = (*this)(i, j);
    return m;
  }
  bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }
  bool is_identity() const { return *this == identity(field, rows); }
};

inline Element dot(const Vector& x, const Vector& y) {
  Element s = Element::zero(x.at(0).field());
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline Vector row_times(const Vector& x, const Matrix& m) {
  Vector out(m.cols, Element::zero(m.field));
  for (std::size_t k = 0; k < m.rows; ++k) {
    if (x[k].is_zero()) continue;
    for (std::size_t j = 0; j < m.cols; ++j) out[j] += x[k] * m(k, j);
  }
  return out;
}

inline bool is_zero_vector(const Vector& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

/// Scale so the first nonzero coordinate is 1.
inline Vector canonical(Vector v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    if (!v[i].is_one()) {
      const Element s = v[i].inv();
      for (std::size_t j = i; j < v.size(); ++j) v[j] = v[j] * s;
    }
    return v;
  }
  throw DivisionByZero("zero vector has no projective point");
}

/// Reduced row echelon form with zero rows dropped.
inline std::vector<Vector> rref(std::vector<Vector> m) {
  if (m.empty()) return m;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c].is_zero()) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[r], m[piv]);
    const Element s = m[r][c].inv();
    for (auto& x : m[r]) x = x * s;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      const Element f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  m.resize(r);
  return m;
}

inline std::size_t rank(const std::vector<Vector>& m) { return rref(m).size(); }

inline std::vector<Vector> stack(std::vector<Vector> a, const std::vector<Vector>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline Matrix inverse(const Matrix& m) {
  const std::size_t n = m.rows;
  std::vector<Vector> aug(n, Vector(2 * n, Element::zero(m.field)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m(i, j);
    aug[i][n + i] = Element::one(m.field);
  }
  auto r = rref(aug);
  if (r.size() < n || !r[n - 1][n - 1].is_one()) throw DivisionByZero("singular matrix");
  Matrix inv(m.field, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = r[i][n + j];
  return inv;
}

/// Basis of {x : x . y = 0 for every row y}.
inline std::vector<Vector> null_space(const std::vector<Vector>& rows, std::size_t cols, const FieldPtr& f) {
  auto r = rref(rows);
  std::vector<std::size_t> pivots;
  for (const auto& row : r) {
    std::size_t c = 0;
    while (row[c].is_zero()) ++c;
    pivots.push_back(c);
  }
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    Vector v(cols, Element::zero(f));
    v[free] = Element::one(f);
    for (std::size_t i = 0; i < r.size(); ++i) v[pivots[i]] = -r[i][free];
    basis.push_back(v);
  }
  return basis;
}

inline std::string vector_str(const Vector& v, const std::string& sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i].str();
  return s;
}

}  // namespace moufang
