#pragma once

/**
 * @file flags.hpp
 * @brief Flag buildings of type A_l over a finite field: chambers are maximal
 *        flags of K^{l+1}, the Weyl distance is computed from intersection dimensions.
 */

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "moufang/geometry.hpp"

namespace moufang {

/// Permutation of {0..m-1} as the permutation matrix with a one at (i, w[i]).
using Perm = std::vector<int>;

inline Perm perm_identity(int m) {
  Perm p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  return p;
}
/// Simple reflection of type i (1-based): swaps i-1 and i.
inline Perm perm_simple(int i, int m) {
  Perm p = perm_identity(m);
  std::swap(p[static_cast<std::size_t>(i - 1)], p[static_cast<std::size_t>(i)]);
  return p;
}
/// Matrix product: (a*b)[i] = b[a[i]].
inline Perm perm_mul(const Perm& a, const Perm& b) {
  Perm p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = b[static_cast<std::size_t>(a[i])];
  return p;
}
inline Perm perm_inv(const Perm& a) {
  Perm p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[static_cast<std::size_t>(a[i])] = static_cast<int>(i);
  return p;
}
inline int perm_length(const Perm& a) {
  int inv = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) inv += a[i] > a[j];
  return inv;
}
inline Perm perm_longest(int m) {
  Perm p(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) p[static_cast<std::size_t>(i)] = m - 1 - i;
  return p;
}
inline std::string perm_str(const Perm& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i] + 1);
  return s + "]";
}
/// A reduced word in the simple reflections, by bubble sort.
inline std::vector<int> reduced_word(Perm p) {
  std::vector<int> word;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
      if (p[i] > p[i + 1]) {
        std::swap(p[i], p[i + 1]);
        word.push_back(static_cast<int>(i + 1));
        moved = true;
      }
  }
  std::reverse(word.begin(), word.end());
  return word;
}

/// Chamber of A_l(K): nested subspaces V_1 < ... < V_l, each an rref basis.
struct Flag {
  std::vector<std::vector<Vector>> spaces;

  bool operator==(const Flag& o) const { return spaces == o.spaces; }
  std::size_t rank() const { return spaces.size(); }
  std::string str() const {
    std::string s;
    for (const auto& v : spaces) {
      s += s.empty() ? "{" : " < {";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + vector_str(v[i]);
      s += "}";
    }
    return s;
  }
};

/// Flag from an ordered basis: V_k is the span of the first k rows.
inline Flag flag_from_basis(const std::vector<Vector>& basis, std::size_t l) {
  Flag f;
  for (std::size_t k = 1; k <= l; ++k) {
    auto s = rref(std::vector<Vector>(basis.begin(), basis.begin() + static_cast<long>(k)));
    if (s.size() != k) throw RankCollapse("flag basis is dependent at step " + std::to_string(k));
    f.spaces.push_back(std::move(s));
  }
  return f;
}

/// Weyl distance delta(F,G) as the permutation of the intersection-dimension jumps.
inline Perm flag_weyl_distance(const Flag& a, const Flag& b) {
  if (a.rank() != b.rank()) throw DescriptorMismatch("flags of different rank");
  const std::size_t l = a.rank(), m = l + 1;
  // r[i][j] = dim(A_i ∩ B_j) with A_0 = 0 and A_{l+1} = K^{l+1}.
  std::vector<std::vector<int>> r(m + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 1; j <= m; ++j) {
      if (i == m || j == m) {
        r[i][j] = static_cast<int>(std::min(i, j));
        continue;
      }
      const int sum = static_cast<int>(rank(stack(a.spaces[i - 1], b.spaces[j - 1])));
      r[i][j] = static_cast<int>(i + j) - sum;
    }
  Perm w(m, -1);
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      if (r[i][j] - r[i - 1][j] - r[i][j - 1] + r[i - 1][j - 1] == 1) w[i - 1] = static_cast<int>(j - 1);
  return w;
}

/// All chambers of A_l(F_q).
inline std::vector<Flag> enumerate_flags(const FieldPtr& f, std::size_t l) {
  const auto vecs = detail::all_projective_vectors(f, l + 1);
  std::vector<Flag> out;
  std::vector<std::vector<Vector>> chain;
  std::function<void()> extend = [&] {
    if (chain.size() == l) {
      out.push_back(Flag{chain});
      return;
    }
    std::map<std::string, std::vector<Vector>> next;
    const std::vector<Vector> base = chain.empty() ? std::vector<Vector>{} : chain.back();
    for (const auto& v : vecs) {
      auto s = rref(stack(base, {v}));
      if (s.size() != base.size() + 1) continue;
      std::string key;
      for (const auto& row : s) key += vector_str(row) + ";";
      next.emplace(key, s);
    }
    for (auto& [key, s] : next) {
      chain.push_back(s);
      extend();
      chain.pop_back();
    }
  };
  extend();
  return out;
}

/// Chamber system given by its Weyl distance table.
struct WeylTable {
  int rank = 0;
  std::vector<Perm> perms;
  std::vector<int> delta;
  std::size_t chambers = 0;

  int at(std::size_t c, std::size_t d) const { return delta[c * chambers + d]; }
  const Perm& perm(std::size_t c, std::size_t d) const { return perms[static_cast<std::size_t>(at(c, d))]; }
  int index_of(const Perm& p) const {
    auto it = std::find(perms.begin(), perms.end(), p);
    return it == perms.end() ? -1 : static_cast<int>(it - perms.begin());
  }
};

inline WeylTable weyl_table(const std::vector<Flag>& flags) {
  WeylTable t;
  t.rank = flags.empty() ? 0 : static_cast<int>(flags[0].rank());
  Perm p = perm_identity(t.rank + 1);
  do t.perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  t.chambers = flags.size();
  t.delta.assign(t.chambers * t.chambers, 0);
  for (std::size_t c = 0; c < t.chambers; ++c)
    for (std::size_t d = 0; d < t.chambers; ++d) t.delta[c * t.chambers + d] = t.index_of(flag_weyl_distance(flags[c], flags[d]));
  return t;
}

/// WD1-WD3 over all chamber pairs and all simple reflections.
inline CheckReport verify_wd_axioms(const WeylTable& t) {
  CheckReport r;
  r.name = "wd_axioms";
  const int m = t.rank + 1;
  const int id = t.index_of(perm_identity(m));
  std::vector<int> simple;
  for (int s = 1; s <= t.rank; ++s) simple.push_back(t.index_of(perm_simple(s, m)));
  const std::size_t n = t.chambers;
  auto& wd1 = r.add("WD1", true, n * n);
  auto& wd2 = r.add("WD2", true, 0);
  auto& wd3 = r.add("WD3", true, n * n * simple.size());
  auto triple = [&](std::size_t a, std::size_t b, std::size_t c) {
    return "(C" + std::to_string(a) + ", C" + std::to_string(b) + ", C" + std::to_string(c) + ")";
  };
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d = 0; d < n; ++d)
      if ((t.at(c, d) == id) != (c == d)) r.fail(wd1, "(C" + std::to_string(c) + ", C" + std::to_string(d) + ") has distance " + perm_str(t.perm(c, d)));
  // s-neighbours of each chamber.
  std::vector<std::vector<std::vector<std::size_t>>> nbr(simple.size(), std::vector<std::vector<std::size_t>>(n));
  for (std::size_t k = 0; k < simple.size(); ++k)
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t e = 0; e < n; ++e)
        if (t.at(e, c) == simple[k]) nbr[k][c].push_back(e);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d = 0; d < n; ++d) {
      const Perm& w = t.perm(c, d);
      for (std::size_t k = 0; k < simple.size(); ++k) {
        const Perm& s = t.perms[static_cast<std::size_t>(simple[k])];
        const Perm sw = perm_mul(s, w);
        const int sw_i = t.index_of(sw);
        const bool up = perm_length(sw) == perm_length(w) + 1;
        bool found = false;
        for (std::size_t e : nbr[k][c]) {
          ++wd2.samples;
          const int ed = t.at(e, d);
          if (ed != sw_i && ed != t.at(c, d)) r.fail(wd2, triple(e, c, d) + ": " + perm_str(t.perm(e, d)) + " is neither sw nor w");
          else if (up && ed != sw_i) r.fail(wd2, triple(e, c, d) + ": l(sw) = l(w)+1 but distance is w");
          if (ed == sw_i) found = true;
        }
        if (!found) r.fail(wd3, "no s" + std::to_string(k + 1) + "-neighbour C' of C" + std::to_string(c) + " with delta(C',C" + std::to_string(d) + ") = " + perm_str(sw));
      }
    }
  r.fact("chambers", std::to_string(n));
  return r;
}

/// For opposite panels P, Q each chamber of P is non-opposite exactly one chamber of Q.
inline CheckReport verify_opposition(const WeylTable& t) {
  CheckReport r;
  r.name = "opposition";
  const int m = t.rank + 1;
  const Perm w0 = perm_longest(m);
  const int w0_i = t.index_of(w0);
  const std::size_t n = t.chambers;
  auto& c = r.add("unique_non_opposite");
  for (int s = 1; s <= t.rank; ++s) {
    const int si = t.index_of(perm_simple(s, m));
    const Perm ts = perm_mul(perm_mul(w0, perm_simple(s, m)), w0);
    const int ti = t.index_of(ts);
    auto panels = [&](int type) {
      std::vector<std::vector<std::size_t>> out;
      std::vector<bool> seen(n, false);
      for (std::size_t a = 0; a < n; ++a) {
        if (seen[a]) continue;
        std::vector<std::size_t> p{a};
        for (std::size_t b = 0; b < n; ++b)
          if (t.at(a, b) == type) p.push_back(b);
        for (auto x : p) seen[x] = true;
        out.push_back(p);
      }
      return out;
    };
    const auto ps = panels(si), qs = panels(ti);
    for (const auto& p : ps)
      for (const auto& q : qs) {
        bool opp = false;
        for (auto a : p)
          for (auto b : q) opp = opp || t.at(a, b) == w0_i;
        if (!opp) continue;
        ++c.samples;
        for (auto a : p) {
          int non = 0;
          for (auto b : q) non += t.at(a, b) != w0_i;
          if (non != 1) r.fail(c, "C" + std::to_string(a) + " is non-opposite " + std::to_string(non) + " chambers of an opposite panel");
        }
      }
  }
  return r;
}

}  // namespace moufang
