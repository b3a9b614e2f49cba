#pragma once

// Independent brute-force oracles. They share no code with the library
// beyond the value types and are only usable on tiny inputs.

#include <cstdint>
#include <functional>
#include <set>
#include <optional>
#include <vector>

#include "nzext/nzext.hpp"

namespace oracle {

using GF = nzext::PrimeField;

/// Every vector in GF(p)^n, enumerated in lexicographic order.
inline void for_each_vector(std::uint32_t p, std::size_t n, const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
  std::vector<std::uint32_t> v(n, 0);
  while (true) {
    fn(v);
    std::size_t i = 0;
    while (i < n && ++v[i] == p) v[i++] = 0;
    if (i == n) return;
  }
}

inline std::size_t log_p(std::uint64_t count, std::uint32_t p) {
  std::size_t e = 0;
  while (count > 1) {
    count /= p;
    ++e;
  }
  return e;
}

/// Nullity by counting solutions of m v = 0.
inline std::size_t nullity(const nzext::Matrix<GF>& m) {
  std::uint32_t p = m.field().characteristic();
  std::uint64_t count = 0;
  for_each_vector(p, m.cols(), [&](const auto& v) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < m.cols(); ++j) acc += std::uint64_t{m(i, j)} * v[j];
      if (acc % p) return;
    }
    ++count;
  });
  return log_p(count, p);
}

inline bool consistent(const nzext::Matrix<GF>& m, const std::vector<std::uint32_t>& b) {
  std::uint32_t p = m.field().characteristic();
  bool found = false;
  for_each_vector(p, m.cols(), [&](const auto& v) {
    if (found) return;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < m.cols(); ++j) acc += std::uint64_t{m(i, j)} * v[j];
      if (acc % p != b[i]) return;
    }
    found = true;
  });
  return found;
}

/// Paths of a quiver avoiding every monomial relation as a contiguous subpath.
inline std::size_t monomial_algebra_dim(const nzext::Quiver& q, const std::vector<std::vector<std::size_t>>& zero_paths) {
  std::size_t count = q.vertices;
  std::vector<std::vector<std::size_t>> level;
  for (std::size_t a = 0; a < q.arrows.size(); ++a) level.push_back({a});
  auto contains_relation = [&](const std::vector<std::size_t>& p) {
    for (const auto& r : zero_paths) {
      if (r.size() > p.size()) continue;
      for (std::size_t s = 0; s + r.size() <= p.size(); ++s)
        if (std::equal(r.begin(), r.end(), p.begin() + s)) return true;
    }
    return false;
  };
  for (std::size_t len = 1; len < 40 && !level.empty(); ++len) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& p : level) {
      if (contains_relation(p)) continue;
      ++count;
      for (std::size_t a = 0; a < q.arrows.size(); ++a) {
        if (q.arrows[a].source != q.arrows[p.back()].target) continue;
        auto e = p;
        e.push_back(a);
        next.push_back(e);
      }
    }
    level = std::move(next);
  }
  return count;
}

/// dim Hom(m, n) by counting all tuples of vertex matrices that intertwine.
inline std::size_t hom_dim(const nzext::Module<GF>& m, const nzext::Module<GF>& n) {
  const auto& q = m.algebra()->quiver();
  std::uint32_t p = m.field().characteristic();
  std::size_t unknowns = 0;
  std::vector<std::size_t> off;
  for (std::size_t v = 0; v < q.vertices; ++v) {
    off.push_back(unknowns);
    unknowns += m.dim(v) * n.dim(v);
  }
  std::uint64_t count = 0;
  for_each_vector(p, unknowns, [&](const auto& x) {
    auto f = [&](std::size_t v, std::size_t i, std::size_t j) { return x[off[v] + i * m.dim(v) + j]; };
    for (std::size_t a = 0; a < q.arrows.size(); ++a) {
      std::size_t s = q.arrows[a].source, t = q.arrows[a].target;
      for (std::size_t i = 0; i < n.dim(t); ++i) {
        for (std::size_t j = 0; j < m.dim(s); ++j) {
          std::uint64_t lhs = 0, rhs = 0;
          for (std::size_t k = 0; k < n.dim(s); ++k) lhs += std::uint64_t{n.arrow(a)(i, k)} * f(s, k, j);
          for (std::size_t k = 0; k < m.dim(t); ++k) rhs += std::uint64_t{f(t, i, k)} * m.arrow(a)(k, j);
          if ((lhs + p - rhs % p) % p) return;
        }
      }
    }
    ++count;
  });
  return log_p(count, p);
}

/// dim Ext^k(x, y) from a deliberately non-minimal free resolution (one generator
/// per basis vector at every step) and Hom spaces solved from intertwiner equations.
template <class F>
std::size_t ext_dim_nonminimal(std::size_t k, const nzext::Module<F>& x, const nzext::Module<F>& y) {
  using namespace nzext;
  const auto& alg = x.algebra();
  std::vector<Module<F>> terms;
  std::vector<Morphism<F>> diffs;  // diffs[i] : F_{i+1} -> F_i
  Module<F> cur = x;
  std::optional<Morphism<F>> incl;
  for (std::size_t i = 0; i <= k + 1; ++i) {
    std::vector<std::size_t> verts;
    std::vector<Vector<F>> images;
    for (std::size_t v = 0; v < alg->vertex_count(); ++v) {
      for (std::size_t j = 0; j < cur.dim(v); ++j) {
        Vector<F> e(cur.dim(v), x.field().zero());
        e[j] = x.field().one();
        verts.push_back(v);
        images.push_back(e);
      }
    }
    auto p = projective_sum(alg, verts);
    auto epi = from_generators(p, cur, images);
    terms.push_back(p.module);
    if (incl) diffs.push_back(*incl * epi);
    auto ker = kernel(epi);
    incl = ker.inclusion;
    cur = ker.object;
  }
  // rank of  Hom(F_i, y) -> Hom(F_{i+1}, y)
  auto delta_rank = [&](std::size_t i) -> std::size_t {
    std::vector<Morphism<F>> imgs;
    for (const auto& h : hom_basis(terms[i], y)) imgs.push_back(h * diffs[i]);
    std::size_t len = 0;
    for (std::size_t v = 0; v < alg->vertex_count(); ++v) len += terms[i + 1].dim(v) * y.dim(v);
    return rank(flat_columns(x.field(), len, imgs));
  };
  std::size_t ker = hom_basis(terms[k], y).size() - delta_rank(k);
  return ker - (k == 0 ? 0 : delta_rank(k - 1));
}

}  // namespace oracle
