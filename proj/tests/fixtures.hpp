#pragma once

// Shared fixtures over the radical square zero Nakayama algebras.

#include <stdexcept>
#include <string>
#include <vector>

#include "oracles.hpp"

namespace fixture {

using namespace nzext;
using GF = PrimeField;
using Mod = Module<GF>;
using Mor = Morphism<GF>;

inline Mor only_map(const Mod& x, const Mod& y) {
  auto b = hom_basis(x, y);
  if (b.size() != 1) throw std::runtime_error("Hom(" + x.name() + ", " + y.name() + ") is not one-dimensional");
  return b.front();
}

inline Subcategory<GF> m2(const AlgebraPtr<GF>& alg) {
  return Subcategory<GF>(alg, {projective(alg, 0), projective(alg, 1), simple(alg, 0), simple(alg, 2)});
}

inline Subcategory<GF> m5(const AlgebraPtr<GF>& alg, bool with_s3 = true) {
  std::vector<Mod> mods;
  for (std::size_t v = 0; v < 4; ++v) mods.push_back(projective(alg, v));
  for (std::size_t v : {0, 2, 4})
    if (with_s3 || v != 2) mods.push_back(simple(alg, v));
  return Subcategory<GF>(alg, mods);
}

/// 0 -> S_{i+2} -> P_{i+1} -> P_i -> S_i -> 0 (0-based i).
inline Complex<GF> two_step(const AlgebraPtr<GF>& alg, std::size_t i) {
  auto s2 = simple(alg, i + 2), p1 = projective(alg, i + 1), p0 = projective(alg, i), s0 = simple(alg, i);
  return Complex<GF>(0, {s2, p1, p0, s0}, {only_map(s2, p1), only_map(p1, p0), only_map(p0, s0)});
}

/// 0 -> S_{i+k} -> P_{i+k-1} -> ... -> P_i -> S_i -> 0 over a radical square zero Nakayama algebra.
inline Complex<GF> resolution_tail(const AlgebraPtr<GF>& alg, std::size_t i, std::size_t k) {
  std::vector<Mod> terms{simple(alg, i + k)};
  for (std::size_t j = k; j-- > 0;) terms.push_back(projective(alg, i + j));
  terms.push_back(simple(alg, i));
  std::vector<Mor> diffs;
  for (std::size_t t = 0; t + 1 < terms.size(); ++t) diffs.push_back(only_map(terms[t], terms[t + 1]));
  return Complex<GF>(0, terms, diffs);
}

/// Ranks an exact sequence with these node dimensions must have.
inline std::vector<std::size_t> exact_ranks(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> r;
  std::size_t prev = 0;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    r.push_back(dims[i] - prev);
    prev = r.back();
  }
  return r;
}

inline Mod by_name(const AlgebraPtr<GF>& alg, const std::string& name) {
  for (auto& m : list_indecomposables(alg))
    if (m.name() == name) return m;
  throw std::runtime_error("no module " + name);
}

inline Subcategory<GF> by_names(const AlgebraPtr<GF>& alg, const std::vector<std::string>& names) {
  std::vector<Mod> mods;
  for (const auto& n : names) mods.push_back(by_name(alg, n));
  return Subcategory<GF>(alg, mods);
}

/// Straight-line support table: C^j as the kernel of d^{j+1}, dimensions from the oracle.
inline std::size_t oracle_support_exceptions(const Subcategory<GF>& m, const Complex<GF>& y, std::size_t n, std::size_t maxdeg, bool nz,
                                      std::size_t& nonzero) {
  bool hyp2 = true;
  for (const auto& a : m.members())
    for (const auto& b : m.members())
      for (std::size_t i = n + 1; i < 2 * n; ++i) hyp2 = hyp2 && oracle::ext_dim_nonminimal(i, a, b) == 0;
  std::size_t bad = 0;
  nonzero = 0;
  for (std::size_t j = 1; j < n; ++j) {
    auto c = kernel(y.d(y.lo() + static_cast<int>(j) + 1)).object;
    for (const auto& a : m.members())
      for (std::size_t k = 1; k <= maxdeg; ++k) {
        if (!oracle::ext_dim_nonminimal(k, a, c)) continue;
        ++nonzero;
        bool ok = true;
        if (k < n) ok = k == n - j;
        if (k > n && k < 2 * n && hyp2) ok = k == 2 * n - j;
        if (nz) ok = ok && (k % n == 0 || (k + j) % n == 0);
        bad += !ok;
      }
  }
  return bad;
}


}  // namespace fixture
