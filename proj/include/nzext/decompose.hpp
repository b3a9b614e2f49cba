#pragma once

// Krull-Schmidt decomposition by Fitting splits, isomorphism tests and the
// indecomposable catalog of Nakayama algebras.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nzext/module.hpp"

namespace nzext {

namespace detail {

template <class F>
typename F::value_type random_scalar(const F& f, std::mt19937_64& rng) {
  if constexpr (std::is_same_v<F, PrimeField>) {
    return static_cast<typename F::value_type>(rng() % f.characteristic());
  } else {
    return f.from_int(static_cast<std::int64_t>(rng() % 7) - 3);
  }
}

template <class F>
Morphism<F> power(const Morphism<F>& f, std::size_t e) {
  Morphism<F> r = Morphism<F>::identity(f.source());
  Morphism<F> b = f;
  while (e) {
    if (e & 1) r = b * r;
    b = b * b;
    e >>= 1;
  }
  return r;
}

/// If f^N splits m nontrivially, the pair (ker f^N, im f^N) as submodules.
template <class F>
std::optional<std::pair<Module<F>, Module<F>>> fitting_split(const Module<F>& m, const Morphism<F>& f) {
  std::size_t n = m.total_dim();
  auto fn = power(f, n);
  std::size_t r = fn.rank();
  if (r == 0 || r == n) return std::nullopt;
  return std::make_pair(kernel(fn).object, image(fn).object);
}

}  // namespace detail

/// Number of random endomorphisms tried after the basis and pairwise sums.
inline constexpr int kFittingTrials = 64;

/// Some endomorphism whose Fitting split is nontrivial, or nullopt.
template <class F>
std::optional<std::pair<Module<F>, Module<F>>> find_split(const Module<F>& m, std::uint64_t seed = 0x5eed) {
  if (m.total_dim() <= 1) return std::nullopt;
  auto basis = hom_basis(m, m);
  for (const auto& f : basis)
    if (auto s = detail::fitting_split(m, f)) return s;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (auto s = detail::fitting_split(m, basis[i] + basis[j])) return s;
  std::mt19937_64 rng(seed ^ m.total_dim());
  const F& f = m.field();
  for (int t = 0; t < kFittingTrials && basis.size() > 1; ++t) {
    Morphism<F> g = Morphism<F>::zero(m, m);
    for (const auto& b : basis) g = g + b.scaled(detail::random_scalar(f, rng));
    if (auto s = detail::fitting_split(m, g)) return s;
  }
  return std::nullopt;
}

template <class F>
bool is_indecomposable(const Module<F>& m) {
  return !m.is_zero() && !find_split(m);
}

/// Iso test for modules assumed indecomposable: some g_j f_i is invertible.
template <class F>
bool isomorphic_indecomposables(const Module<F>& x, const Module<F>& y) {
  if (x.dims() != y.dims()) return false;
  if (x.total_dim() == 0) return true;
  auto fs = hom_basis(x, y);
  if (fs.empty()) return false;
  auto gs = hom_basis(y, x);
  for (const auto& f : fs) {
    if (f.is_iso()) return true;
    for (const auto& g : gs)
      if ((g * f).is_iso()) return true;
  }
  return false;
}

/// Indecomposable summands (all copies, not yet grouped).
template <class F>
std::vector<Module<F>> indecomposable_summands(const Module<F>& m) {
  std::vector<Module<F>> out, work{m};
  while (!work.empty()) {
    auto cur = work.back();
    work.pop_back();
    if (cur.is_zero()) continue;
    if (auto s = find_split(cur)) {
      work.push_back(s->second);
      work.push_back(s->first);
    } else {
      out.push_back(cur);
    }
  }
  return out;
}

/// Krull-Schmidt decomposition: pairwise non-isomorphic summands with multiplicities.
/// Summands are named after a matching catalog entry when one is supplied.
template <class F>
std::vector<std::pair<Module<F>, std::size_t>> indecompose(const Module<F>& m,
                                                           const std::vector<Module<F>>& catalog = {}) {
  std::vector<std::pair<Module<F>, std::size_t>> out;
  for (auto& s : indecomposable_summands(m)) {
    bool merged = false;
    for (auto& [rep, mult] : out) {
      if (isomorphic_indecomposables(rep, s)) {
        ++mult;
        merged = true;
        break;
      }
    }
    if (merged) continue;
    for (const auto& c : catalog) {
      if (isomorphic_indecomposables(c, s)) {
        s = s.renamed(c.name());
        break;
      }
    }
    out.emplace_back(s, 1);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.first.total_dim() < b.first.total_dim();
  });
  return out;
}

/// General iso test through decompositions.
template <class F>
bool is_isomorphic(const Module<F>& x, const Module<F>& y) {
  if (x.dims() != y.dims()) return false;
  auto dx = indecompose(x), dy = indecompose(y);
  if (dx.size() != dy.size()) return false;
  std::vector<bool> used(dy.size(), false);
  for (const auto& [a, ma] : dx) {
    bool found = false;
    for (std::size_t j = 0; j < dy.size(); ++j) {
      if (!used[j] && dy[j].second == ma && isomorphic_indecomposables(a, dy[j].first)) {
        used[j] = found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

/// Interval module [i, j] (0-based inclusive) over a linearly oriented A_m quiver.
template <class F>
Module<F> interval_module(const AlgebraPtr<F>& alg, std::size_t i, std::size_t j, std::string name = "") {
  const auto& q = alg->quiver();
  std::vector<std::size_t> dims(q.vertices, 0);
  for (std::size_t v = i; v <= j; ++v) dims.at(v) = 1;
  std::vector<Matrix<F>> arrows;
  for (const auto& a : q.arrows) {
    Matrix<F> mat(alg->field(), dims[a.target], dims[a.source]);
    if (dims[a.target] && dims[a.source]) mat(0, 0) = alg->field().one();
    arrows.push_back(std::move(mat));
  }
  return Module<F>(alg, std::move(dims), std::move(arrows), std::move(name));
}

/// Catalog name of the interval [i, j] (0-based) in nakayama(m, l).
inline std::string nakayama_interval_name(std::size_t m, std::size_t l, std::size_t i, std::size_t j) {
  auto one = [](std::size_t v) { return std::to_string(v + 1); };
  if (i == j) return "S" + one(i);
  if (j == std::min(i + l - 1, m - 1)) return "P" + one(i);
  if (i == (j + 1 >= l ? j + 1 - l : 0)) return "I" + one(j);
  return "M[" + one(i) + "," + one(j) + "]";
}

/// All indecomposables: the Nakayama interval catalog, or a verified and
/// deduplicated user list for other algebras.
template <class F>
std::vector<Module<F>> list_indecomposables(const AlgebraPtr<F>& alg, const std::vector<Module<F>>& user = {}) {
  std::vector<Module<F>> out;
  if (!user.empty()) {
    for (const auto& u : user) {
      if (u.algebra() != alg) throw AlgebraMismatch();
      if (!is_indecomposable(u)) throw InvalidModule("module '" + u.name() + "' is not indecomposable");
      bool dup = false;
      for (const auto& o : out) dup = dup || isomorphic_indecomposables(o, u);
      if (!dup) out.push_back(u);
    }
    return out;
  }
  const auto& shape = alg->nakayama_shape();
  if (!shape) throw UnsupportedEnumeration("indecomposable enumeration needs a Nakayama algebra or a module list");
  std::size_t m = shape->m, l = shape->l;
  for (std::size_t len = 1; len <= std::min(l, m); ++len) {
    for (std::size_t i = 0; i + len <= m; ++i) {
      std::size_t j = i + len - 1;
      auto mod = interval_module(alg, i, j, nakayama_interval_name(m, l, i, j));
      if (!is_indecomposable(mod)) throw Error("internal: interval module is decomposable");
      out.push_back(std::move(mod));
    }
  }
  return out;
}

/// "P2 + S3^2": the Krull-Schmidt summands named after the catalog, sorted.
template <class F>
std::string iso_label(const Module<F>& m, const std::vector<Module<F>>& catalog) {
  if (m.total_dim() == 0) return "0";
  std::vector<std::string> parts;
  for (const auto& [s, mult] : indecompose(m, catalog)) {
    auto name = s.name().empty() ? "?" : s.name();
    parts.push_back(mult > 1 ? name + "^" + std::to_string(mult) : name);
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : " + ") + p;
  return out;
}

/// The catalog of indecomposables, empty when the algebra has none to offer.
template <class F>
std::vector<Module<F>> catalog_or_empty(const AlgebraPtr<F>& alg) {
  try {
    return list_indecomposables(alg);
  } catch (const UnsupportedEnumeration&) {
    return {};
  }
}

}  // namespace nzext
