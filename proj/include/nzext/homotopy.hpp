#pragma once

// Homotopy equivalence of bounded complexes by linear solving.
//
// The conditions g f ~ 1 and f g ~ 1 are bilinear in (f, g). We solve the
// linear system for the chain maps f, then for each candidate f the linear
// system in (g, s, t). Candidates are the echelon particular solution and a
// fixed number of seeded random points of the affine space of chain maps.

#include <optional>
#include <random>
#include <vector>

#include "nzext/complex.hpp"
#include "nzext/linsys.hpp"

namespace nzext {

inline constexpr int kHomotopyTrials = 48;

template <class F>
struct HomotopyEquivalence {
  ChainMap<F> forward;   // f : X -> Y
  ChainMap<F> backward;  // g : Y -> X
  Homotopy<F> on_source;  // g f - 1 = d s + s d
  Homotopy<F> on_target;  // f g - 1 = d t + t d
};

namespace detail {

template <class F>
void require_same_range(const Complex<F>& x, const Complex<F>& y) {
  if (x.lo() != y.lo() || x.hi() != y.hi()) throw DimensionMismatch("complexes on different index ranges");
  x.term(x.lo()).require_same_algebra(y.term(y.lo()));
}

/// Unknowns c^k : X^k -> Y^k with d c = c d; returns the unknown ids.
template <class F>
std::vector<std::size_t> add_chain_map(MorphismSystem<F>& sys, const Complex<F>& x, const Complex<F>& y, bool fix_ends) {
  std::vector<std::size_t> ids;
  for (int k = x.lo(); k <= x.hi(); ++k) ids.push_back(sys.add_unknown(x.term(k), y.term(k)));
  for (int k = x.lo(); k < x.hi(); ++k) {
    std::size_t i = static_cast<std::size_t>(k - x.lo());
    sys.add_equation({sys.term(ids[i], y.d(k), std::nullopt), sys.negated(sys.term(ids[i + 1], std::nullopt, x.d(k)))},
                     Morphism<F>::zero(x.term(k), y.term(k + 1)));
  }
  if (fix_ends) {
    if (!(x.term(x.lo()) == y.term(y.lo())) || !(x.term(x.hi()) == y.term(y.hi()))) {
      throw InputError("fixed ends require equal end terms");
    }
    sys.fix(ids.front(), Morphism<F>::identity(x.term(x.lo())));
    sys.fix(ids.back(), Morphism<F>::identity(x.term(x.hi())));
  }
  return ids;
}

/// Unknowns h^k : X^k -> X^{k-1} for lo < k <= hi (index 0 unused).
template <class F>
std::vector<std::size_t> add_homotopy(MorphismSystem<F>& sys, const Complex<F>& x) {
  std::vector<std::size_t> ids{0};
  for (int k = x.lo() + 1; k <= x.hi(); ++k) ids.push_back(sys.add_unknown(x.term(k), x.term(k - 1)));
  return ids;
}

/// Equations  comp^k - 1 = d h^k + h^{k+1} d  with comp^k given as  a-unknown . fixed.
template <class F>
void add_homotopy_equations(MorphismSystem<F>& sys, const Complex<F>& x, const std::vector<std::size_t>& a,
                            const std::vector<Morphism<F>>& fixed, const std::vector<std::size_t>& h) {
  int lo = x.lo();
  for (int k = lo; k <= x.hi(); ++k) {
    std::size_t i = static_cast<std::size_t>(k - lo);
    std::vector<typename MorphismSystem<F>::Term> terms{sys.term(a[i], std::nullopt, fixed[i])};
    if (k > lo) terms.push_back(sys.negated(sys.term(h[i], x.d(k - 1), std::nullopt)));
    if (k < x.hi()) terms.push_back(sys.negated(sys.term(h[i + 1], std::nullopt, x.d(k))));
    sys.add_equation(std::move(terms), Morphism<F>::identity(x.term(k)));
  }
}

template <class F>
Homotopy<F> homotopy_from(const Complex<F>& x, const std::vector<Morphism<F>>& sol, const std::vector<std::size_t>& h) {
  Homotopy<F> out;
  out.components.push_back(Morphism<F>::zero(x.term(x.lo()), x.at(x.lo() - 1)));
  for (std::size_t i = 1; i < h.size(); ++i) out.components.push_back(sol[h[i]]);
  return out;
}

/// Given f, solve for (g, s, t).
template <class F>
std::optional<HomotopyEquivalence<F>> complete_equivalence(const Complex<F>& x, const Complex<F>& y, const std::vector<Morphism<F>>& f,
                                                           bool fix_ends) {
  MorphismSystem<F> sys(x.field());
  auto g = add_chain_map(sys, y, x, fix_ends);
  auto s = add_homotopy(sys, x);
  auto t = add_homotopy(sys, y);
  add_homotopy_equations(sys, x, g, f, s);
  // f g - 1 = d t + t d: the unknown g sits on the right of a fixed f.
  int lo = y.lo();
  for (int k = lo; k <= y.hi(); ++k) {
    std::size_t i = static_cast<std::size_t>(k - lo);
    std::vector<typename MorphismSystem<F>::Term> terms{sys.term(g[i], f[i], std::nullopt)};
    if (k > lo) terms.push_back(sys.negated(sys.term(t[i], y.d(k - 1), std::nullopt)));
    if (k < y.hi()) terms.push_back(sys.negated(sys.term(t[i + 1], std::nullopt, y.d(k))));
    sys.add_equation(std::move(terms), Morphism<F>::identity(y.term(k)));
  }
  auto sol = sys.solve_system();
  if (!sol) return std::nullopt;
  std::vector<Morphism<F>> gs;
  for (auto id : g) gs.push_back((*sol)[id]);
  HomotopyEquivalence<F> out{ChainMap<F>(x, y, f), ChainMap<F>(y, x, gs), homotopy_from(x, *sol, s), homotopy_from(y, *sol, t)};
  return out;
}

}  // namespace detail

/// Chain maps X -> Y as an affine space (linear when ends are free).
template <class F>
std::optional<std::vector<ChainMap<F>>> chain_map_samples(const Complex<F>& x, const Complex<F>& y, bool fix_ends, int count,
                                                          std::uint64_t seed = 0) {
  detail::require_same_range(x, y);
  MorphismSystem<F> sys(x.field());
  detail::add_chain_map(sys, x, y, fix_ends);
  auto space = sys.solution_space();
  if (!space) return std::nullopt;
  std::mt19937_64 rng(seed);
  std::vector<ChainMap<F>> out;
  for (int i = 0; i < count; ++i) {
    auto pt = i == 0 ? space->particular : MorphismSystem<F>::random_point(x.field(), *space, rng);
    out.emplace_back(x, y, sys.evaluate(pt));
  }
  return out;
}

/// Witnesses of a homotopy equivalence X ~ Y, or nullopt if none was found.
template <class F>
std::optional<HomotopyEquivalence<F>> homotopy_equivalent(const Complex<F>& x, const Complex<F>& y, bool fix_ends,
                                                          std::uint64_t seed = 0) {
  detail::require_same_range(x, y);
  auto maps = chain_map_samples(x, y, fix_ends, kHomotopyTrials, seed);
  if (!maps) return std::nullopt;
  for (const auto& f : *maps) {
    if (auto eq = detail::complete_equivalence(x, y, f.components(), fix_ends)) return eq;
  }
  return std::nullopt;
}

/// X is homotopy equivalent to zero: the identity is null-homotopic.
template <class F>
std::optional<Homotopy<F>> contracting_homotopy(const Complex<F>& x) {
  MorphismSystem<F> sys(x.field());
  auto h = detail::add_homotopy(sys, x);
  int lo = x.lo();
  for (int k = lo; k <= x.hi(); ++k) {
    std::size_t i = static_cast<std::size_t>(k - lo);
    std::vector<typename MorphismSystem<F>::Term> terms;
    if (k > lo) terms.push_back(sys.term(h[i], x.d(k - 1), std::nullopt));
    if (k < x.hi()) terms.push_back(sys.term(h[i + 1], std::nullopt, x.d(k)));
    if (terms.empty()) {
      if (!x.term(k).is_zero()) return std::nullopt;
      continue;
    }
    sys.add_equation(std::move(terms), Morphism<F>::identity(x.term(k)));
  }
  auto sol = sys.solve_system();
  if (!sol) return std::nullopt;
  return detail::homotopy_from(x, *sol, h);
}

}  // namespace nzext
