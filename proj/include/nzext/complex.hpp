#pragma once

// Bounded cochain complexes of modules, chain maps, homotopies and cones.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nzext/module.hpp"

namespace nzext {

template <class F>
class Complex {
 public:
  /// Terms X^lo .. X^hi with diffs[k - lo] : X^k -> X^{k+1}.
  Complex(int lo, std::vector<Module<F>> terms, std::vector<Morphism<F>> diffs)
      : lo_(lo), terms_(std::move(terms)), diffs_(std::move(diffs)) {
    validate();
  }
  Complex(Trusted, int lo, std::vector<Module<F>> terms, std::vector<Morphism<F>> diffs)
      : lo_(lo), terms_(std::move(terms)), diffs_(std::move(diffs)) {}

  /// Complex with terms X^0 .. X^m from its differentials.
  static Complex from_maps(const std::vector<Morphism<F>>& diffs) {
    if (diffs.empty()) throw InputError("a complex needs at least one differential");
    std::vector<Module<F>> terms{diffs.front().source()};
    for (const auto& d : diffs) terms.push_back(d.target());
    return Complex(0, std::move(terms), diffs);
  }

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(terms_.size()) - 1; }
  std::size_t length() const { return terms_.size(); }
  const AlgebraPtr<F>& algebra() const { return terms_.front().algebra(); }
  const F& field() const { return terms_.front().field(); }

  bool in_range(int k) const { return k >= lo_ && k <= hi(); }
  /// X^k, the zero module outside the range.
  Module<F> at(int k) const { return in_range(k) ? terms_[k - lo_] : Module<F>::zero(algebra()); }
  const Module<F>& term(int k) const { return terms_.at(k - lo_); }
  const std::vector<Module<F>>& terms() const { return terms_; }
  const std::vector<Morphism<F>>& diffs() const { return diffs_; }

  /// d^k : X^k -> X^{k+1}, zero outside the range.
  Morphism<F> d(int k) const {
    if (k >= lo_ && k < hi()) return diffs_[k - lo_];
    return Morphism<F>::zero(at(k), at(k + 1));
  }

  Complex shifted_to(int lo) const { return Complex(Trusted{}, lo, terms_, diffs_); }

  /// Index of the first term where cohomology is nonzero (ends count as bordered by zeros).
  std::optional<int> first_non_exact() const {
    for (int k = lo_; k <= hi(); ++k) {
      std::size_t ker = term(k).total_dim() - d(k).rank();
      std::size_t im = k > lo_ ? d(k - 1).rank() : 0;
      if (ker != im) return k;
    }
    return std::nullopt;
  }
  bool is_exact() const { return !first_non_exact().has_value(); }

  /// Dimension of H^k.
  std::size_t cohomology_dim(int k) const {
    std::size_t ker = at(k).total_dim() - d(k).rank();
    return ker - d(k - 1).rank();
  }

  friend bool operator==(const Complex& a, const Complex& b) {
    return a.lo_ == b.lo_ && a.terms_ == b.terms_ && a.diffs_ == b.diffs_;
  }

 private:
  void validate() const {
    if (terms_.empty()) throw InputError("empty complex");
    if (diffs_.size() + 1 != terms_.size()) throw InputError("a complex needs one differential between consecutive terms");
    for (std::size_t i = 0; i < diffs_.size(); ++i) {
      if (!(diffs_[i].source() == terms_[i]) || !(diffs_[i].target() == terms_[i + 1])) {
        throw InputError("differential " + std::to_string(lo_ + static_cast<int>(i)) + " does not match the terms");
      }
      if (i + 1 < diffs_.size() && !(diffs_[i + 1] * diffs_[i]).is_zero()) {
        throw NotAnExtension("consecutive differentials do not compose to zero", lo_ + static_cast<int>(i) + 1);
      }
    }
  }

  int lo_;
  std::vector<Module<F>> terms_;
  std::vector<Morphism<F>> diffs_;
};

/// Degree-preserving chain map between complexes on the same index range.
template <class F>
class ChainMap {
 public:
  ChainMap(Complex<F> source, Complex<F> target, std::vector<Morphism<F>> comps)
      : src_(std::move(source)), tgt_(std::move(target)), comps_(std::move(comps)) {
    if (src_.lo() != tgt_.lo() || src_.hi() != tgt_.hi()) throw DimensionMismatch("chain map between complexes of different ranges");
    if (comps_.size() != src_.length()) throw DimensionMismatch("chain map needs one component per degree");
    for (int k = src_.lo(); k <= src_.hi(); ++k) {
      const auto& c = at(k);
      if (!(c.source() == src_.term(k)) || !(c.target() == tgt_.term(k))) throw DimensionMismatch("chain map component mismatch");
      if (k < src_.hi() && !(tgt_.d(k) * c == at(k + 1) * src_.d(k))) {
        throw InvalidModule("chain map square at degree " + std::to_string(k) + " does not commute");
      }
    }
  }

  static ChainMap identity(const Complex<F>& x) {
    std::vector<Morphism<F>> c;
    for (const auto& t : x.terms()) c.push_back(Morphism<F>::identity(t));
    return ChainMap(x, x, std::move(c));
  }

  const Complex<F>& source() const { return src_; }
  const Complex<F>& target() const { return tgt_; }
  const Morphism<F>& at(int k) const { return comps_.at(k - src_.lo()); }
  const std::vector<Morphism<F>>& components() const { return comps_; }

  friend ChainMap operator*(const ChainMap& g, const ChainMap& f) {
    std::vector<Morphism<F>> c;
    for (std::size_t i = 0; i < f.comps_.size(); ++i) c.push_back(g.comps_[i] * f.comps_[i]);
    return ChainMap(f.src_, g.tgt_, std::move(c));
  }

 private:
  Complex<F> src_, tgt_;
  std::vector<Morphism<F>> comps_;
};

/// Maps s^k : X^k -> Y^{k-1} with f - g = d s + s d.
template <class F>
struct Homotopy {
  std::vector<Morphism<F>> components;  // indexed by k - lo, s^lo is zero
};

/// f - g = d_Y s + s d_X at every degree.
template <class F>
bool is_homotopy(const ChainMap<F>& f, const ChainMap<F>& g, const Homotopy<F>& s) {
  const auto& x = f.source();
  const auto& y = f.target();
  auto comp = [&](int k) {
    if (k < x.lo() || k > x.hi()) return Morphism<F>::zero(x.at(k), y.at(k - 1));
    return s.components.at(k - x.lo());
  };
  for (int k = x.lo(); k <= x.hi(); ++k) {
    auto lhs = f.at(k) - g.at(k);
    auto rhs = y.d(k - 1) * comp(k) + comp(k + 1) * x.d(k);
    if (!(lhs == rhs)) return false;
  }
  return true;
}

/// C^k = X^{k+1} + Y^k for lo-1 <= k <= hi, entering with X^lo and leaving with Y^hi:
/// d_C^k = [[-d_X^{k+1}, 0], [f^{k+1}, d_Y^k]].
template <class F>
Complex<F> mapping_cone(const ChainMap<F>& f) {
  const auto& x = f.source();
  const auto& y = f.target();
  const auto& alg = x.algebra();
  int lo = x.lo(), hi = x.hi();
  if (lo == hi) return Complex<F>(lo - 1, {x.term(lo), y.term(hi)}, {f.at(lo)});
  std::vector<DirectSum<F>> mids;
  for (int k = lo; k < hi; ++k) mids.push_back(direct_sum(alg, {x.term(k + 1), y.term(k)}));
  std::vector<Module<F>> terms{x.term(lo)};
  for (const auto& m : mids) terms.push_back(m.object);
  terms.push_back(y.term(hi));
  std::vector<Morphism<F>> diffs;
  auto mid = [&](int k) -> const DirectSum<F>& { return mids[k - lo]; };
  // d_C^{lo-1} = (-d_X^lo ; f^lo)
  diffs.push_back(mid(lo).injections[0] * (-x.d(lo)) + mid(lo).injections[1] * f.at(lo));
  for (int k = lo; k + 1 < hi; ++k) {
    const auto& s = mid(k);
    const auto& t = mid(k + 1);
    diffs.push_back(t.injections[0] * (-x.d(k + 1)) * s.projections[0] + t.injections[1] * f.at(k + 1) * s.projections[0] +
                    t.injections[1] * y.d(k) * s.projections[1]);
  }
  // d_C^{hi-1} = (f^hi, d_Y^{hi-1})
  const auto& last = mid(hi - 1);
  diffs.push_back(f.at(hi) * last.projections[0] + y.d(hi - 1) * last.projections[1]);
  return Complex<F>(lo - 1, std::move(terms), std::move(diffs));
}

/// Termwise direct sum of two complexes on the same range.
template <class F>
Complex<F> direct_sum(const Complex<F>& a, const Complex<F>& b) {
  if (a.lo() != b.lo() || a.hi() != b.hi()) throw DimensionMismatch("direct sum of complexes of different ranges");
  std::vector<DirectSum<F>> sums;
  std::vector<Module<F>> terms;
  for (int k = a.lo(); k <= a.hi(); ++k) {
    sums.push_back(direct_sum(a.algebra(), {a.term(k), b.term(k)}));
    terms.push_back(sums.back().object);
  }
  std::vector<Morphism<F>> diffs;
  for (int k = a.lo(); k < a.hi(); ++k) {
    const auto& s = sums[k - a.lo()];
    const auto& t = sums[k + 1 - a.lo()];
    diffs.push_back(t.injections[0] * a.d(k) * s.projections[0] + t.injections[1] * b.d(k) * s.projections[1]);
  }
  return Complex<F>(Trusted{}, a.lo(), std::move(terms), std::move(diffs));
}

/// Vector-space dual: a complex over the opposite algebra, reindexed so that
/// degree k becomes degree lo + hi - k.
template <class F>
Complex<F> dual(const Complex<F>& x) {
  std::vector<Module<F>> terms;
  std::vector<Morphism<F>> diffs;
  for (int k = x.hi(); k >= x.lo(); --k) terms.push_back(dual(x.term(k)));
  for (int k = x.hi() - 1; k >= x.lo(); --k) diffs.push_back(dual(x.d(k)));
  return Complex<F>(Trusted{}, x.lo(), std::move(terms), std::move(diffs));
}

/// Dual of f : X -> Y, a chain map D(Y) -> D(X).
template <class F>
ChainMap<F> dual(const ChainMap<F>& f) {
  std::vector<Morphism<F>> comps;
  for (int k = f.source().hi(); k >= f.source().lo(); --k) comps.push_back(dual(f.at(k)));
  return ChainMap<F>(dual(f.target()), dual(f.source()), std::move(comps));
}

}  // namespace nzext
