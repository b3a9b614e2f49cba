#pragma once

// Linear systems whose unknowns are morphisms ranging over Hom spaces.
//
// Every equation has the shape  sum_t c_t * L_t . U_t . R_t  =  rhs,
// with U_t an unknown expanded in a Hom basis and L_t, R_t fixed morphisms.

#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "nzext/module.hpp"

namespace nzext {

template <class F>
class MorphismSystem {
 public:
  using Scalar = typename F::value_type;

  struct Term {
    std::size_t unknown;
    std::optional<Morphism<F>> left;   // applied after the unknown
    std::optional<Morphism<F>> right;  // applied before the unknown
    Scalar coef;
  };

  explicit MorphismSystem(F field) : field_(std::move(field)) {}

  std::size_t add_unknown(const Module<F>& src, const Module<F>& tgt) {
    return add_unknown(src, tgt, hom_basis(src, tgt));
  }
  /// Unknown restricted to the span of the given morphisms.
  std::size_t add_unknown(const Module<F>& src, const Module<F>& tgt, std::vector<Morphism<F>> basis) {
    unknowns_.push_back({src, tgt, std::move(basis), offset_});
    offset_ += unknowns_.back().basis.size();
    return unknowns_.size() - 1;
  }

  Term term(std::size_t u) const { return Term{u, std::nullopt, std::nullopt, field_.one()}; }
  Term term(std::size_t u, std::optional<Morphism<F>> left, std::optional<Morphism<F>> right) const {
    return Term{u, std::move(left), std::move(right), field_.one()};
  }
  Term negated(Term t) const {
    t.coef = field_.neg(t.coef);
    return t;
  }

  void add_equation(std::vector<Term> terms, Morphism<F> rhs) {
    equations_.push_back({std::move(terms), std::move(rhs)});
  }

  /// unknown = fixed value.
  void fix(std::size_t u, const Morphism<F>& value) { add_equation({term(u)}, value); }

  std::size_t parameter_count() const { return offset_; }
  const Module<F>& unknown_source(std::size_t u) const { return unknowns_[u].src; }
  const Module<F>& unknown_target(std::size_t u) const { return unknowns_[u].tgt; }

  struct Space {
    Vector<F> particular;
    std::vector<Vector<F>> directions;
  };

  /// The affine space of coefficient vectors solving the system, or nullopt when inconsistent.
  std::optional<Space> solution_space() const {
    auto [a, b] = assemble_matrix();
    auto x = solve(a, b);
    if (!x) return std::nullopt;
    return Space{std::move(*x), nullspace_basis(a)};
  }

  /// Morphisms for each unknown from a coefficient vector.
  std::vector<Morphism<F>> evaluate(const Vector<F>& coeffs) const {
    std::vector<Morphism<F>> out;
    for (const auto& u : unknowns_) {
      Morphism<F> m = Morphism<F>::zero(u.src, u.tgt);
      for (std::size_t j = 0; j < u.basis.size(); ++j) {
        const auto& c = coeffs[u.offset + j];
        if (!field_.is_zero(c)) m = m + u.basis[j].scaled(c);
      }
      out.push_back(std::move(m));
    }
    return out;
  }

  /// Deterministic solution (free parameters zero).
  std::optional<std::vector<Morphism<F>>> solve_system() const {
    auto s = solution_space();
    if (!s) return std::nullopt;
    return evaluate(s->particular);
  }

  /// A pseudo-random point of the solution space.
  static Vector<F> random_point(const F& f, const Space& s, std::mt19937_64& rng) {
    Vector<F> x = s.particular;
    for (const auto& d : s.directions) {
      typename F::value_type c;
      if constexpr (std::is_same_v<F, PrimeField>) {
        c = static_cast<typename F::value_type>(rng() % f.characteristic());
      } else {
        c = f.from_int(static_cast<std::int64_t>(rng() % 11) - 5);
      }
      if (f.is_zero(c)) continue;
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = f.add(x[i], f.mul(c, d[i]));
    }
    return x;
  }

 private:
  struct Unknown {
    Module<F> src, tgt;
    std::vector<Morphism<F>> basis;
    std::size_t offset;
  };
  struct Equation {
    std::vector<Term> terms;
    Morphism<F> rhs;
  };

  std::pair<Matrix<F>, Vector<F>> assemble_matrix() const {
    std::size_t rows = 0;
    for (const auto& e : equations_) rows += e.rhs.flatten().size();
    Matrix<F> a(field_, rows, offset_);
    Vector<F> b(rows, field_.zero());
    std::size_t r0 = 0;
    for (const auto& e : equations_) {
      auto rhs = e.rhs.flatten();
      for (std::size_t i = 0; i < rhs.size(); ++i) b[r0 + i] = rhs[i];
      for (const auto& t : e.terms) {
        const auto& u = unknowns_[t.unknown];
        for (std::size_t j = 0; j < u.basis.size(); ++j) {
          Morphism<F> m = u.basis[j];
          if (t.right) m = m * *t.right;
          if (t.left) m = *t.left * m;
          if (!(m.source() == e.rhs.source()) || !(m.target() == e.rhs.target())) {
            throw DimensionMismatch("equation term does not match the right-hand side");
          }
          auto col = m.flatten();
          for (std::size_t i = 0; i < col.size(); ++i) {
            if (field_.is_zero(col[i])) continue;
            auto& slot = a(r0 + i, u.offset + j);
            slot = field_.add(slot, field_.mul(t.coef, col[i]));
          }
        }
      }
      r0 += rhs.size();
    }
    return {std::move(a), std::move(b)};
  }

  F field_;
  std::vector<Unknown> unknowns_;
  std::vector<Equation> equations_;
  std::size_t offset_ = 0;
};

}  // namespace nzext
