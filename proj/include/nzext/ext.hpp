#pragma once

// Ext groups as cohomology of Hom(P(X), Y), Yoneda classes of extensions,
// splicing, induced maps, long exact sequences of short exact sequences and
// the pushout / pullback calculus of extensions.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "nzext/complex.hpp"
#include "nzext/resolution.hpp"

namespace nzext {

/// Matrix of  Hom(P_k, Y) -> Hom(P_{k+1}, Y),  f |-> f d_{k+1}, in generator coordinates.
template <class F>
Matrix<F> cochain_differential(const Resolution<F>& r, std::size_t k, const Module<F>& y) {
  const auto& alg = *r.module.algebra();
  const F& f = alg.field();
  auto from = r.term(k + 1);
  auto to = r.term(k);
  auto d = r.d(k + 1);
  std::vector<std::size_t> row_off, col_off;
  std::size_t rows = 0, cols = 0;
  for (auto v : from.vertices) {
    row_off.push_back(rows);
    rows += y.dim(v);
  }
  for (auto v : to.vertices) {
    col_off.push_back(cols);
    cols += y.dim(v);
  }
  Matrix<F> out(f, rows, cols);
  for (std::size_t t = 0; t < from.generators(); ++t) {
    std::size_t vt = from.vertices[t];
    auto image = generator_image(from, d, t);  // element of (P_k)_{v_t}
    for (std::size_t s = 0; s < to.generators(); ++s) {
      std::size_t vs = to.vertices[s];
      Matrix<F> block(f, y.dim(vt), y.dim(vs));
      for (auto b : alg.paths_between(vs, vt)) {
        const auto& c = image[to.offset[s][vt] + alg.local_index(b)];
        if (f.is_zero(c)) continue;
        block = block + y.act_basis(b).scaled(c);
      }
      out.set_block(row_off[t], col_off[s], block);
    }
  }
  return out;
}

/// Ext^k(X, Y) with a stored basis of cocycle representatives.
template <class F>
class ExtGroup {
 public:
  ExtGroup(std::size_t k, Module<F> x, Module<F> y, std::shared_ptr<const Resolution<F>> res)
      : k_(k), x_(std::move(x)), y_(std::move(y)), res_(std::move(res)), b_(y_.field(), 0, 0), h_(y_.field(), 0, 0), bh_(y_.field(), 0, 0) {
    x_.require_same_algebra(y_);
    const F& f = y_.field();
    auto delta = cochain_differential(*res_, k_, y_);
    cochain_dim_ = delta.cols();
    auto z = nullspace_matrix(delta);
    if (k_ == 0) {
      b_ = Matrix<F>(f, cochain_dim_, 0);
    } else {
      b_ = column_space(cochain_differential(*res_, k_ - 1, y_));
    }
    auto e = rref(hstack(b_, z));
    std::vector<Vector<F>> reps;
    for (auto piv : e.pivots)
      if (piv >= b_.cols()) reps.push_back(z.column(piv - b_.cols()));
    h_ = Matrix<F>::from_columns(f, cochain_dim_, reps);
    bh_ = hstack(b_, h_);
  }

  std::size_t degree() const { return k_; }
  const Module<F>& source() const { return x_; }
  const Module<F>& target() const { return y_; }
  const F& field() const { return y_.field(); }
  std::size_t dim() const { return h_.cols(); }
  const std::shared_ptr<const Resolution<F>>& resolution() const { return res_; }
  ProjectiveSum<F> cochain_domain() const { return res_->term(k_); }
  std::size_t cochain_dim() const { return cochain_dim_; }

  bool is_cocycle(const Vector<F>& c) const {
    auto delta = cochain_differential(*res_, k_, y_);
    for (const auto& x : delta.apply(c))
      if (!field().is_zero(x)) return false;
    return true;
  }

  /// Coordinates of the class of a cocycle (generator images of P_k -> Y).
  Vector<F> coordinates(const Vector<F>& cocycle) const {
    auto x = solve(bh_, cocycle);
    if (!x) throw Error("internal: vector is not a cocycle");
    return Vector<F>(x->begin() + static_cast<std::ptrdiff_t>(b_.cols()), x->end());
  }
  Vector<F> coordinates(const Morphism<F>& cocycle) const { return coordinates(generator_vector(cochain_domain(), cocycle)); }

  /// Representative cocycle of the class with these coordinates.
  Vector<F> cocycle(const Vector<F>& coords) const { return h_.apply(coords); }
  Morphism<F> cocycle_morphism(const Vector<F>& coords) const {
    return from_generator_vector(cochain_domain(), y_, cocycle(coords));
  }

 private:
  std::size_t k_;
  Module<F> x_, y_;
  std::shared_ptr<const Resolution<F>> res_;
  Matrix<F> b_, h_, bh_;
  std::size_t cochain_dim_ = 0;
};

template <class F>
using ExtGroupPtr = std::shared_ptr<const ExtGroup<F>>;

namespace detail {

template <class F>
class ExtCache {
 public:
  static ExtCache& instance() {
    static ExtCache c;
    return c;
  }
  ExtGroupPtr<F> get(std::size_t k, const Module<F>& x, const Module<F>& y) {
    auto key = std::to_string(k) + "#" + module_key(x) + "#" + module_key(y);
    {
      std::shared_lock lock(mutex_);
      auto it = entries_.find(key);
      if (it != entries_.end()) return it->second;
    }
    auto g = std::make_shared<const ExtGroup<F>>(k, x, y, projective_resolution(x, k + 1));
    std::unique_lock lock(mutex_);
    if (entries_.size() > 100000) entries_.clear();
    return entries_.emplace(key, g).first->second;
  }
  void clear() {
    std::unique_lock lock(mutex_);
    entries_.clear();
  }

 private:
  std::shared_mutex mutex_;
  std::map<std::string, ExtGroupPtr<F>> entries_;
};

}  // namespace detail

template <class F>
ExtGroupPtr<F> ext_group(std::size_t k, const Module<F>& x, const Module<F>& y) {
  x.require_same_algebra(y);
  return detail::ExtCache<F>::instance().get(k, x, y);
}

template <class F>
std::size_t ext_dim(std::size_t k, const Module<F>& x, const Module<F>& y) {
  return ext_group(k, x, y)->dim();
}

/// Element of an Ext group in the group's stored basis.
template <class F>
struct ExtClass {
  ExtGroupPtr<F> group;
  Vector<F> coords;

  static ExtClass zero(ExtGroupPtr<F> g) { return {g, Vector<F>(g->dim(), g->field().zero())}; }
  static ExtClass basis(ExtGroupPtr<F> g, std::size_t i) {
    auto c = zero(g);
    c.coords.at(i) = g->field().one();
    return c;
  }

  std::size_t degree() const { return group->degree(); }
  bool is_zero() const {
    for (const auto& x : coords)
      if (!group->field().is_zero(x)) return false;
    return true;
  }
  Morphism<F> cocycle() const { return group->cocycle_morphism(coords); }

  void require_same_group(const ExtClass& o) const {
    if (!same_group(*group, *o.group)) throw DimensionMismatch("Ext classes live in different groups");
  }
  static bool same_group(const ExtGroup<F>& a, const ExtGroup<F>& b) {
    return &a == &b || (a.degree() == b.degree() && a.source() == b.source() && a.target() == b.target());
  }

  friend ExtClass operator+(const ExtClass& a, const ExtClass& b) {
    a.require_same_group(b);
    ExtClass c = a;
    for (std::size_t i = 0; i < c.coords.size(); ++i) c.coords[i] = a.group->field().add(a.coords[i], b.coords[i]);
    return c;
  }
  ExtClass scaled(const typename F::value_type& s) const {
    ExtClass c = *this;
    for (auto& x : c.coords) x = group->field().mul(s, x);
    return c;
  }
  ExtClass operator-() const { return scaled(group->field().neg(group->field().one())); }
  friend ExtClass operator-(const ExtClass& a, const ExtClass& b) { return a + (-b); }
  friend bool operator==(const ExtClass& a, const ExtClass& b) {
    if (!same_group(*a.group, *b.group)) return false;
    for (std::size_t i = 0; i < a.coords.size(); ++i)
      if (!a.group->field().eq(a.coords[i], b.coords[i])) return false;
    return true;
  }
};

/// The class of a morphism f : X -> Y in Ext^0(X, Y).
template <class F>
ExtClass<F> hom_class(const Morphism<F>& f) {
  auto g = ext_group(0, f.source(), f.target());
  const auto& r = *g->resolution();
  return {g, g->coordinates(f * r.augmentation)};
}

/// The morphism X -> Y represented by a class of Ext^0(X, Y).
template <class F>
Morphism<F> hom_of_class(const ExtClass<F>& c) {
  if (c.degree() != 0) throw DimensionMismatch("only degree-0 classes are morphisms");
  const auto& r = *c.group->resolution();
  return factor_through_epi(c.cocycle(), r.augmentation);
}

/// Chain map  phi_m : P_{shift+m}(src) -> P_m(tgt)  for m = 0..count-1 lifting alpha : P_shift(src) -> tgt.
template <class F>
std::vector<Morphism<F>> lift_to_resolutions(const Resolution<F>& src, std::size_t shift, const Morphism<F>& alpha,
                                             const Resolution<F>& tgt, std::size_t count) {
  std::vector<Morphism<F>> out;
  if (count == 0) return out;
  out.push_back(lift_through(src.term(shift), alpha, tgt.augmentation));
  for (std::size_t m = 1; m < count; ++m) {
    auto g = out.back() * src.d(shift + m);
    out.push_back(lift_through(src.term(shift + m), g, tgt.d(m)));
  }
  return out;
}

/// Yoneda product: a in Ext^i(C, B), b in Ext^j(B, A)  |->  Ext^{i+j}(C, A).
template <class F>
ExtClass<F> splice(const ExtClass<F>& a, const ExtClass<F>& b) {
  if (!(a.group->target() == b.group->source())) throw DimensionMismatch("splice: middle modules differ");
  std::size_t i = a.degree(), j = b.degree();
  const auto& c = a.group->source();
  const auto& bmod = b.group->source();
  const auto& amod = b.group->target();
  auto out = ext_group(i + j, c, amod);
  auto rc = projective_resolution(c, i + j + 1);
  auto rb = projective_resolution(bmod, j + 1);
  auto lifts = lift_to_resolutions(*rc, i, a.cocycle(), *rb, j + 1);
  auto prod = b.cocycle() * lifts[j];
  return {out, out->coordinates(generator_vector(rc->term(i + j), prod))};
}

/// Ext^k(X, Y) -> Ext^k(X, Y') induced by psi : Y -> Y'.
template <class F>
ExtClass<F> push_forward(const Morphism<F>& psi, const ExtClass<F>& c) {
  auto g = ext_group(c.degree(), c.group->source(), psi.target());
  return {g, g->coordinates(generator_vector(c.group->cochain_domain(), psi * c.cocycle()))};
}

/// Ext^k(X, Y) -> Ext^k(X', Y) induced by phi : X' -> X.
template <class F>
ExtClass<F> pull_back(const Morphism<F>& phi, const ExtClass<F>& c) {
  return splice(hom_class(phi), c);
}

/// Matrix of a linear map between Ext groups given on basis vectors.
template <class F, class Fn>
Matrix<F> induced_matrix(const ExtGroupPtr<F>& from, const ExtGroupPtr<F>& to, Fn&& fn) {
  Matrix<F> m(from->field(), to->dim(), from->dim());
  for (std::size_t j = 0; j < from->dim(); ++j) {
    ExtClass<F> img = fn(ExtClass<F>::basis(from, j));
    if (!ExtClass<F>::same_group(*img.group, *to)) throw Error("internal: induced map lands in the wrong group");
    for (std::size_t i = 0; i < to->dim(); ++i) m(i, j) = img.coords[i];
  }
  return m;
}

// ---------------------------------------------------------------------------
// Extensions as exact complexes  0 -> A -> E^1 -> ... -> E^k -> C -> 0

template <class F>
void require_extension(const Complex<F>& x) {
  if (x.length() < 3) throw NotAnExtension("an extension needs at least one middle term", x.lo());
  if (auto bad = x.first_non_exact()) throw NotAnExtension("complex is not exact at degree " + std::to_string(*bad), *bad);
}

/// Yoneda class of an exact complex in Ext^k(C, A), k = number of middle terms.
template <class F>
ExtClass<F> class_of_extension(const Complex<F>& x) {
  require_extension(x);
  std::size_t k = x.length() - 2;
  const auto& a = x.term(x.lo());
  const auto& c = x.term(x.hi());
  auto res = projective_resolution(c, k + 1);
  // phi_j : P_j -> X^{hi-1-j} lifting the identity of C.
  Morphism<F> phi = lift_through(res->term(0), res->augmentation, x.d(x.hi() - 1));
  for (std::size_t j = 1; j <= k; ++j) {
    auto g = phi * res->d(j);
    phi = lift_through(res->term(j), g, x.d(x.hi() - 1 - static_cast<int>(j)));
  }
  auto grp = ext_group(k, c, a);
  return {grp, grp->coordinates(generator_vector(res->term(k), phi))};
}

/// Pushout of an extension along phi : A -> A'.
template <class F>
Complex<F> pushout_extension(const Complex<F>& x, const Morphism<F>& phi) {
  require_extension(x);
  int lo = x.lo();
  if (!(phi.source() == x.term(lo))) throw DimensionMismatch("pushout: morphism does not start at the left end");
  const auto& alg = x.algebra();
  auto e1 = x.term(lo + 1);
  auto sum = direct_sum(alg, {e1, phi.target()});
  auto into = sum.injections[0] * x.d(lo) - sum.injections[1] * phi;
  auto q = cokernel(into);
  std::vector<Module<F>> terms{phi.target(), q.object};
  std::vector<Morphism<F>> diffs{q.projection * sum.injections[1]};
  // E' -> E^2 induced by (d^1, 0).
  auto next = x.d(lo + 1) * sum.projections[0];
  diffs.push_back(factor_through_epi(next, q.projection));
  for (int k = lo + 2; k <= x.hi(); ++k) terms.push_back(x.term(k));
  for (int k = lo + 2; k < x.hi(); ++k) diffs.push_back(x.d(k));
  return Complex<F>(lo, std::move(terms), std::move(diffs));
}

/// Pullback of an extension along psi : C' -> C.
template <class F>
Complex<F> pullback_extension(const Complex<F>& x, const Morphism<F>& psi) {
  require_extension(x);
  int hi = x.hi();
  if (!(psi.target() == x.term(hi))) throw DimensionMismatch("pullback: morphism does not end at the right end");
  const auto& alg = x.algebra();
  auto ek = x.term(hi - 1);
  auto sum = direct_sum(alg, {ek, psi.source()});
  auto out = x.d(hi - 1) * sum.projections[0] - psi * sum.projections[1];
  auto kr = kernel(out);
  std::vector<Module<F>> terms;
  std::vector<Morphism<F>> diffs;
  for (int k = x.lo(); k <= hi - 2; ++k) terms.push_back(x.term(k));
  for (int k = x.lo(); k < hi - 2; ++k) diffs.push_back(x.d(k));
  // E^{k-1} -> E' induced by (d^{k-1}, 0).
  auto prev = sum.injections[0] * x.d(hi - 2);
  diffs.push_back(factor_through_mono(prev, kr.inclusion));
  terms.push_back(kr.object);
  terms.push_back(psi.source());
  diffs.push_back(sum.projections[1] * kr.inclusion);
  return Complex<F>(x.lo(), std::move(terms), std::move(diffs));
}

/// An exact complex with the given class: pushout of  0 -> Omega^m -> P_{m-1} -> ... -> P_0 -> C -> 0.
template <class F>
Complex<F> realize_extension(const ExtClass<F>& c) {
  std::size_t m = c.degree();
  if (m == 0) throw InputError("degree-0 classes are morphisms, not extensions");
  const auto& res = *c.group->resolution();
  auto omega = res.syzygy(m);
  auto incl = m < res.syzygy_incl.size() ? res.syzygy_incl[m] : Morphism<F>::zero(omega, res.term(m - 1).module);
  std::vector<Module<F>> terms{omega};
  std::vector<Morphism<F>> diffs{incl};
  for (std::size_t k = m; k-- > 0;) {
    terms.push_back(res.term(k).module);
    diffs.push_back(k > 0 ? res.d(k) : res.augmentation);
  }
  terms.push_back(res.module);
  Complex<F> base(0, std::move(terms), std::move(diffs));
  auto epi = m < res.syzygy_epi.size() ? res.syzygy_epi[m] : Morphism<F>::zero(res.term(m).module, omega);
  auto phi = factor_through_epi(c.cocycle(), epi);
  return pushout_extension(base, phi);
}

/// A -> B -> C short exact, as a three-term complex.
template <class F>
Complex<F> short_exact(const Morphism<F>& f, const Morphism<F>& g) {
  Complex<F> s(0, {f.source(), f.target(), g.target()}, {f, g});
  require_extension(s);
  return s;
}

/// Yoneda composite of  B -> ... -> C  (a) with  A -> ... -> B  (b): A -> ... -> C.
template <class F>
Complex<F> splice_complexes(const Complex<F>& a, const Complex<F>& b) {
  if (!(a.term(a.lo()) == b.term(b.hi()))) throw DimensionMismatch("splice: middle modules differ");
  if (a.length() < 3 || b.length() < 3) throw NotAnExtension("splice needs extensions with middle terms", a.lo());
  std::vector<Module<F>> terms;
  std::vector<Morphism<F>> diffs;
  for (int k = b.lo(); k < b.hi(); ++k) terms.push_back(b.term(k));
  for (int k = b.lo(); k + 1 < b.hi(); ++k) diffs.push_back(b.d(k));
  diffs.push_back(a.d(a.lo()) * b.d(b.hi() - 1));
  for (int k = a.lo() + 1; k <= a.hi(); ++k) terms.push_back(a.term(k));
  for (int k = a.lo() + 1; k < a.hi(); ++k) diffs.push_back(a.d(k));
  return Complex<F>(b.lo(), std::move(terms), std::move(diffs));
}

// ---------------------------------------------------------------------------
// Long exact sequences

template <class F>
struct LongExactSequence {
  std::vector<std::string> labels;
  std::vector<ExtGroupPtr<F>> groups;
  std::vector<Matrix<F>> maps;  // maps[i] : node i -> node i+1

  std::size_t size() const { return groups.size(); }
  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (const auto& g : groups) d.push_back(g->dim());
    return d;
  }
  std::vector<std::size_t> ranks() const {
    std::vector<std::size_t> r;
    for (const auto& m : maps) r.push_back(rank(m));
    return r;
  }
  /// Exactness at node i: the image of the incoming map equals the kernel of the outgoing one.
  /// Node 0 is preceded by zero; the last node has no outgoing map and is not checked.
  bool exact_at(std::size_t i) const {
    if (i + 1 >= groups.size()) return true;
    std::size_t in = i == 0 ? 0 : rank(maps[i - 1]);
    if (i > 0 && !(maps[i] * maps[i - 1]).is_zero()) return false;
    return in + rank(maps[i]) == groups[i]->dim();
  }
  std::optional<std::size_t> first_failure() const {
    for (std::size_t i = 0; i + 1 < groups.size(); ++i)
      if (!exact_at(i)) return i;
    return std::nullopt;
  }
  bool is_exact() const { return !first_failure().has_value(); }
};

enum class Variance { Covariant, Contravariant };

/// LES of Ext(X, -) (covariant) or Ext(-, X) (contravariant) applied to 0 -> A -> B -> C -> 0,
/// through degree `depth`, ending with the first group of degree depth + 1.
/// Connecting maps are splices with the class of s.
template <class F>
LongExactSequence<F> les_short_exact(const Complex<F>& s, const Module<F>& x, Variance variance, std::size_t depth) {
  if (s.length() != 3) throw InputError("les_short_exact needs a three-term complex");
  require_extension(s);
  int lo = s.lo();
  const auto& a = s.term(lo);
  const auto& b = s.term(lo + 1);
  const auto& c = s.term(lo + 2);
  auto f = s.d(lo), g = s.d(lo + 1);
  auto cls = class_of_extension(s);
  LongExactSequence<F> les;
  auto add = [&](ExtGroupPtr<F> grp, std::string label) {
    les.groups.push_back(std::move(grp));
    les.labels.push_back(std::move(label));
  };
  auto deg = [](std::size_t m) { return std::to_string(m); };
  for (std::size_t m = 0; m <= depth; ++m) {
    if (variance == Variance::Covariant) {
      auto ga = ext_group(m, x, a), gb = ext_group(m, x, b), gc = ext_group(m, x, c);
      auto next = ext_group(m + 1, x, a);
      add(ga, "Ext" + deg(m) + "(X,A)");
      add(gb, "Ext" + deg(m) + "(X,B)");
      add(gc, "Ext" + deg(m) + "(X,C)");
      les.maps.push_back(induced_matrix(ga, gb, [&](const ExtClass<F>& e) { return push_forward(f, e); }));
      les.maps.push_back(induced_matrix(gb, gc, [&](const ExtClass<F>& e) { return push_forward(g, e); }));
      les.maps.push_back(induced_matrix(gc, next, [&](const ExtClass<F>& e) { return splice(e, cls); }));
    } else {
      auto gc = ext_group(m, c, x), gb = ext_group(m, b, x), ga = ext_group(m, a, x);
      auto next = ext_group(m + 1, c, x);
      add(gc, "Ext" + deg(m) + "(C,X)");
      add(gb, "Ext" + deg(m) + "(B,X)");
      add(ga, "Ext" + deg(m) + "(A,X)");
      les.maps.push_back(induced_matrix(gc, gb, [&](const ExtClass<F>& e) { return pull_back(g, e); }));
      les.maps.push_back(induced_matrix(gb, ga, [&](const ExtClass<F>& e) { return pull_back(f, e); }));
      les.maps.push_back(induced_matrix(ga, next, [&](const ExtClass<F>& e) { return splice(cls, e); }));
    }
  }
  if (variance == Variance::Covariant) {
    add(ext_group(depth + 1, x, a), "Ext" + deg(depth + 1) + "(X,A)");
  } else {
    add(ext_group(depth + 1, c, x), "Ext" + deg(depth + 1) + "(C,X)");
  }
  return les;
}

}  // namespace nzext
