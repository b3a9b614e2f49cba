#pragma once

// Finite-dimensional representations of a bound quiver algebra and their
// morphisms. An arrow a: s -> t acts by a dims[t] x dims[s] matrix.

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nzext/algebra.hpp"
#include "nzext/errors.hpp"
#include "nzext/matrix.hpp"

namespace nzext {

template <class F>
using AlgebraPtr = std::shared_ptr<const Algebra<F>>;

/// Skip invariant checks for values produced by operations that guarantee them.
struct Trusted {};

template <class F>
class Module {
 public:
  Module(AlgebraPtr<F> alg, std::vector<std::size_t> dims, std::vector<Matrix<F>> arrows, std::string name = "")
      : d_(std::make_shared<Data>(Data{std::move(alg), std::move(dims), std::move(arrows), std::move(name)})) {
    validate();
  }
  Module(Trusted, AlgebraPtr<F> alg, std::vector<std::size_t> dims, std::vector<Matrix<F>> arrows,
         std::string name = "")
      : d_(std::make_shared<Data>(Data{std::move(alg), std::move(dims), std::move(arrows), std::move(name)})) {}

  static Module zero(const AlgebraPtr<F>& alg) {
    std::vector<Matrix<F>> arrows;
    for (std::size_t a = 0; a < alg->quiver().arrows.size(); ++a) arrows.emplace_back(alg->field(), 0, 0);
    return Module(Trusted{}, alg, std::vector<std::size_t>(alg->vertex_count(), 0), std::move(arrows), "0");
  }

  const AlgebraPtr<F>& algebra() const { return d_->alg; }
  const F& field() const { return d_->alg->field(); }
  const std::vector<std::size_t>& dims() const { return d_->dims; }
  std::size_t dim(std::size_t v) const { return d_->dims[v]; }
  std::size_t total_dim() const {
    std::size_t s = 0;
    for (auto x : d_->dims) s += x;
    return s;
  }
  bool is_zero() const { return total_dim() == 0; }
  const Matrix<F>& arrow(std::size_t a) const { return d_->arrows[a]; }
  const std::vector<Matrix<F>>& arrows() const { return d_->arrows; }
  const std::string& name() const { return d_->name; }

  Module renamed(std::string name) const {
    return Module(Trusted{}, d_->alg, d_->dims, d_->arrows, std::move(name));
  }

  /// Action of a path (traversal order) starting at `source`.
  Matrix<F> act(std::size_t source, const Path& p) const {
    Matrix<F> m = Matrix<F>::identity(field(), dim(source));
    for (auto a : p) m = arrow(a) * m;
    return m;
  }

  /// Action of the residue class of basis path b.
  Matrix<F> act_basis(std::size_t b) const {
    const auto& bp = d_->alg->basis()[b];
    return act(bp.source, bp.arrows);
  }

  /// Same algebra, dimensions and arrow matrices (bases matter).
  friend bool operator==(const Module& x, const Module& y) {
    if (x.d_ == y.d_) return true;
    return x.d_->alg == y.d_->alg && x.d_->dims == y.d_->dims && x.d_->arrows == y.d_->arrows;
  }

  void require_same_algebra(const Module& other) const {
    if (d_->alg != other.d_->alg) throw AlgebraMismatch();
  }

 private:
  struct Data {
    AlgebraPtr<F> alg;
    std::vector<std::size_t> dims;
    std::vector<Matrix<F>> arrows;
    std::string name;
  };

  void validate() const {
    const auto& alg = *d_->alg;
    const auto& q = alg.quiver();
    if (d_->dims.size() != q.vertices) throw InvalidModule("dimension vector has wrong length");
    if (d_->arrows.size() != q.arrows.size()) throw InvalidModule("wrong number of arrow matrices");
    for (std::size_t a = 0; a < q.arrows.size(); ++a) {
      const auto& m = d_->arrows[a];
      if (!(m.field() == alg.field())) throw FieldMismatch();
      if (m.rows() != d_->dims[q.arrows[a].target] || m.cols() != d_->dims[q.arrows[a].source]) {
        throw InvalidModule("arrow '" + q.arrows[a].name + "' matrix has shape " + m.shape());
      }
    }
    for (const auto& rel : alg.relations()) {
      if (rel.terms.empty()) continue;
      const auto& first = rel.terms.front().second;
      std::size_t s = q.arrows[first.front()].source, t = q.arrows[first.back()].target;
      Matrix<F> sum(alg.field(), d_->dims[t], d_->dims[s]);
      for (const auto& [c, p] : rel.terms) sum = sum + act(s, p).scaled(c);
      if (!sum.is_zero()) throw InvalidModule("arrow matrices violate a relation of the algebra");
    }
  }

  std::shared_ptr<const Data> d_;
};

template <class F>
class Morphism {
 public:
  Morphism(Module<F> source, Module<F> target, std::vector<Matrix<F>> components)
      : src_(std::move(source)), tgt_(std::move(target)), comps_(std::move(components)) {
    validate();
  }
  Morphism(Trusted, Module<F> source, Module<F> target, std::vector<Matrix<F>> components)
      : src_(std::move(source)), tgt_(std::move(target)), comps_(std::move(components)) {}

  static Morphism zero(const Module<F>& s, const Module<F>& t) {
    s.require_same_algebra(t);
    std::vector<Matrix<F>> c;
    for (std::size_t v = 0; v < s.dims().size(); ++v) c.emplace_back(s.field(), t.dim(v), s.dim(v));
    return Morphism(Trusted{}, s, t, std::move(c));
  }
  static Morphism identity(const Module<F>& m) {
    std::vector<Matrix<F>> c;
    for (std::size_t v = 0; v < m.dims().size(); ++v) c.push_back(Matrix<F>::identity(m.field(), m.dim(v)));
    return Morphism(Trusted{}, m, m, std::move(c));
  }

  const Module<F>& source() const { return src_; }
  const Module<F>& target() const { return tgt_; }
  const Matrix<F>& at(std::size_t v) const { return comps_[v]; }
  const std::vector<Matrix<F>>& components() const { return comps_; }
  const F& field() const { return src_.field(); }

  /// g * f is "f then g".
  friend Morphism operator*(const Morphism& g, const Morphism& f) {
    if (!(f.tgt_ == g.src_)) throw DimensionMismatch("composing morphisms whose modules do not match");
    std::vector<Matrix<F>> c;
    for (std::size_t v = 0; v < f.comps_.size(); ++v) c.push_back(g.comps_[v] * f.comps_[v]);
    return Morphism(Trusted{}, f.src_, g.tgt_, std::move(c));
  }
  friend Morphism operator+(const Morphism& f, const Morphism& g) {
    f.require_parallel(g);
    std::vector<Matrix<F>> c;
    for (std::size_t v = 0; v < f.comps_.size(); ++v) c.push_back(f.comps_[v] + g.comps_[v]);
    return Morphism(Trusted{}, f.src_, f.tgt_, std::move(c));
  }
  friend Morphism operator-(const Morphism& f, const Morphism& g) {
    f.require_parallel(g);
    std::vector<Matrix<F>> c;
    for (std::size_t v = 0; v < f.comps_.size(); ++v) c.push_back(f.comps_[v] - g.comps_[v]);
    return Morphism(Trusted{}, f.src_, f.tgt_, std::move(c));
  }
  Morphism operator-() const { return scaled(field().neg(field().one())); }
  Morphism scaled(const typename F::value_type& s) const {
    std::vector<Matrix<F>> c;
    for (const auto& m : comps_) c.push_back(m.scaled(s));
    return Morphism(Trusted{}, src_, tgt_, std::move(c));
  }
  friend bool operator==(const Morphism& f, const Morphism& g) {
    return f.src_ == g.src_ && f.tgt_ == g.tgt_ && f.comps_ == g.comps_;
  }

  bool is_zero() const {
    for (const auto& m : comps_)
      if (!m.is_zero()) return false;
    return true;
  }
  std::size_t rank() const {
    std::size_t r = 0;
    for (const auto& m : comps_) r += nzext::rank(m);
    return r;
  }
  bool is_mono() const { return rank() == src_.total_dim(); }
  bool is_epi() const { return rank() == tgt_.total_dim(); }
  bool is_iso() const { return is_mono() && is_epi(); }

  /// Entries of all vertex matrices, vertex by vertex, row-major.
  Vector<F> flatten() const {
    Vector<F> out;
    for (const auto& m : comps_) out.insert(out.end(), m.entries().begin(), m.entries().end());
    return out;
  }

 private:
  void require_parallel(const Morphism& g) const {
    if (!(src_ == g.src_) || !(tgt_ == g.tgt_)) throw DimensionMismatch("morphisms are not parallel");
  }

  void validate() const {
    src_.require_same_algebra(tgt_);
    const auto& q = src_.algebra()->quiver();
    if (comps_.size() != q.vertices) throw InvalidModule("morphism needs one matrix per vertex");
    for (std::size_t v = 0; v < q.vertices; ++v) {
      if (comps_[v].rows() != tgt_.dim(v) || comps_[v].cols() != src_.dim(v)) {
        throw InvalidModule("morphism component at vertex " + std::to_string(v + 1) + " has shape " +
                            comps_[v].shape());
      }
    }
    for (std::size_t a = 0; a < q.arrows.size(); ++a) {
      const auto& arr = q.arrows[a];
      if (!(tgt_.arrow(a) * comps_[arr.source] == comps_[arr.target] * src_.arrow(a))) {
        throw InvalidModule("morphism does not commute with arrow '" + arr.name + "'");
      }
    }
  }

  Module<F> src_;
  Module<F> tgt_;
  std::vector<Matrix<F>> comps_;
};

// ---------------------------------------------------------------------------
// Hom spaces

template <class F>
std::vector<std::size_t> hom_offsets(const Module<F>& m, const Module<F>& n) {
  std::vector<std::size_t> off(m.dims().size() + 1, 0);
  for (std::size_t v = 0; v < m.dims().size(); ++v) off[v + 1] = off[v] + n.dim(v) * m.dim(v);
  return off;
}

/// The intertwiner system whose nullspace is Hom(m, n), in the layout of flatten().
template <class F>
Matrix<F> intertwiner_system(const Module<F>& m, const Module<F>& n) {
  const auto& q = m.algebra()->quiver();
  const F& f = m.field();
  auto off = hom_offsets(m, n);
  std::size_t eqs = 0;
  for (const auto& a : q.arrows) eqs += n.dim(a.target) * m.dim(a.source);
  Matrix<F> sys(f, eqs, off.back());
  std::size_t row = 0;
  for (std::size_t ai = 0; ai < q.arrows.size(); ++ai) {
    const auto& a = q.arrows[ai];
    const auto& na = n.arrow(ai);  // dims n[t] x n[s]
    const auto& ma = m.arrow(ai);  // dims m[t] x m[s]
    std::size_t ns = n.dim(a.source), nt = n.dim(a.target), ms = m.dim(a.source), mt = m.dim(a.target);
    for (std::size_t i = 0; i < nt; ++i) {
      for (std::size_t j = 0; j < ms; ++j, ++row) {
        // sum_k na(i,k) f_s(k,j)
        for (std::size_t k = 0; k < ns; ++k) {
          auto& slot = sys(row, off[a.source] + k * ms + j);
          slot = f.add(slot, na(i, k));
        }
        // - sum_k f_t(i,k) ma(k,j)
        for (std::size_t k = 0; k < mt; ++k) {
          auto& slot = sys(row, off[a.target] + i * mt + k);
          slot = f.sub(slot, ma(k, j));
        }
      }
    }
  }
  return sys;
}

template <class F>
Morphism<F> morphism_from_flat(const Module<F>& m, const Module<F>& n, const Vector<F>& flat) {
  auto off = hom_offsets(m, n);
  std::vector<Matrix<F>> comps;
  for (std::size_t v = 0; v < m.dims().size(); ++v) {
    std::vector<typename F::value_type> e(flat.begin() + off[v], flat.begin() + off[v + 1]);
    comps.emplace_back(m.field(), n.dim(v), m.dim(v), std::move(e));
  }
  return Morphism<F>(Trusted{}, m, n, std::move(comps));
}

/// Basis of Hom(m, n), deterministic (echelon order of the intertwiner system).
template <class F>
std::vector<Morphism<F>> hom_basis(const Module<F>& m, const Module<F>& n) {
  m.require_same_algebra(n);
  std::vector<Morphism<F>> out;
  auto sys = intertwiner_system(m, n);
  for (const auto& v : nullspace_basis(sys)) out.push_back(morphism_from_flat(m, n, v));
  return out;
}

template <class F>
std::size_t hom_dim(const Module<F>& m, const Module<F>& n) {
  m.require_same_algebra(n);
  auto sys = intertwiner_system(m, n);
  return sys.cols() - rank(sys);
}

/// Columns are flattened morphisms; rank gives the dimension of their span.
template <class F>
Matrix<F> flat_columns(const F& field, std::size_t length, const std::vector<Morphism<F>>& maps) {
  Matrix<F> out(field, length, maps.size());
  for (std::size_t j = 0; j < maps.size(); ++j) {
    auto v = maps[j].flatten();
    for (std::size_t i = 0; i < length; ++i) out(i, j) = v[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kernels, cokernels, images

template <class F>
struct Kernel {
  Module<F> object;
  Morphism<F> inclusion;
};

template <class F>
struct Cokernel {
  Module<F> object;
  Morphism<F> projection;
};

template <class F>
struct Image {
  Module<F> object;
  Morphism<F> epi;   // source -> image
  Morphism<F> mono;  // image -> target
};

namespace detail {

/// X with basis_t X = rhs (basis_t has full column rank, rhs lies in its span).
template <class F>
Matrix<F> coordinates_in(const Matrix<F>& basis, const Matrix<F>& rhs) {
  auto x = solve_matrix(basis, rhs);
  if (!x) throw Error("internal: vector outside the expected subspace");
  return *x;
}

/// Module structure on subspaces given vertex-wise by full-column-rank bases.
template <class F>
Module<F> submodule_on(const Module<F>& ambient, const std::vector<Matrix<F>>& bases) {
  const auto& q = ambient.algebra()->quiver();
  std::vector<std::size_t> dims;
  for (const auto& b : bases) dims.push_back(b.cols());
  std::vector<Matrix<F>> arrows;
  for (std::size_t a = 0; a < q.arrows.size(); ++a) {
    const auto& arr = q.arrows[a];
    arrows.push_back(coordinates_in(bases[arr.target], ambient.arrow(a) * bases[arr.source]));
  }
  return Module<F>(Trusted{}, ambient.algebra(), std::move(dims), std::move(arrows));
}

}  // namespace detail

template <class F>
Kernel<F> kernel(const Morphism<F>& f) {
  std::vector<Matrix<F>> incl;
  for (std::size_t v = 0; v < f.components().size(); ++v) {
    const auto& c = f.at(v);
    incl.push_back(Matrix<F>::from_columns(c.field(), c.cols(), nullspace_basis(c)));
  }
  auto k = detail::submodule_on(f.source(), incl);
  return {k, Morphism<F>(Trusted{}, k, f.source(), std::move(incl))};
}

template <class F>
Cokernel<F> cokernel(const Morphism<F>& f) {
  const auto& n = f.target();
  const auto& q = n.algebra()->quiver();
  std::vector<Matrix<F>> proj, sections;
  std::vector<std::size_t> dims;
  for (std::size_t v = 0; v < f.components().size(); ++v) {
    auto p = left_nullspace(f.at(v));
    if (p.cols() != n.dim(v)) p = Matrix<F>(n.field(), 0, n.dim(v));
    dims.push_back(p.rows());
    sections.push_back(right_inverse(p));
    proj.push_back(std::move(p));
  }
  std::vector<Matrix<F>> arrows;
  for (std::size_t a = 0; a < q.arrows.size(); ++a) {
    const auto& arr = q.arrows[a];
    arrows.push_back(proj[arr.target] * n.arrow(a) * sections[arr.source]);
  }
  Module<F> c(Trusted{}, n.algebra(), std::move(dims), std::move(arrows));
  return {c, Morphism<F>(Trusted{}, n, c, std::move(proj))};
}

template <class F>
Image<F> image(const Morphism<F>& f) {
  std::vector<Matrix<F>> bases, coords;
  for (std::size_t v = 0; v < f.components().size(); ++v) {
    bases.push_back(column_space(f.at(v)));
    coords.push_back(detail::coordinates_in(bases.back(), f.at(v)));
  }
  auto im = detail::submodule_on(f.target(), bases);
  return {im, Morphism<F>(Trusted{}, f.source(), im, std::move(coords)),
          Morphism<F>(Trusted{}, im, f.target(), std::move(bases))};
}

/// h with mono * h = g; throws if g does not factor.
template <class F>
Morphism<F> factor_through_mono(const Morphism<F>& g, const Morphism<F>& mono) {
  std::vector<Matrix<F>> comps;
  for (std::size_t v = 0; v < g.components().size(); ++v) {
    auto x = solve_matrix(mono.at(v), g.at(v));
    if (!x) throw NotConstructible("morphism does not factor through the given monomorphism");
    comps.push_back(std::move(*x));
  }
  return Morphism<F>(Trusted{}, g.source(), mono.source(), std::move(comps));
}

/// h with h * epi = g, where g vanishes on the kernel of epi.
template <class F>
Morphism<F> factor_through_epi(const Morphism<F>& g, const Morphism<F>& epi) {
  std::vector<Matrix<F>> comps;
  for (std::size_t v = 0; v < g.components().size(); ++v) {
    // h epi_v = g_v  <=>  epi_v^T h^T = g_v^T
    auto x = solve_matrix(epi.at(v).transpose(), g.at(v).transpose());
    if (!x) throw NotConstructible("morphism does not factor through the given epimorphism");
    comps.push_back(x->transpose());
  }
  return Morphism<F>(Trusted{}, epi.target(), g.target(), std::move(comps));
}

/// Inverse of an isomorphism.
template <class F>
Morphism<F> inverse(const Morphism<F>& f) {
  std::vector<Matrix<F>> comps;
  for (const auto& m : f.components()) {
    auto inv = nzext::inverse(m);
    if (!inv) throw Error("morphism is not an isomorphism");
    comps.push_back(std::move(*inv));
  }
  return Morphism<F>(Trusted{}, f.target(), f.source(), std::move(comps));
}

// ---------------------------------------------------------------------------
// Direct sums

template <class F>
struct DirectSum {
  Module<F> object;
  std::vector<Module<F>> summands;
  std::vector<Morphism<F>> injections;
  std::vector<Morphism<F>> projections;
};

template <class F>
DirectSum<F> direct_sum(const AlgebraPtr<F>& alg, const std::vector<Module<F>>& parts, std::string name = "") {
  const auto& q = alg->quiver();
  const F& f = alg->field();
  std::size_t nv = q.vertices;
  std::vector<std::vector<std::size_t>> offset(parts.size(), std::vector<std::size_t>(nv, 0));
  std::vector<std::size_t> dims(nv, 0);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].algebra() != alg) throw AlgebraMismatch();
    for (std::size_t v = 0; v < nv; ++v) {
      offset[i][v] = dims[v];
      dims[v] += parts[i].dim(v);
    }
  }
  std::vector<Matrix<F>> arrows;
  for (std::size_t a = 0; a < q.arrows.size(); ++a) {
    const auto& arr = q.arrows[a];
    Matrix<F> m(f, dims[arr.target], dims[arr.source]);
    for (std::size_t i = 0; i < parts.size(); ++i) m.set_block(offset[i][arr.target], offset[i][arr.source], parts[i].arrow(a));
    arrows.push_back(std::move(m));
  }
  if (name.empty()) {
    for (std::size_t i = 0; i < parts.size(); ++i) name += (i ? "+" : "") + parts[i].name();
    if (parts.empty()) name = "0";
  }
  Module<F> sum(Trusted{}, alg, dims, std::move(arrows), name);
  DirectSum<F> out{sum, parts, {}, {}};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<Matrix<F>> inj, proj;
    for (std::size_t v = 0; v < nv; ++v) {
      Matrix<F> in(f, dims[v], parts[i].dim(v));
      for (std::size_t k = 0; k < parts[i].dim(v); ++k) in(offset[i][v] + k, k) = f.one();
      proj.push_back(in.transpose());
      inj.push_back(std::move(in));
    }
    out.injections.emplace_back(Trusted{}, parts[i], sum, std::move(inj));
    out.projections.emplace_back(Trusted{}, sum, parts[i], std::move(proj));
  }
  return out;
}

/// Morphism between direct sums given by a grid: blocks[i][j] : src.summands[j] -> tgt.summands[i].
template <class F>
Morphism<F> block_morphism(const DirectSum<F>& src, const DirectSum<F>& tgt,
                           const std::vector<std::vector<Morphism<F>>>& blocks) {
  Morphism<F> total = Morphism<F>::zero(src.object, tgt.object);
  for (std::size_t i = 0; i < tgt.summands.size(); ++i)
    for (std::size_t j = 0; j < src.summands.size(); ++j)
      total = total + tgt.injections[i] * blocks[i][j] * src.projections[j];
  return total;
}

// ---------------------------------------------------------------------------
// Standard modules

template <class F>
Module<F> simple(const AlgebraPtr<F>& alg, std::size_t v) {
  std::vector<std::size_t> dims(alg->vertex_count(), 0);
  dims.at(v) = 1;
  std::vector<Matrix<F>> arrows;
  for (const auto& a : alg->quiver().arrows) arrows.emplace_back(alg->field(), dims[a.target], dims[a.source]);
  return Module<F>(Trusted{}, alg, dims, std::move(arrows), "S" + std::to_string(v + 1));
}

/// P_v: at vertex w, the residue classes of paths from v to w.
template <class F>
Module<F> projective(const AlgebraPtr<F>& alg, std::size_t v) {
  const auto& q = alg->quiver();
  if (v >= q.vertices) throw InputError("vertex out of range");
  std::vector<std::size_t> dims;
  for (std::size_t w = 0; w < q.vertices; ++w) dims.push_back(alg->paths_between(v, w).size());
  std::vector<Matrix<F>> arrows;
  for (std::size_t a = 0; a < q.arrows.size(); ++a) {
    const auto& arr = q.arrows[a];
    Matrix<F> m(alg->field(), dims[arr.target], dims[arr.source]);
    for (auto b : alg->paths_between(v, arr.source)) {
      for (const auto& [b2, c] : alg->extend(b, a)) m(alg->local_index(b2), alg->local_index(b)) = c;
    }
    arrows.push_back(std::move(m));
  }
  return Module<F>(Trusted{}, alg, std::move(dims), std::move(arrows), "P" + std::to_string(v + 1));
}

/// Vector-space dual: a module over the opposite algebra.
template <class F>
Module<F> dual(const Module<F>& m) {
  std::vector<Matrix<F>> arrows;
  for (const auto& a : m.arrows()) arrows.push_back(a.transpose());
  auto name = m.name();
  auto wrapped = [&] {
    if (name.size() <= 2 || !name.starts_with("D(") || !name.ends_with(")")) return false;
    int depth = 0;
    for (std::size_t i = 1; i + 1 < name.size(); ++i) {
      depth += name[i] == '(' ? 1 : name[i] == ')' ? -1 : 0;
      if (depth == 0) return false;
    }
    return true;
  };
  if (wrapped()) {
    name = name.substr(2, name.size() - 3);
  } else if (!name.empty()) {
    name = "D(" + name + ")";
  }
  return Module<F>(Trusted{}, m.algebra()->opposite(), m.dims(), std::move(arrows), name);
}

template <class F>
Morphism<F> dual(const Morphism<F>& f) {
  std::vector<Matrix<F>> comps;
  for (const auto& c : f.components()) comps.push_back(c.transpose());
  return Morphism<F>(Trusted{}, dual(f.target()), dual(f.source()), std::move(comps));
}

/// I_v, the dual of the projective of the opposite algebra at v.
template <class F>
Module<F> injective(const AlgebraPtr<F>& alg, std::size_t v) {
  if (v >= alg->vertex_count()) throw InputError("vertex out of range");
  return dual(projective(alg->opposite(), v)).renamed("I" + std::to_string(v + 1));
}

/// Regular module: the direct sum of all indecomposable projectives.
template <class F>
Module<F> regular_module(const AlgebraPtr<F>& alg) {
  std::vector<Module<F>> ps;
  for (std::size_t v = 0; v < alg->vertex_count(); ++v) ps.push_back(projective(alg, v));
  return direct_sum(alg, ps, "A").object;
}

}  // namespace nzext
