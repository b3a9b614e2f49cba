#pragma once

// Bound quiver algebras kQ/I with homogeneous admissible relations.
//
// Paths are stored as arrow lists in traversal order: the path written a2*a1
// ("a1 then a2") is the list {a1, a2}. Vertices are 0-based internally and
// printed 1-based.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "nzext/errors.hpp"
#include "nzext/matrix.hpp"

namespace nzext {

struct Arrow {
  std::size_t source;
  std::size_t target;
  std::string name;
};

struct Quiver {
  std::size_t vertices = 0;
  std::vector<Arrow> arrows;

  std::optional<std::size_t> arrow_index(const std::string& name) const {
    for (std::size_t i = 0; i < arrows.size(); ++i) {
      if (arrows[i].name == name) return i;
    }
    return std::nullopt;
  }

  void validate() const {
    for (const auto& a : arrows) {
      if (a.source >= vertices || a.target >= vertices) {
        throw InputError("arrow '" + a.name + "' has an endpoint out of range");
      }
    }
    for (std::size_t i = 0; i < arrows.size(); ++i)
      for (std::size_t j = i + 1; j < arrows.size(); ++j)
        if (arrows[i].name == arrows[j].name) throw InputError("duplicate arrow name '" + arrows[i].name + "'");
  }

  Quiver reversed() const {
    Quiver q{vertices, {}};
    for (const auto& a : arrows) q.arrows.push_back({a.target, a.source, a.name});
    return q;
  }
};

/// Arrow indices in traversal order.
using Path = std::vector<std::size_t>;

template <class F>
struct Relation {
  std::vector<std::pair<typename F::value_type, Path>> terms;
};

struct BasisPath {
  std::size_t source;
  std::size_t target;
  Path arrows;
  std::size_t length() const { return arrows.size(); }
};

template <class F>
using SparseVector = std::vector<std::pair<std::size_t, typename F::value_type>>;

struct NakayamaShape {
  std::size_t m;
  std::size_t l;
};

template <class F>
class Algebra;

template <class F>
std::shared_ptr<const Algebra<F>> build_algebra(Quiver q, F field, std::vector<Relation<F>> relations,
                                                std::size_t length_cap = 64);

template <class F>
class Algebra {
 public:
  using Scalar = typename F::value_type;

  const F& field() const { return field_; }
  const Quiver& quiver() const { return quiver_; }
  const std::vector<Relation<F>>& relations() const { return relations_; }
  std::size_t vertex_count() const { return quiver_.vertices; }
  std::size_t dimension() const { return basis_.size(); }
  const std::vector<BasisPath>& basis() const { return basis_; }
  /// Every path of this length or longer lies in the ideal.
  std::size_t radical_bound() const { return radical_bound_; }

  /// Indices into basis() of residue classes of paths from v to w.
  const std::vector<std::size_t>& paths_between(std::size_t v, std::size_t w) const {
    return between_[v * quiver_.vertices + w];
  }

  /// Position of basis element b inside paths_between(b.source, b.target).
  std::size_t local_index(std::size_t b) const { return local_index_[b]; }

  /// Index of the trivial path e_v in basis().
  std::size_t idempotent(std::size_t v) const { return idempotent_[v]; }

  /// Normal form of basis element b followed by arrow a (zero if not composable).
  const SparseVector<F>& extend(std::size_t b, std::size_t a) const {
    return extend_[b * quiver_.arrows.size() + a];
  }

  /// Normal form of an arbitrary path starting at `source`.
  SparseVector<F> normal_form(std::size_t source, const Path& p) const {
    SparseVector<F> cur{{idempotent_.at(source), field_.one()}};
    for (auto a : p) {
      SparseVector<F> next;
      for (const auto& [b, c] : cur) {
        for (const auto& [b2, c2] : extend(b, a)) add_term(next, b2, field_.mul(c, c2));
      }
      cur = std::move(next);
    }
    return cur;
  }

  /// Product "first, then second" of two basis elements (second * first in
  /// composition notation).
  SparseVector<F> multiply(std::size_t first, std::size_t second) const {
    const auto& b1 = basis_[first];
    const auto& b2 = basis_[second];
    if (b1.target != b2.source) return {};
    Path p = b1.arrows;
    p.insert(p.end(), b2.arrows.begin(), b2.arrows.end());
    return normal_form(b1.source, p);
  }

  const std::optional<NakayamaShape>& nakayama_shape() const { return nakayama_; }

  /// The opposite algebra (reversed arrows and relations); opposite()->opposite() is this.
  std::shared_ptr<const Algebra> opposite() const {
    return std::shared_ptr<const Algebra>(owner_.lock(), sibling_);
  }
  bool is_opposite_of(const Algebra& other) const { return sibling_ == &other; }

  std::string describe() const {
    std::string s = field_.name() + ", " + std::to_string(quiver_.vertices) + " vertices, " +
                    std::to_string(quiver_.arrows.size()) + " arrows, dim " + std::to_string(dimension());
    if (nakayama_) s = "nakayama(" + std::to_string(nakayama_->m) + "," + std::to_string(nakayama_->l) + ") over " + s;
    return s;
  }

  explicit Algebra(F field) : field_(std::move(field)) {}

 private:
  friend std::shared_ptr<const Algebra<F>> build_algebra<F>(Quiver, F, std::vector<Relation<F>>, std::size_t);
  template <class G>
  friend std::shared_ptr<const Algebra<G>> nakayama(std::size_t, std::size_t, G);

  void add_term(SparseVector<F>& v, std::size_t idx, const Scalar& c) const {
    if (field_.is_zero(c)) return;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (it->first == idx) {
        it->second = field_.add(it->second, c);
        if (field_.is_zero(it->second)) v.erase(it);
        return;
      }
    }
    v.emplace_back(idx, c);
  }

  void build(std::size_t length_cap);

  F field_;
  Quiver quiver_;
  std::vector<Relation<F>> relations_;
  std::vector<BasisPath> basis_;
  std::vector<std::vector<std::size_t>> between_;
  std::vector<std::size_t> local_index_;
  std::vector<std::size_t> idempotent_;
  std::vector<SparseVector<F>> extend_;
  std::size_t radical_bound_ = 1;
  std::optional<NakayamaShape> nakayama_;
  std::weak_ptr<const void> owner_;
  const Algebra* sibling_ = nullptr;
};

namespace detail {

template <class F>
struct AlgebraPair {
  Algebra<F> forward;
  Algebra<F> backward;
  explicit AlgebraPair(const F& f) : forward(f), backward(f) {}
};

struct RawPath {
  std::size_t source;
  Path arrows;
  bool operator<(const RawPath& o) const {
    return std::tie(source, arrows) < std::tie(o.source, o.arrows);
  }
};

}  // namespace detail

template <class F>
void Algebra<F>::build(std::size_t length_cap) {
  const auto nv = quiver_.vertices;
  const auto na = quiver_.arrows.size();
  quiver_.validate();

  for (const auto& rel : relations_) {
    if (rel.terms.empty()) continue;
    std::optional<std::size_t> len, src, tgt;
    for (const auto& [c, p] : rel.terms) {
      if (p.size() < 2) throw AdmissibilityError("relation term has length < 2 (ideal must lie in rad^2)");
      for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        if (p[i] >= na || p[i + 1] >= na || quiver_.arrows[p[i]].target != quiver_.arrows[p[i + 1]].source) {
          throw InputError("relation term is not a composable path");
        }
      }
      if (p.back() >= na) throw InputError("relation refers to an unknown arrow");
      std::size_t s = quiver_.arrows[p.front()].source, t = quiver_.arrows[p.back()].target;
      if (len && (*len != p.size())) {
        throw AdmissibilityError("non-homogeneous relations are not supported");
      }
      if (src && (*src != s || *tgt != t)) throw InputError("relation terms are not parallel paths");
      len = p.size();
      src = s;
      tgt = t;
    }
  }

  // Per-length: enumerate paths, span the ideal component, select standard monomials.
  std::map<detail::RawPath, SparseVector<F>> nf;
  std::vector<detail::RawPath> level;
  for (std::size_t v = 0; v < nv; ++v) {
    detail::RawPath p{v, {}};
    basis_.push_back({v, v, {}});
    nf[p] = {{basis_.size() - 1, field_.one()}};
    level.push_back(p);
  }
  std::vector<Vector<F>> ideal_prev;  // ideal component rows of the previous length
  std::vector<detail::RawPath> prev_level;
  std::map<detail::RawPath, std::size_t> prev_index;

  std::size_t length = 0;
  bool terminated = nv == 0 || na == 0;
  if (terminated) radical_bound_ = 1;
  while (!terminated) {
    ++length;
    if (length > length_cap) {
      throw AdmissibilityError("paths of length > " + std::to_string(length_cap) +
                               " survive modulo the relations (ideal not admissible)");
    }
    prev_level = level;
    prev_index.clear();
    for (std::size_t i = 0; i < prev_level.size(); ++i) prev_index[prev_level[i]] = i;

    std::vector<detail::RawPath> cur;
    for (const auto& p : prev_level) {
      std::size_t end = p.arrows.empty() ? p.source : quiver_.arrows[p.arrows.back()].target;
      for (std::size_t a = 0; a < na; ++a) {
        if (quiver_.arrows[a].source != end) continue;
        detail::RawPath q = p;
        q.arrows.push_back(a);
        cur.push_back(q);
      }
    }
    if (cur.empty()) {
      radical_bound_ = length;
      break;
    }
    std::map<detail::RawPath, std::size_t> index;
    for (std::size_t i = 0; i < cur.size(); ++i) index[cur[i]] = i;

    std::vector<Vector<F>> rows;
    auto zero_row = [&] { return Vector<F>(cur.size(), field_.zero()); };
    for (const auto& rel : relations_) {
      if (rel.terms.empty() || rel.terms.front().second.size() != length) continue;
      auto row = zero_row();
      for (const auto& [c, p] : rel.terms) {
        detail::RawPath rp{quiver_.arrows[p.front()].source, p};
        auto& slot = row[index.at(rp)];
        slot = field_.add(slot, c);
      }
      rows.push_back(row);
    }
    // Left and right multiples of the previous ideal component by arrows.
    for (const auto& prow : ideal_prev) {
      for (std::size_t a = 0; a < na; ++a) {
        auto right = zero_row();
        auto left = zero_row();
        bool any_r = false, any_l = false;
        for (std::size_t i = 0; i < prow.size(); ++i) {
          if (field_.is_zero(prow[i])) continue;
          const auto& p = prev_level[i];
          std::size_t end = p.arrows.empty() ? p.source : quiver_.arrows[p.arrows.back()].target;
          if (quiver_.arrows[a].source == end) {
            detail::RawPath q = p;
            q.arrows.push_back(a);
            right[index.at(q)] = prow[i];
            any_r = true;
          }
          if (quiver_.arrows[a].target == p.source) {
            detail::RawPath q{quiver_.arrows[a].source, {a}};
            q.arrows.insert(q.arrows.end(), p.arrows.begin(), p.arrows.end());
            left[index.at(q)] = prow[i];
            any_l = true;
          }
        }
        if (any_r) rows.push_back(right);
        if (any_l) rows.push_back(left);
      }
    }

    Matrix<F> ideal(field_, rows.size(), cur.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cur.size(); ++j) ideal(i, j) = rows[i][j];
    auto e = rref(ideal);
    std::vector<bool> is_pivot(cur.size(), false);
    std::vector<std::size_t> pivot_row(cur.size(), 0);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
      is_pivot[e.pivots[i]] = true;
      pivot_row[e.pivots[i]] = i;
    }
    std::vector<std::size_t> basis_of_col(cur.size(), 0);
    std::vector<detail::RawPath> next_level;
    for (std::size_t j = 0; j < cur.size(); ++j) {
      if (is_pivot[j]) continue;
      const auto& p = cur[j];
      basis_.push_back({p.source, quiver_.arrows[p.arrows.back()].target, p.arrows});
      basis_of_col[j] = basis_.size() - 1;
      next_level.push_back(p);
    }
    for (std::size_t j = 0; j < cur.size(); ++j) {
      SparseVector<F> v;
      if (!is_pivot[j]) {
        v.emplace_back(basis_of_col[j], field_.one());
      } else {
        for (std::size_t q = 0; q < cur.size(); ++q) {
          if (is_pivot[q] || field_.is_zero(e.reduced(pivot_row[j], q))) continue;
          v.emplace_back(basis_of_col[q], field_.neg(e.reduced(pivot_row[j], q)));
        }
      }
      nf[cur[j]] = std::move(v);
    }

    ideal_prev.clear();
    for (std::size_t i = 0; i < e.rank(); ++i) ideal_prev.push_back(Vector<F>(e.reduced.row(i).begin(), e.reduced.row(i).end()));
    if (next_level.empty()) {
      radical_bound_ = length;
      terminated = true;
    }
    // Paths extending the ideal need all paths of this length for the next
    // round, not just the standard ones.
    level = cur;
  }

  between_.assign(nv * nv, {});
  local_index_.assign(basis_.size(), 0);
  idempotent_.assign(nv, 0);
  for (std::size_t b = 0; b < basis_.size(); ++b) {
    auto& slot = between_[basis_[b].source * nv + basis_[b].target];
    local_index_[b] = slot.size();
    slot.push_back(b);
    if (basis_[b].arrows.empty()) idempotent_[basis_[b].source] = b;
  }
  extend_.assign(basis_.size() * na, {});
  for (std::size_t b = 0; b < basis_.size(); ++b) {
    for (std::size_t a = 0; a < na; ++a) {
      if (quiver_.arrows[a].source != basis_[b].target) continue;
      detail::RawPath q{basis_[b].source, basis_[b].arrows};
      q.arrows.push_back(a);
      auto it = nf.find(q);
      if (it != nf.end()) extend_[b * na + a] = it->second;
    }
  }
}

template <class F>
std::vector<Relation<F>> reversed_relations(const std::vector<Relation<F>>& rels) {
  std::vector<Relation<F>> out;
  for (const auto& r : rels) {
    Relation<F> rr;
    for (const auto& [c, p] : r.terms) rr.terms.emplace_back(c, Path(p.rbegin(), p.rend()));
    out.push_back(std::move(rr));
  }
  return out;
}

namespace detail {

/// Shape (m, l) when q is 1 -> 2 -> ... -> m with arrow i from i to i+1 and the relations are
/// exactly the paths of one length l.
template <class F>
std::optional<NakayamaShape> linear_shape(const Quiver& q, const std::vector<Relation<F>>& rels) {
  std::size_t m = q.vertices;
  if (m == 0 || q.arrows.size() + 1 != m) return std::nullopt;
  for (std::size_t i = 0; i < q.arrows.size(); ++i)
    if (q.arrows[i].source != i || q.arrows[i].target != i + 1) return std::nullopt;
  if (rels.empty()) return NakayamaShape{m, std::max<std::size_t>(m, 2)};
  std::size_t l = 0;
  std::vector<bool> seen(m, false);
  for (const auto& r : rels) {
    if (r.terms.size() != 1) return std::nullopt;
    const auto& p = r.terms.front().second;
    if (p.size() < 2 || (l && p.size() != l)) return std::nullopt;
    l = p.size();
    for (std::size_t k = 1; k < p.size(); ++k)
      if (p[k] != p[0] + k) return std::nullopt;
    seen[p[0]] = true;
  }
  for (std::size_t i = 0; i + l < m; ++i)
    if (!seen[i]) return std::nullopt;
  return NakayamaShape{m, l};
}

}  // namespace detail

template <class F>
std::shared_ptr<const Algebra<F>> build_algebra(Quiver q, F field, std::vector<Relation<F>> relations,
                                                std::size_t length_cap) {
  auto pair = std::make_shared<detail::AlgebraPair<F>>(field);
  for (auto& r : relations) {
    std::erase_if(r.terms, [&](const auto& t) { return field.is_zero(t.first); });
  }
  pair->forward.quiver_ = q;
  pair->forward.relations_ = relations;
  pair->backward.quiver_ = q.reversed();
  pair->backward.relations_ = reversed_relations(relations);
  pair->forward.build(length_cap);
  pair->backward.build(length_cap);
  if (pair->forward.dimension() != pair->backward.dimension()) {
    throw AdmissibilityError("opposite algebra has a different dimension");
  }
  std::shared_ptr<const void> owner = pair;
  pair->forward.owner_ = owner;
  pair->backward.owner_ = owner;
  pair->forward.sibling_ = &pair->backward;
  pair->backward.sibling_ = &pair->forward;
  pair->forward.nakayama_ = detail::linear_shape(q, relations);
  return std::shared_ptr<const Algebra<F>>(pair, &pair->forward);
}

/// Linear quiver 1 -> 2 -> ... -> m with all paths of length l as relations.
template <class F>
std::shared_ptr<const Algebra<F>> nakayama(std::size_t m, std::size_t l, F field) {
  if (m < 1 || l < 2) throw InputError("nakayama(m, l) requires m >= 1 and l >= 2");
  Quiver q{m, {}};
  for (std::size_t i = 0; i + 1 < m; ++i) q.arrows.push_back({i, i + 1, "a" + std::to_string(i + 1)});
  std::vector<Relation<F>> rels;
  for (std::size_t i = 0; i + l < m + 1 && i + l <= q.arrows.size(); ++i) {
    Path p;
    for (std::size_t k = 0; k < l; ++k) p.push_back(i + k);
    rels.push_back({{{field.one(), p}}});
  }
  auto alg = build_algebra(q, field, rels);
  auto& fwd = const_cast<Algebra<F>&>(*alg);
  fwd.nakayama_ = NakayamaShape{m, l};
  return alg;
}

}  // namespace nzext
