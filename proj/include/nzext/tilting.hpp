#pragma once

// Subcategories add(M_1 + ... + M_r) of mod A, approximations, rigidity and
// the n-cluster tilting / nZ-cluster tilting decision procedures.

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nzext/decompose.hpp"
#include "nzext/ext.hpp"
#include "nzext/linsys.hpp"

namespace nzext {

/// add M for a list of pairwise non-isomorphic indecomposables.
template <class F>
class Subcategory {
 public:
  Subcategory(AlgebraPtr<F> alg, std::vector<Module<F>> members) : alg_(std::move(alg)), members_(std::move(members)) {
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (members_[i].algebra() != alg_) throw AlgebraMismatch();
      if (!is_indecomposable(members_[i])) throw InvalidModule("subcategory member '" + members_[i].name() + "' is not indecomposable");
      for (std::size_t j = 0; j < i; ++j)
        if (isomorphic_indecomposables(members_[i], members_[j]))
          throw InvalidModule("subcategory members '" + members_[j].name() + "' and '" + members_[i].name() + "' are isomorphic");
    }
  }
  Subcategory(Trusted, AlgebraPtr<F> alg, std::vector<Module<F>> members) : alg_(std::move(alg)), members_(std::move(members)) {}

  const AlgebraPtr<F>& algebra() const { return alg_; }
  const F& field() const { return alg_->field(); }
  const std::vector<Module<F>>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const Module<F>& operator[](std::size_t i) const { return members_[i]; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& m : members_) out.push_back(m.name());
    return out;
  }
  std::string label() const {
    std::string s;
    for (const auto& m : members_) s += (s.empty() ? "" : ",") + m.name();
    return s;
  }

  /// Index of the member isomorphic to an indecomposable x.
  std::optional<std::size_t> index_of(const Module<F>& x) const {
    for (std::size_t i = 0; i < members_.size(); ++i)
      if (isomorphic_indecomposables(members_[i], x)) return i;
    return std::nullopt;
  }

  /// The subcategory D(add M) of mod A^op.
  Subcategory dual() const {
    std::vector<Module<F>> d;
    for (const auto& m : members_) d.push_back(nzext::dual(m));
    return Subcategory(Trusted{}, alg_->opposite(), std::move(d));
  }

 private:
  AlgebraPtr<F> alg_;
  std::vector<Module<F>> members_;
};

template <class F>
struct Approximation {
  Morphism<F> map;                 // right: M0 -> E, left: E -> M0
  std::vector<std::size_t> parts;  // member index of each summand of M0
  bool is_epi = false;
  bool is_mono = false;
};

namespace detail {

/// Evaluation map  + M_i^{Hom(M_i, E)} -> E  with greedy removal of redundant summands.
template <class F>
Approximation<F> right_approx(const Subcategory<F>& m, const Module<F>& e, bool minimal) {
  struct Piece {
    std::size_t member;
    Morphism<F> map;
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (auto& f : hom_basis(m[i], e)) pieces.push_back({i, std::move(f)});
  if (minimal && !pieces.empty()) {
    // cols[t][s]: flattened images Hom(M_t, M_s) -> Hom(M_t, E) through piece s
    std::vector<std::vector<Matrix<F>>> cols(m.size());
    std::vector<std::size_t> target(m.size());
    for (std::size_t t = 0; t < m.size(); ++t) {
      std::size_t len = 0;
      for (std::size_t v = 0; v < e.dims().size(); ++v) len += m[t].dim(v) * e.dim(v);
      target[t] = hom_dim(m[t], e);
      for (const auto& p : pieces) {
        std::vector<Morphism<F>> imgs;
        for (const auto& g : hom_basis(m[t], m[p.member])) imgs.push_back(p.map * g);
        cols[t].push_back(flat_columns(e.field(), len, imgs));
      }
    }
    std::vector<bool> keep(pieces.size(), true);
    for (std::size_t s = pieces.size(); s-- > 0;) {
      keep[s] = false;
      bool ok = true;
      for (std::size_t t = 0; t < m.size() && ok; ++t) {
        std::size_t len = cols[t][0].rows();
        Matrix<F> all(e.field(), len, 0);
        for (std::size_t r = 0; r < pieces.size(); ++r)
          if (keep[r]) all = hstack(all, cols[t][r]);
        ok = rank(all) == target[t];
      }
      if (!ok) keep[s] = true;
    }
    std::vector<Piece> kept;
    for (std::size_t s = 0; s < pieces.size(); ++s)
      if (keep[s]) kept.push_back(pieces[s]);
    pieces = std::move(kept);
  }
  std::vector<Module<F>> parts;
  Approximation<F> out{Morphism<F>::zero(Module<F>::zero(m.algebra()), e), {}, false, false};
  for (const auto& p : pieces) {
    parts.push_back(m[p.member]);
    out.parts.push_back(p.member);
  }
  auto sum = direct_sum(m.algebra(), parts);
  Morphism<F> f = Morphism<F>::zero(sum.object, e);
  for (std::size_t s = 0; s < pieces.size(); ++s) f = f + pieces[s].map * sum.projections[s];
  out.map = f;
  out.is_epi = f.is_epi();
  out.is_mono = f.is_mono();
  return out;
}

}  // namespace detail

/// Right add M-approximation M0 -> E (evaluation map, trimmed to a minimal set of summands).
template <class F>
Approximation<F> right_approximation(const Subcategory<F>& m, const Module<F>& e, bool minimal = true) {
  if (e.algebra() != m.algebra()) throw AlgebraMismatch();
  return detail::right_approx(m, e, minimal);
}

/// Left add M-approximation E -> M0, the dual of a right approximation over the opposite algebra.
template <class F>
Approximation<F> left_approximation(const Subcategory<F>& m, const Module<F>& e, bool minimal = true) {
  if (e.algebra() != m.algebra()) throw AlgebraMismatch();
  auto r = detail::right_approx(m.dual(), dual(e), minimal);
  auto d = dual(r.map);
  std::string name;
  for (auto i : r.parts) name += (name.empty() ? "" : "+") + m[i].name();
  if (name.empty()) name = "0";
  Approximation<F> out{Morphism<F>(Trusted{}, d.source(), d.target().renamed(name), d.components()), r.parts, false, false};
  out.is_mono = out.map.is_mono();
  out.is_epi = out.map.is_epi();
  return out;
}

/// Approximation property of f : M0 -> E: Hom(M', M0) -> Hom(M', E) onto for all members M'.
template <class F>
bool is_right_approximation(const Subcategory<F>& m, const Morphism<F>& f) {
  for (const auto& x : m.members()) {
    std::vector<Morphism<F>> imgs;
    for (const auto& g : hom_basis(x, f.source())) imgs.push_back(f * g);
    std::size_t len = 0;
    for (std::size_t v = 0; v < x.dims().size(); ++v) len += x.dim(v) * f.target().dim(v);
    if (rank(flat_columns(f.field(), len, imgs)) != hom_dim(x, f.target())) return false;
  }
  return true;
}

template <class F>
bool is_left_approximation(const Subcategory<F>& m, const Morphism<F>& f) {
  return is_right_approximation(m.dual(), dual(f));
}

/// E in add M: the right approximation splits.
template <class F>
bool in_add(const Subcategory<F>& m, const Module<F>& e) {
  if (e.is_zero()) return true;
  auto r = right_approximation(m, e);
  if (!r.is_epi) return false;
  MorphismSystem<F> sys(e.field());
  auto u = sys.add_unknown(e, r.map.source());
  sys.add_equation({sys.term(u, r.map, std::nullopt)}, Morphism<F>::identity(e));
  return sys.solve_system().has_value();
}

// ---------------------------------------------------------------------------
// Ext tables

/// dims[i][j][k] = dim Ext^k(mods[i], mods[j]) for k <= max_degree.
template <class F>
struct ExtTable {
  std::vector<Module<F>> mods;
  std::size_t max_degree = 0;
  std::vector<std::vector<std::vector<std::size_t>>> dims;

  std::size_t at(std::size_t i, std::size_t j, std::size_t k) const { return dims[i][j][k]; }
};

/// Runs fn(i) for i < count on up to `jobs` threads.
template <class Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mutex;
  for (unsigned t = 0; t < std::min<std::size_t>(jobs, count); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(err_mutex);
          if (!err) err = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

template <class F>
ExtTable<F> ext_table(const std::vector<Module<F>>& mods, std::size_t max_degree, unsigned jobs = 1) {
  ExtTable<F> t{mods, max_degree, {}};
  t.dims.assign(mods.size(), std::vector<std::vector<std::size_t>>(mods.size(), std::vector<std::size_t>(max_degree + 1, 0)));
  // Resolutions first so that workers only read the cache.
  for (const auto& m : mods) projective_resolution(m, max_degree + 1);
  parallel_for(mods.size() * mods.size(), jobs, [&](std::size_t idx) {
    std::size_t i = idx / mods.size(), j = idx % mods.size();
    for (std::size_t k = 0; k <= max_degree; ++k) t.dims[i][j][k] = ext_dim(k, mods[i], mods[j]);
  });
  return t;
}

// ---------------------------------------------------------------------------
// Rigidity and cluster tilting

struct ExtWitness {
  std::size_t source = 0, target = 0, degree = 0;  // Ext^degree(M_source, M_target) != 0
};

struct RigidityReport {
  bool rigid = true;
  std::optional<ExtWitness> witness;
};

template <class F>
RigidityReport is_n_rigid(const Subcategory<F>& m, std::size_t n) {
  for (std::size_t k = 1; k + 1 <= n; ++k)
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j)
        if (ext_dim(k, m[i], m[j]) != 0) return {false, ExtWitness{i, j, k}};
  return {};
}

struct ClusterTiltingReport {
  bool ok = true;
  std::string condition;  // "i", "ii", "iii-left", "iii-right" or empty
  std::string module;     // offending indecomposable
  std::string detail;
  std::vector<std::string> offenders;  // every indecomposable violating the orthogonality condition
};

/// Conditions (i)-(iii) of n-cluster tilting, tested on all indecomposables of the algebra.
/// The orthogonality condition is reported first.
template <class F>
ClusterTiltingReport is_n_cluster_tilting(const Subcategory<F>& m, std::size_t n, const std::vector<Module<F>>& catalog) {
  if (n == 0) throw InputError("n must be positive");
  ClusterTiltingReport bad;
  std::optional<ClusterTiltingReport> strong;  // outside add M but in both orthogonals
  for (const auto& e : catalog) {
    bool in_m = m.index_of(e).has_value();
    bool left = true, right = true;  // Ext^{1..n-1}(E, M) = 0, Ext^{1..n-1}(M, E) = 0
    for (std::size_t k = 1; k + 1 <= n; ++k) {
      for (const auto& x : m.members()) {
        left = left && ext_dim(k, e, x) == 0;
        right = right && ext_dim(k, x, e) == 0;
      }
    }
    if (left == in_m && right == in_m) continue;
    bad.offenders.push_back(e.name());
    ClusterTiltingReport r;
    r.ok = false;
    r.module = e.name();
    if (left != in_m) {
      r.condition = "iii-left";
      r.detail = in_m ? "member has Ext into M" : "lies in the left orthogonal but not in add M";
    } else {
      r.condition = "iii-right";
      r.detail = in_m ? "member has Ext from M" : "lies in the right orthogonal but not in add M";
    }
    if (!in_m && left && right && !strong) {
      r.detail = "lies in both orthogonals but not in add M";
      strong = r;
    }
    if (bad.ok) {
      auto offenders = std::move(bad.offenders);
      bad = r;
      bad.offenders = std::move(offenders);
    }
  }
  if (!bad.ok) {
    if (strong) {
      auto offenders = std::move(bad.offenders);
      bad = *strong;
      bad.offenders = std::move(offenders);
    }
    return bad;
  }
  for (const auto& e : catalog) {
    if (!left_approximation(m, e).is_mono) return {false, "i", e.name(), "no left approximation by a monomorphism", {}};
    if (!right_approximation(m, e).is_epi) return {false, "ii", e.name(), "no right approximation by an epimorphism", {}};
  }
  return {};
}

template <class F>
ClusterTiltingReport is_n_cluster_tilting(const Subcategory<F>& m, std::size_t n) {
  return is_n_cluster_tilting(m, n, list_indecomposables(m.algebra()));
}

struct NZReport {
  bool ok = true;
  bool exact = false;  // bound reached the global dimension
  std::size_t bound = 0;
  std::optional<ExtWitness> witness;
  ClusterTiltingReport cluster_tilting;
};

/// Default degree bound: the global dimension if finite, else 4n.
template <class F>
std::pair<std::size_t, bool> nz_degree_bound(const AlgebraPtr<F>& alg, std::size_t n) {
  if (auto g = global_dimension(alg, 4 * n + 8)) return {*g, true};
  return {4 * n, false};
}

/// Condition (iv): Ext^k(M, M) = 0 for 0 < k <= bound outside nZ.
template <class F>
NZReport condition_iv(const Subcategory<F>& m, std::size_t n, std::optional<std::size_t> degree_bound = std::nullopt) {
  auto [g, finite] = nz_degree_bound(m.algebra(), n);
  NZReport r;
  r.bound = degree_bound.value_or(g);
  r.exact = finite && r.bound >= g;
  for (std::size_t k = 1; k <= r.bound; ++k) {
    if (k % n == 0) continue;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j)
        if (ext_dim(k, m[i], m[j]) != 0) {
          r.ok = false;
          r.witness = ExtWitness{i, j, k};
          return r;
        }
  }
  return r;
}

template <class F>
NZReport is_nZ_cluster_tilting(const Subcategory<F>& m, std::size_t n, std::optional<std::size_t> degree_bound = std::nullopt) {
  auto ct = is_n_cluster_tilting(m, n);
  if (!ct.ok) {
    NZReport r;
    r.ok = false;
    r.cluster_tilting = ct;
    return r;
  }
  auto r = condition_iv(m, n, degree_bound);
  r.cluster_tilting = ct;
  return r;
}

// ---------------------------------------------------------------------------
// Search

template <class F>
struct SearchOptions {
  std::size_t n = 1;
  bool require_nZ = false;
  unsigned jobs = 1;
};

/// All n-cluster tilting subcategories (optionally nZ) among subsets of the indecomposables
/// that contain every projective and injective. Output ordered by the catalog positions.
template <class F>
std::vector<Subcategory<F>> search_cluster_tilting(const AlgebraPtr<F>& alg, const SearchOptions<F>& opt,
                                                   const std::vector<Module<F>>& user_catalog = {}) {
  auto catalog = list_indecomposables(alg, user_catalog);
  std::size_t c = catalog.size();
  std::vector<bool> forced(c, false);
  for (std::size_t v = 0; v < alg->vertex_count(); ++v) {
    auto p = projective(alg, v), q = injective(alg, v);
    for (std::size_t i = 0; i < c; ++i)
      if (isomorphic_indecomposables(catalog[i], p) || isomorphic_indecomposables(catalog[i], q)) forced[i] = true;
  }
  std::vector<std::size_t> optional_idx;
  for (std::size_t i = 0; i < c; ++i)
    if (!forced[i]) optional_idx.push_back(i);
  if (optional_idx.size() > 24) throw UnsupportedEnumeration("too many non-projective-injective indecomposables for exhaustive search");

  std::size_t n = opt.n;
  auto [g, finite] = nz_degree_bound(alg, n);
  std::size_t maxdeg = std::max<std::size_t>(n > 0 ? n - 1 : 0, opt.require_nZ ? g : 0);
  auto table = ext_table(catalog, maxdeg, opt.jobs);
  auto vanish = [&](std::size_t i, std::size_t j) {  // Ext^{1..n-1}(i, j) = 0
    for (std::size_t k = 1; k + 1 <= n; ++k)
      if (table.at(i, j, k)) return false;
    return true;
  };

  std::size_t total = std::size_t{1} << optional_idx.size();
  std::vector<std::optional<std::vector<std::size_t>>> hits(total);
  parallel_for(total, opt.jobs, [&](std::size_t mask) {
    std::vector<bool> in(c, false);
    for (std::size_t i = 0; i < c; ++i) in[i] = forced[i];
    for (std::size_t b = 0; b < optional_idx.size(); ++b)
      if (mask >> b & 1) in[optional_idx[b]] = true;
    // (iii) by table lookups
    for (std::size_t e = 0; e < c; ++e) {
      bool left = true, right = true;
      for (std::size_t x = 0; x < c; ++x) {
        if (!in[x]) continue;
        left = left && vanish(e, x);
        right = right && vanish(x, e);
      }
      if (left != in[e] || right != in[e]) return;
    }
    if (opt.require_nZ) {
      for (std::size_t k = 1; k <= g; ++k) {
        if (k % n == 0) continue;
        for (std::size_t i = 0; i < c; ++i)
          for (std::size_t j = 0; j < c; ++j)
            if (in[i] && in[j] && table.at(i, j, k)) return;
      }
    }
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < c; ++i)
      if (in[i]) members.push_back(i);
    hits[mask] = members;
  });

  std::vector<std::vector<std::size_t>> found;
  for (auto& h : hits)
    if (h) found.push_back(std::move(*h));
  std::sort(found.begin(), found.end());
  std::vector<Subcategory<F>> out;
  for (const auto& idx : found) {
    std::vector<Module<F>> mods;
    for (auto i : idx) mods.push_back(catalog[i]);
    Subcategory<F> s(Trusted{}, alg, std::move(mods));
    // (i) and (ii) with actual approximations.
    auto rep = is_n_cluster_tilting(s, n, catalog);
    if (!rep.ok) continue;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace nzext
