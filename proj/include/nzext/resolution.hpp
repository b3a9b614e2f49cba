#pragma once

// Direct sums of indecomposable projectives, projective covers, minimal
// projective resolutions and the process-wide resolution cache.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nzext/complex.hpp"
#include "nzext/module.hpp"

namespace nzext {

/// P = P_{v_0} + P_{v_1} + ... with generator s sitting at vertex v_s.
template <class F>
struct ProjectiveSum {
  std::vector<std::size_t> vertices;
  Module<F> module;
  std::vector<std::vector<std::size_t>> offset;  // offset[s][w]: start of summand s at vertex w

  std::size_t generators() const { return vertices.size(); }
  /// Position of the generator e_{v_s} inside module at vertex v_s.
  std::size_t generator_position(std::size_t s) const {
    const auto& alg = *module.algebra();
    return offset[s][vertices[s]] + alg.local_index(alg.idempotent(vertices[s]));
  }
};

template <class F>
ProjectiveSum<F> projective_sum(const AlgebraPtr<F>& alg, std::vector<std::size_t> vertices) {
  const auto& q = alg->quiver();
  std::vector<std::vector<std::size_t>> offset(vertices.size(), std::vector<std::size_t>(q.vertices, 0));
  std::vector<std::size_t> dims(q.vertices, 0);
  for (std::size_t s = 0; s < vertices.size(); ++s) {
    for (std::size_t w = 0; w < q.vertices; ++w) {
      offset[s][w] = dims[w];
      dims[w] += alg->paths_between(vertices[s], w).size();
    }
  }
  std::vector<Matrix<F>> arrows;
  for (std::size_t a = 0; a < q.arrows.size(); ++a) {
    const auto& arr = q.arrows[a];
    Matrix<F> m(alg->field(), dims[arr.target], dims[arr.source]);
    for (std::size_t s = 0; s < vertices.size(); ++s) {
      for (auto b : alg->paths_between(vertices[s], arr.source)) {
        for (const auto& [b2, c] : alg->extend(b, a)) {
          m(offset[s][arr.target] + alg->local_index(b2), offset[s][arr.source] + alg->local_index(b)) = c;
        }
      }
    }
    arrows.push_back(std::move(m));
  }
  std::string name;
  for (auto v : vertices) name += (name.empty() ? "P" : "+P") + std::to_string(v + 1);
  if (name.empty()) name = "0";
  Module<F> mod(Trusted{}, alg, std::move(dims), std::move(arrows), name);
  return {std::move(vertices), std::move(mod), std::move(offset)};
}

/// The morphism P -> n sending generator s to images[s] in n at vertex v_s.
template <class F>
Morphism<F> from_generators(const ProjectiveSum<F>& p, const Module<F>& n, const std::vector<Vector<F>>& images) {
  const auto& alg = *p.module.algebra();
  std::size_t nv = alg.vertex_count();
  std::vector<Matrix<F>> comps;
  for (std::size_t w = 0; w < nv; ++w) comps.emplace_back(alg.field(), n.dim(w), p.module.dim(w));
  for (std::size_t s = 0; s < p.generators(); ++s) {
    std::size_t v = p.vertices[s];
    Matrix<F> x = Matrix<F>::from_columns(alg.field(), n.dim(v), {images.at(s)});
    for (std::size_t w = 0; w < nv; ++w) {
      for (auto b : alg.paths_between(v, w)) {
        auto col = n.act_basis(b) * x;
        for (std::size_t i = 0; i < n.dim(w); ++i) comps[w](i, p.offset[s][w] + alg.local_index(b)) = col(i, 0);
      }
    }
  }
  return Morphism<F>(Trusted{}, p.module, n, std::move(comps));
}

/// Image of generator s under g : P -> N.
template <class F>
Vector<F> generator_image(const ProjectiveSum<F>& p, const Morphism<F>& g, std::size_t s) {
  return g.at(p.vertices[s]).column(p.generator_position(s));
}

/// Concatenated generator images: the coordinates of g in  Hom(P, N) = + N_{v_s}.
template <class F>
Vector<F> generator_vector(const ProjectiveSum<F>& p, const Morphism<F>& g) {
  Vector<F> out;
  for (std::size_t s = 0; s < p.generators(); ++s) {
    auto v = generator_image(p, g, s);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

template <class F>
Morphism<F> from_generator_vector(const ProjectiveSum<F>& p, const Module<F>& n, const Vector<F>& flat) {
  std::vector<Vector<F>> images;
  std::size_t pos = 0;
  for (std::size_t s = 0; s < p.generators(); ++s) {
    std::size_t d = n.dim(p.vertices[s]);
    images.emplace_back(flat.begin() + pos, flat.begin() + pos + d);
    pos += d;
  }
  return from_generators(p, n, images);
}

/// l : P -> W with h l = g, solved generator by generator; throws when g leaves the image of h.
template <class F>
Morphism<F> lift_through(const ProjectiveSum<F>& p, const Morphism<F>& g, const Morphism<F>& h) {
  std::vector<Vector<F>> images;
  for (std::size_t s = 0; s < p.generators(); ++s) {
    auto x = solve(h.at(p.vertices[s]), generator_image(p, g, s));
    if (!x) throw NotConstructible("morphism from a projective does not lift: target outside the image");
    images.push_back(std::move(*x));
  }
  return from_generators(p, h.source(), images);
}

template <class F>
struct ProjectiveCover {
  ProjectiveSum<F> projective;
  Morphism<F> epi;
};

/// Minimal projective cover, generators chosen as standard vectors complementing the radical.
template <class F>
ProjectiveCover<F> projective_cover(const Module<F>& n) {
  const auto& alg = n.algebra();
  const auto& q = alg->quiver();
  const F& f = n.field();
  std::vector<std::size_t> vertices;
  std::vector<Vector<F>> images;
  for (std::size_t v = 0; v < q.vertices; ++v) {
    if (n.dim(v) == 0) continue;
    Matrix<F> rad(f, n.dim(v), 0);
    for (std::size_t a = 0; a < q.arrows.size(); ++a)
      if (q.arrows[a].target == v) rad = hstack(rad, n.arrow(a));
    auto e = rref(hstack(rad, Matrix<F>::identity(f, n.dim(v))));
    for (auto piv : e.pivots) {
      if (piv < rad.cols()) continue;
      Vector<F> x(n.dim(v), f.zero());
      x[piv - rad.cols()] = f.one();
      vertices.push_back(v);
      images.push_back(std::move(x));
    }
  }
  auto p = projective_sum(alg, vertices);
  auto epi = from_generators(p, n, images);
  return {std::move(p), std::move(epi)};
}

/// Minimal projective resolution  ... -> P_1 -> P_0 -> M.
template <class F>
struct Resolution {
  Module<F> module;
  std::vector<ProjectiveSum<F>> terms;   // P_0 .. P_L
  std::vector<Morphism<F>> diffs;        // diffs[k] = d_{k+1} : P_{k+1} -> P_k
  Morphism<F> augmentation;              // P_0 -> M
  std::vector<Module<F>> syzygies;       // syzygies[k] = Omega^k (0: M itself)
  std::vector<Morphism<F>> syzygy_incl;  // Omega^k -> P_{k-1} (k >= 1; slot 0 is id_M)
  std::vector<Morphism<F>> syzygy_epi;   // P_k -> Omega^k
  bool complete = false;                 // some syzygy vanished: terms beyond are zero

  std::size_t computed() const { return terms.size(); }
  /// Projective dimension, when the resolution is complete.
  std::optional<std::size_t> projective_dimension() const {
    if (!complete) return std::nullopt;
    std::size_t len = 0;
    for (std::size_t k = 0; k < terms.size(); ++k)
      if (terms[k].generators()) len = k;
    return len;
  }
  bool covers(std::size_t k) const { return complete || k < terms.size(); }

  ProjectiveSum<F> term(std::size_t k) const {
    if (k < terms.size()) return terms[k];
    if (!complete) throw Error("internal: resolution not computed far enough");
    return projective_sum(module.algebra(), {});
  }
  /// d_k : P_k -> P_{k-1} for k >= 1.
  Morphism<F> d(std::size_t k) const {
    if (k >= 1 && k - 1 < diffs.size()) return diffs[k - 1];
    return Morphism<F>::zero(term(k).module, term(k - 1).module);
  }
  Module<F> syzygy(std::size_t k) const {
    if (k < syzygies.size()) return syzygies[k];
    if (!complete) throw Error("internal: resolution not computed far enough");
    return Module<F>::zero(module.algebra());
  }
};

namespace detail {

template <class F>
std::string module_key(const Module<F>& m) {
  std::ostringstream os;
  os << static_cast<const void*>(m.algebra().get()) << '|';
  for (auto d : m.dims()) os << d << ',';
  for (const auto& a : m.arrows()) {
    os << '|';
    for (const auto& x : a.entries()) os << m.field().to_string(x) << ',';
  }
  return os.str();
}

/// Content key independent of addresses, for the on-disk cache.
template <class F>
std::string portable_key(const Module<F>& m) {
  const auto& alg = *m.algebra();
  std::ostringstream os;
  os << alg.field().name() << ';' << alg.vertex_count() << ';';
  for (const auto& a : alg.quiver().arrows) os << a.source << '>' << a.target << ',';
  os << ';';
  for (const auto& r : alg.relations()) {
    for (const auto& [c, p] : r.terms) {
      os << alg.field().to_string(c) << ':';
      for (auto x : p) os << x << '.';
      os << '+';
    }
    os << '/';
  }
  os << ';';
  for (auto d : m.dims()) os << d << ',';
  for (const auto& a : m.arrows()) {
    os << '|';
    for (const auto& x : a.entries()) os << alg.field().to_string(x) << ',';
  }
  return os.str();
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

template <class F>
void finish_level(Resolution<F>& r, const Module<F>& omega, std::size_t max_terms) {
  // omega is the current syzygy; cover it and push the kernel.
  auto cur = omega;
  while (r.terms.size() < max_terms) {
    auto cov = projective_cover(cur);
    std::size_t k = r.terms.size();
    r.terms.push_back(cov.projective);
    r.syzygy_epi.push_back(cov.epi);
    if (k == 0) {
      r.augmentation = cov.epi;
    } else {
      r.diffs.push_back(r.syzygy_incl[k] * cov.epi);
    }
    auto ker = kernel(cov.epi);
    r.syzygies.push_back(ker.object);
    r.syzygy_incl.push_back(ker.inclusion);
    if (ker.object.is_zero()) {
      r.complete = true;
      return;
    }
    cur = ker.object;
  }
}

template <class F>
std::shared_ptr<Resolution<F>> compute_resolution(const Module<F>& m, std::size_t max_terms) {
  auto r = std::make_shared<Resolution<F>>(Resolution<F>{m, {}, {}, Morphism<F>::identity(m), {m}, {Morphism<F>::identity(m)}, {}, false});
  if (m.is_zero()) {
    r->complete = true;
    r->augmentation = Morphism<F>::zero(projective_sum(m.algebra(), {}).module, m);
    return r;
  }
  finish_level(*r, m, max_terms);
  return r;
}

template <class F>
nlohmann::json resolution_to_json(const Resolution<F>& r, const std::string& key) {
  nlohmann::json j;
  j["key"] = key;
  j["complete"] = r.complete;
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t k = 0; k < r.terms.size(); ++k) {
    nlohmann::json lvl;
    lvl["vertices"] = r.terms[k].vertices;
    const auto& g = k == 0 ? r.augmentation : r.diffs[k - 1];
    nlohmann::json imgs = nlohmann::json::array();
    for (std::size_t s = 0; s < r.terms[k].generators(); ++s) {
      nlohmann::json v = nlohmann::json::array();
      for (const auto& x : generator_image(r.terms[k], g, s)) v.push_back(r.module.field().to_string(x));
      imgs.push_back(v);
    }
    lvl["images"] = imgs;
    levels.push_back(lvl);
  }
  j["levels"] = levels;
  return j;
}

template <class F>
std::shared_ptr<Resolution<F>> resolution_from_json(const Module<F>& m, const nlohmann::json& j) {
  const F& f = m.field();
  auto r = std::make_shared<Resolution<F>>(Resolution<F>{m, {}, {}, Morphism<F>::identity(m), {m}, {Morphism<F>::identity(m)}, {}, false});
  Module<F> target = m;
  for (const auto& lvl : j.at("levels")) {
    auto p = projective_sum(m.algebra(), lvl.at("vertices").get<std::vector<std::size_t>>());
    std::vector<Vector<F>> images;
    for (const auto& v : lvl.at("images")) {
      Vector<F> x;
      for (const auto& e : v) x.push_back(f.parse(e.get<std::string>()));
      images.push_back(std::move(x));
    }
    std::size_t k = r->terms.size();
    auto g = from_generators(p, target, images);
    r->terms.push_back(p);
    Morphism<F> epi = k == 0 ? g : factor_through_mono(g, r->syzygy_incl[k]);
    if (k == 0) {
      r->augmentation = g;
    } else {
      r->diffs.push_back(g);
    }
    r->syzygy_epi.push_back(epi);
    auto ker = kernel(epi);
    r->syzygies.push_back(ker.object);
    r->syzygy_incl.push_back(ker.inclusion);
    target = p.module;
  }
  r->complete = j.at("complete").get<bool>();
  return r;
}

}  // namespace detail

/// Process-wide cache of resolutions: concurrent readers, serialized writers.
/// With NZEXT_CACHE_DIR set, resolutions are also persisted as JSON.
template <class F>
class ResolutionCache {
 public:
  static ResolutionCache& instance() {
    static ResolutionCache cache;
    return cache;
  }

  /// Resolution with at least `terms` computed terms (or complete).
  std::shared_ptr<const Resolution<F>> get(const Module<F>& m, std::size_t terms) {
    auto key = detail::module_key(m);
    {
      std::shared_lock lock(mutex_);
      auto it = entries_.find(key);
      if (it != entries_.end() && (it->second->complete || it->second->computed() >= terms)) return it->second;
    }
    std::size_t want = std::max<std::size_t>(terms, 4);
    std::shared_ptr<Resolution<F>> r;
    auto disk = disk_path(m);
    if (disk) r = load(m, *disk, want);
    if (!r) {
      r = detail::compute_resolution(m, want);
      if (disk) store(*r, m, *disk);
    }
    std::unique_lock lock(mutex_);
    if (entries_.size() > kMaxEntries) entries_.clear();
    auto& slot = entries_[key];
    if (!slot || (!slot->complete && slot->computed() < r->computed())) slot = r;
    return slot;
  }

  void clear() {
    std::unique_lock lock(mutex_);
    entries_.clear();
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }

 private:
  static constexpr std::size_t kMaxEntries = 50000;

  static std::optional<std::filesystem::path> disk_path(const Module<F>& m) {
    const char* dir = std::getenv("NZEXT_CACHE_DIR");
    if (!dir || !*dir) return std::nullopt;
    auto key = detail::portable_key(m);
    std::ostringstream name;
    name << std::hex << detail::fnv1a(key) << ".json";
    return std::filesystem::path(dir) / name.str();
  }

  static std::shared_ptr<Resolution<F>> load(const Module<F>& m, const std::filesystem::path& p, std::size_t want) {
    std::ifstream in(p);
    if (!in) return nullptr;
    try {
      auto j = nlohmann::json::parse(in);
      if (j.at("key").get<std::string>() != detail::portable_key(m)) return nullptr;
      auto r = detail::resolution_from_json(m, j);
      if (!r->complete && r->computed() < want) return nullptr;
      return r;
    } catch (const std::exception&) {
      return nullptr;
    }
  }

  static void store(const Resolution<F>& r, const Module<F>& m, const std::filesystem::path& p) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    auto tmp = p;
    tmp += ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(&r));
    {
      std::ofstream out(tmp);
      if (!out) return;
      out << detail::resolution_to_json(r, detail::portable_key(m)).dump();
    }
    std::filesystem::rename(tmp, p, ec);
  }

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const Resolution<F>>> entries_;
};

/// Minimal projective resolution with at least `length + 1` terms P_0 .. P_length.
template <class F>
std::shared_ptr<const Resolution<F>> projective_resolution(const Module<F>& m, std::size_t length) {
  return ResolutionCache<F>::instance().get(m, length + 1);
}

/// The augmented complex  P_L -> ... -> P_0 -> M  with P_k in degree -k and M in degree 1.
template <class F>
Complex<F> resolution_complex(const Resolution<F>& r, std::size_t length) {
  std::vector<Module<F>> terms;
  std::vector<Morphism<F>> diffs;
  for (std::size_t k = length + 1; k-- > 0;) terms.push_back(r.term(k).module);
  terms.push_back(r.module);
  for (std::size_t k = length; k >= 1; --k) diffs.push_back(r.d(k));
  diffs.push_back(r.augmentation);
  return Complex<F>(-static_cast<int>(length), std::move(terms), std::move(diffs));
}

/// Projective dimension if it is at most `cap`.
template <class F>
std::optional<std::size_t> projective_dimension(const Module<F>& m, std::size_t cap = 64) {
  auto r = projective_resolution(m, cap + 1);
  return r->projective_dimension();
}

/// Global dimension as the maximal projective dimension of the simples, if at most `cap`.
template <class F>
std::optional<std::size_t> global_dimension(const AlgebraPtr<F>& alg, std::size_t cap = 64) {
  std::size_t g = 0;
  for (std::size_t v = 0; v < alg->vertex_count(); ++v) {
    auto pd = projective_dimension(simple(alg, v), cap);
    if (!pd) return std::nullopt;
    g = std::max(g, *pd);
  }
  return g;
}

}  // namespace nzext
