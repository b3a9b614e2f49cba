#pragma once

// Reading algebra / subcategory / extension specs (TOML or JSON) and writing
// modules, sequences and classes as JSON.
//
// Algebra:       field = "GF(3)" | "Q";  nakayama = [m, l]  or  vertices, arrows, relations
//                arrows    = [{name = "a", source = 1, target = 2}, ...]   (1-based vertices)
//                relations = ["a*b", "a*b - 2 c*d", ...]  or  [[{coefficient, path = [..]}], ...]
// Subcategory:   members = ["P1", "S3", ...]  plus optional [[modules]] with name, dims, arrows
// A certificate is accepted as both: its algebra, subcategory and modules keys are read back.
// Extension:     terms = [..]  with optional maps = [[matrix per vertex], ...];  a missing map is
//                the unique morphism up to scalars.  Alternatively  resolution = "S1", degree = 4.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>
#include <toml.hpp>

#include "nzext/nzext.hpp"
#include "nzext/serialize.hpp"

namespace nzext::io {

using nlohmann::json;

/// Parses a .toml file through toml++ and re-reads it as JSON; anything else is parsed as JSON.
inline json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  if (path.ends_with(".toml")) {
    try {
      auto tbl = toml::parse_file(path);
      std::ostringstream os;
      os << toml::json_formatter{tbl};
      return json::parse(os.str());
    } catch (const toml::parse_error& e) {
      const auto& b = e.source().begin;
      throw InputError(path + ":" + std::to_string(b.line) + ":" + std::to_string(b.column) + ": " + std::string(e.description()));
    }
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

using AnyField = std::variant<PrimeField, RationalField>;

inline AnyField field_from_json(const json& doc) {
  std::string f = doc.value("field", "GF(2)");
  if (f == "Q") return RationalField{};
  if (f.starts_with("GF(") && f.ends_with(")")) {
    try {
      return PrimeField(std::stoull(f.substr(3, f.size() - 4)));
    } catch (const std::logic_error&) {
    }
  }
  throw InputError("unknown field '" + f + "' (expected GF(p) or Q)");
}

namespace detail {

template <class F>
typename F::value_type scalar(const F& f, const json& v) {
  if (v.is_number_integer()) return f.from_int(v.get<std::int64_t>());
  if (v.is_string()) return f.parse(v.get<std::string>());
  throw InputError("bad scalar " + v.dump());
}


inline const json& require(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw InputError(what + ": missing '" + key + "'");
  return j.at(key);
}

/// "2 a*b - c*d" as (coefficient, path) terms.
template <class F>
Relation<F> parse_relation(const F& f, const Quiver& q, const std::string& text) {
  Relation<F> r;
  std::string s;
  for (char c : text) {
    if (c == '+' || c == '-') s += ' ';
    s += c;
    if (c == '+' || c == '-') s += ' ';
  }
  std::istringstream is(s);
  std::string tok;
  bool negative = false;
  std::string coeff;
  auto flush_path = [&](const std::string& word) {
    Path p;
    std::string name;
    std::istringstream ps(word);
    while (std::getline(ps, name, '*')) {
      auto a = q.arrow_index(name);
      if (!a) throw InputError("relation '" + text + "': unknown arrow '" + name + "'");
      p.push_back(*a);
    }
    auto c = coeff.empty() ? f.one() : f.parse(coeff);
    if (negative) c = f.neg(c);
    r.terms.push_back({c, p});
    negative = false;
    coeff.clear();
  };
  while (is >> tok) {
    if (tok == "+") continue;
    if (tok == "-") {
      negative = !negative;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(tok[0])) && tok.find('*') == std::string::npos && !q.arrow_index(tok)) {
      coeff = tok;
      continue;
    }
    flush_path(tok);
  }
  if (r.terms.empty()) throw InputError("empty relation '" + text + "'");
  return r;
}

}  // namespace detail

template <class F>
AlgebraPtr<F> algebra_from_json(const F& f, const json& doc) {
  if (doc.contains("algebra") && doc.at("algebra").is_object()) return algebra_from_json(f, doc.at("algebra"));
  if (doc.contains("nakayama") && !doc.contains("vertices")) {
    const auto& n = doc.at("nakayama");
    if (!n.is_array() || n.size() != 2) throw InputError("nakayama must be [m, l]");
    return nakayama(n[0].get<std::size_t>(), n[1].get<std::size_t>(), f);
  }
  Quiver q;
  q.vertices = detail::require(doc, "vertices", "algebra").get<std::size_t>();
  for (const auto& a : doc.value("arrows", json::array())) {
    auto s = detail::require(a, "source", "arrow").get<std::size_t>();
    auto t = detail::require(a, "target", "arrow").get<std::size_t>();
    if (s == 0 || t == 0) throw InputError("arrow endpoints are 1-based");
    q.arrows.push_back({s - 1, t - 1, detail::require(a, "name", "arrow").get<std::string>()});
  }
  q.validate();
  std::vector<Relation<F>> rels;
  for (const auto& r : doc.value("relations", json::array())) {
    if (r.is_string()) {
      rels.push_back(detail::parse_relation(f, q, r.get<std::string>()));
      continue;
    }
    Relation<F> rel;
    for (const auto& t : r) {
      Path p;
      for (const auto& name : detail::require(t, "path", "relation term")) {
        auto a = q.arrow_index(name.get<std::string>());
        if (!a) throw InputError("unknown arrow '" + name.get<std::string>() + "' in relation");
        p.push_back(*a);
      }
      rel.terms.push_back({detail::scalar(f, t.value("coefficient", json(1))), p});
    }
    rels.push_back(std::move(rel));
  }
  return build_algebra(q, f, rels);
}

template <class F>
Matrix<F> matrix_from_json(const F& f, const json& j, std::size_t rows, std::size_t cols, const std::string& what) {
  Matrix<F> m(f, rows, cols);
  if (j.is_array() && j.empty()) {
    if (rows && cols) throw InputError(what + ": empty matrix, expected " + std::to_string(rows) + "x" + std::to_string(cols));
    return m;
  }
  if (!j.is_array() || j.size() != rows) throw InputError(what + ": expected " + std::to_string(rows) + " rows");
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw InputError(what + ": expected " + std::to_string(cols) + " columns in row " + std::to_string(i + 1));
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = detail::scalar(f, j[i][k]);
  }
  return m;
}


template <class F>
Module<F> module_from_json(const AlgebraPtr<F>& alg, const json& j) {
  std::string name = j.value("name", "");
  auto dims = detail::require(j, "dims", "module " + name).get<std::vector<std::size_t>>();
  if (dims.size() != alg->vertex_count()) throw InputError("module " + name + ": dims needs one entry per vertex");
  const auto& q = alg->quiver();
  const auto& arr = detail::require(j, "arrows", "module " + name);
  if (!arr.is_array() || arr.size() != q.arrows.size()) throw InputError("module " + name + ": arrows needs one matrix per arrow");
  std::vector<Matrix<F>> mats;
  for (std::size_t a = 0; a < q.arrows.size(); ++a) {
    mats.push_back(matrix_from_json(alg->field(), arr[a], dims[q.arrows[a].target], dims[q.arrows[a].source],
                                    "module " + name + ", arrow " + q.arrows[a].name));
  }
  return Module<F>(alg, dims, std::move(mats), name);
}





/// Modules addressable by name: the catalog of indecomposables and any [[modules]] of the document.
template <class F>
class ModuleTable {
 public:
  ModuleTable(const AlgebraPtr<F>& alg, const json& doc) : alg_(alg) {
    for (const auto& j : doc.value("modules", json::array())) extra_.push_back(module_from_json(alg, j));
  }

  Module<F> get(const json& ref) {
    if (ref.is_object()) return module_from_json(alg_, ref);
    if (!ref.is_string()) throw InputError("module reference must be a name or an inline table, got " + ref.dump());
    auto name = ref.get<std::string>();
    if (name == "0") return Module<F>::zero(alg_);
    for (const auto& m : extra_)
      if (m.name() == name) return m;
    if (!catalog_) catalog_ = catalog_or_empty(alg_);
    for (const auto& m : *catalog_)
      if (m.name() == name) return m;
    throw InputError("unknown module '" + name + "'");
  }

  const std::vector<Module<F>>& extra() const { return extra_; }

 private:
  AlgebraPtr<F> alg_;
  std::vector<Module<F>> extra_;
  std::optional<std::vector<Module<F>>> catalog_;
};

template <class F>
Subcategory<F> subcategory_from_json(const AlgebraPtr<F>& alg, const json& doc) {
  ModuleTable<F> table(alg, doc);
  std::vector<Module<F>> mods;
  const auto& list = doc.contains("members") || !doc.contains("subcategory") ? detail::require(doc, "members", "subcategory") : doc.at("subcategory");
  for (const auto& r : list) mods.push_back(table.get(r));
  if (mods.empty()) throw InputError("subcategory has no members");
  return Subcategory<F>(alg, std::move(mods));
}

template <class F>
Complex<F> extension_from_json(const AlgebraPtr<F>& alg, const json& doc) {
  ModuleTable<F> table(alg, doc);
  if (doc.contains("resolution")) {
    auto m = table.get(doc.at("resolution"));
    auto d = detail::require(doc, "degree", "extension").get<std::size_t>();
    if (d == 0) throw InputError("degree must be positive");
    auto res = projective_resolution(m, d + 1);
    std::vector<Morphism<F>> maps{res->augmentation};
    for (std::size_t k = 1; k < d; ++k) maps.push_back(res->d(k));
    auto omega = res->syzygy(d);
    auto incl = d < res->syzygy_incl.size() ? res->syzygy_incl[d] : Morphism<F>::zero(omega, res->term(d - 1).module);
    maps.push_back(incl);
    std::reverse(maps.begin(), maps.end());
    return Complex<F>::from_maps(maps);
  }
  std::vector<Module<F>> terms;
  for (const auto& r : detail::require(doc, "terms", "extension")) terms.push_back(table.get(r));
  if (terms.size() < 2) throw InputError("an extension needs at least two terms");
  json maps = doc.value("maps", json::array());
  if (!maps.empty() && maps.size() + 1 != terms.size()) throw InputError("maps needs one entry per consecutive pair of terms");
  std::vector<Morphism<F>> diffs;
  for (std::size_t k = 0; k + 1 < terms.size(); ++k) {
    const auto& s = terms[k];
    const auto& t = terms[k + 1];
    if (!maps.empty() && !maps[k].is_null() && !(maps[k].is_string() && maps[k] == "auto")) {
      const auto& comp = maps[k];
      if (!comp.is_array() || comp.size() != alg->vertex_count()) throw InputError("map " + std::to_string(k) + " needs one matrix per vertex");
      std::vector<Matrix<F>> c;
      for (std::size_t v = 0; v < alg->vertex_count(); ++v)
        c.push_back(matrix_from_json(alg->field(), comp[v], t.dim(v), s.dim(v), "map " + std::to_string(k) + ", vertex " + std::to_string(v + 1)));
      try {
        diffs.emplace_back(s, t, std::move(c));
      } catch (const Error& e) {
        throw InputError("map " + std::to_string(k) + " is not a module morphism: " + e.what());
      }
      continue;
    }
    auto basis = hom_basis(s, t);
    if (basis.size() > 1) throw InputError("map " + std::to_string(k) + " (" + s.name() + " -> " + t.name() + ") is ambiguous; give its matrices");
    diffs.push_back(basis.empty() ? Morphism<F>::zero(s, t) : basis.front());
  }
  return Complex<F>(0, std::move(terms), std::move(diffs));
}



}  // namespace nzext::io
