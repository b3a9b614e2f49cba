#pragma once

// JSON forms of scalars, matrices, modules, complexes and Ext classes.
// Prime field entries are written as integers, rationals as strings.

#include <string>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

#include "nzext/ext.hpp"

namespace nzext::io {

using nlohmann::json;

template <class F>
json scalar_json(const F& f, const typename F::value_type& x) {
  if constexpr (std::is_same_v<F, PrimeField>) {
    return static_cast<std::int64_t>(x);
  } else {
    return f.to_string(x);
  }
}

template <class F>
json matrix_json(const Matrix<F>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(scalar_json(m.field(), m(i, k)));
    rows.push_back(r);
  }
  return rows;
}


template <class F>
json module_json(const Module<F>& m, const std::vector<Module<F>>* catalog = nullptr) {
  json arrows = json::array();
  for (const auto& a : m.arrows()) arrows.push_back(matrix_json(a));
  json j{{"name", m.name()}, {"dims", m.dims()}, {"arrows", arrows}};
  if (catalog && !catalog->empty()) j["iso"] = iso_label(m, *catalog);
  return j;
}

template <class F>
json morphism_json(const Morphism<F>& f) {
  json c = json::array();
  for (const auto& m : f.components()) c.push_back(matrix_json(m));
  return c;
}

template <class F>
json complex_json(const Complex<F>& x, const std::vector<Module<F>>* catalog = nullptr) {
  json terms = json::array(), maps = json::array();
  for (const auto& t : x.terms()) terms.push_back(module_json(t, catalog));
  for (const auto& d : x.diffs()) maps.push_back(morphism_json(d));
  return {{"terms", terms}, {"maps", maps}};
}

template <class F>
json class_json(const ExtClass<F>& c, const std::vector<Module<F>>* catalog = nullptr) {
  json coords = json::array();
  for (const auto& x : c.coords) coords.push_back(scalar_json(c.group->field(), x));
  auto label = [&](const Module<F>& m) { return catalog && !catalog->empty() ? iso_label(m, *catalog) : m.name(); };
  return {{"degree", c.degree()}, {"source", label(c.group->source())}, {"target", label(c.group->target())}, {"dim", c.group->dim()},
          {"coordinates", coords}, {"zero", c.is_zero()}};
}

}  // namespace nzext::io
