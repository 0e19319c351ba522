#pragma once

// Built-in nilpotent Lie algebras. Six-dimensional entries are named by their
// differentials in the usual notation, e.g. (0,0,0,0,12,13) means
// de5 = e12, de6 = e13 up to the sign convention of the CE model.

#include <nilsplit/document.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nilsplit {

struct CatalogEntry {
  AlgebraDocument document;
  std::string description;
};

namespace detail {

inline AlgebraDocument make_doc(std::string name, int dim, std::vector<std::tuple<int, int, int>> brackets,
                                std::optional<std::vector<std::tuple<int, int, int>>> omega) {
  AlgebraDocument doc;
  doc.spec.name = std::move(name);
  doc.spec.dim = dim;
  for (auto [i, j, k] : brackets) doc.spec.brackets.push_back({i, j, k, Rational(1)});
  if (omega) {
    doc.omega.emplace();
    for (auto [i, j, c] : *omega) doc.omega->push_back({i, j, Rational(c)});
  }
  return doc;
}

inline AlgebraDocument torus(int dim) {
  std::vector<std::tuple<int, int, int>> omega;
  for (int i = 1; i < dim; i += 2) omega.emplace_back(i, i + 1, 1);
  return make_doc("torus" + std::to_string(dim), dim, {}, omega);
}

}  // namespace detail

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    using detail::make_doc;
    std::vector<CatalogEntry> v;
    v.push_back({detail::torus(2), "abelian R^2 (torus T^2)"});
    v.push_back({detail::torus(4), "abelian R^4 (torus T^4)"});
    v.push_back({detail::torus(6), "abelian R^6 (torus T^6)"});
    v.push_back({make_doc("heisenberg3", 3, {{1, 2, 3}}, std::nullopt), "Heisenberg algebra h3"});
    v.push_back({make_doc("kodaira-thurston", 4, {{1, 2, 3}}, {{{1, 4, 1}, {2, 3, 1}}}),
                 "h3 + R, the Kodaira-Thurston manifold"});
    v.push_back({make_doc("heisenberg5-r", 6, {{1, 2, 5}, {3, 4, 5}}, std::nullopt),
                 "h5 + R, (0,0,0,0,12+34,0); carries no symplectic form"});
    v.push_back({make_doc("nil6-12-13", 6, {{1, 2, 5}, {1, 3, 6}}, {{{1, 6, 1}, {2, 5, 1}, {3, 4, 1}}}),
                 "(0,0,0,0,12,13)"});
    v.push_back({make_doc("nil6-12-13-23", 6, {{1, 2, 4}, {1, 3, 5}, {2, 3, 6}},
                          {{{1, 6, 1}, {2, 5, 2}, {3, 4, 1}}}),
                 "(0,0,0,12,13,23), free 2-step nilpotent on three generators"});
    v.push_back({make_doc("filiform6", 6, {{1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 6}},
                          {{{1, 6, 1}, {2, 5, 1}, {3, 4, -1}}}),
                 "(0,0,12,13,14,15), six-dimensional filiform"});
    return v;
  }();
  return entries;
}

inline std::optional<AlgebraDocument> find_in_catalog(std::string_view name) {
  for (const auto& e : catalog())
    if (e.document.spec.name == name) return e.document;
  return std::nullopt;
}

}  // namespace nilsplit
