#pragma once

#include <nilsplit/nilsplit.hpp>

#include "oracle.hpp"

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilsplit::testing {

inline LieAlgebraSpec catalog_spec(const std::string& name) {
  auto doc = find_in_catalog(name);
  if (!doc) throw std::invalid_argument("no catalog entry " + name);
  return doc->spec;
}

inline CEModel catalog_model(const std::string& name) { return ce_model(catalog_spec(name)); }

/// The omega stored with a catalog entry.
inline SymplecticForm catalog_form(const CEModel& ce) {
  auto doc = find_in_catalog(ce.spec.name);
  if (!doc || !doc->omega) throw std::invalid_argument("no stored form for " + ce.spec.name);
  return SymplecticForm::from_coefficients(ce, doc->omega_coefficients());
}

inline const std::vector<std::string>& symplectic_catalog() {
  static const std::vector<std::string> names{"torus2",     "torus4",        "torus6",   "kodaira-thurston",
                                              "nil6-12-13", "nil6-12-13-23", "filiform6"};
  return names;
}

inline std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& e : catalog()) out.push_back(e.document.spec.name);
  return out;
}

inline std::vector<oracle::RawBracket> raw_brackets(const LieAlgebraSpec& spec) {
  std::vector<oracle::RawBracket> out;
  for (const auto& b : spec.brackets) out.push_back({b.i, b.j, b.k, b.c});
  return out;
}

inline RationalMatrix column(std::initializer_list<int> entries) {
  RationalMatrix m(entries.size(), 1);
  std::size_t k = 0;
  for (int e : entries) m(k++, 0) = e;
  return m;
}

inline std::vector<std::size_t> sizes(std::initializer_list<std::size_t> v) { return v; }

inline Rational frac(long num, long den) {
  Rational q{mpz_class(num), mpz_class(den)};
  q.canonicalize();
  return q;
}

/// Random element: up to `terms` monomials of random degree-k normal form with small coefficients.
inline Element random_homogeneous(const GeneratorsPtr& gens, int k, std::mt19937_64& rng, int terms = 3) {
  const auto basis = degree_basis(*gens, k);
  Element e(gens);
  if (basis.empty()) return e;
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int t = 0; t < terms; ++t) e.add_term(basis[pick(rng)], frac(coeff(rng), 1 + std::abs(coeff(rng))));
  return e;
}

}  // namespace nilsplit::testing
