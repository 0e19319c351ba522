#pragma once

// AlgebraDocument: the on-disk form of a nilpotent Lie algebra, optionally with
// a candidate symplectic form.
//
//   {
//     "name": "kodaira-thurston",
//     "dim": 4,
//     "brackets": [ {"i": 1, "j": 2, "k": 3, "c": "1"} ],
//     "omega":    [ {"i": 1, "j": 4, "c": "1"}, {"i": 2, "j": 3, "c": "1"} ]
//   }
//
// Indices are 1-based; coefficients are rational strings. Unknown keys are rejected.

#include <nilsplit/lie.hpp>
#include <nilsplit/rational.hpp>

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace nilsplit {

struct FormEntry {
  int i = 0;
  int j = 0;
  Rational c;

  bool operator==(const FormEntry&) const = default;
};

struct AlgebraDocument {
  LieAlgebraSpec spec;
  std::optional<std::vector<FormEntry>> omega;

  bool operator==(const AlgebraDocument&) const = default;

  std::vector<std::tuple<int, int, Rational>> omega_coefficients() const {
    std::vector<std::tuple<int, int, Rational>> out;
    if (omega)
      for (const auto& e : *omega) out.emplace_back(e.i, e.j, e.c);
    return out;
  }
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t p = 0; p < byte && p < text.size(); ++p) {
    if (text[p] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline void require_keys(const nlohmann::json& obj, const std::string& where, const std::set<std::string>& required,
                         const std::set<std::string>& optional_keys = {}) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [key, value] : obj.items())
    if (!required.contains(key) && !optional_keys.contains(key)) throw ParseError(where + ": unknown field \"" + key + "\"");
  for (const auto& key : required)
    if (!obj.contains(key)) throw ParseError(where + ": missing field \"" + key + "\"");
}

inline int read_int(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError(where + ": expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < -1'000'000 || x > 1'000'000) throw ParseError(where + ": integer out of range");
  return static_cast<int>(x);
}

inline Rational read_rational(const nlohmann::json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where + ": expected a rational string such as \"-1/2\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

}  // namespace detail

/// Strict parse; every failure is a ParseError naming the line/column or field.
inline AlgebraDocument parse_document(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = detail::line_and_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed document");
  }
  detail::require_keys(root, "document", {"dim", "brackets"}, {"name", "omega"});

  AlgebraDocument doc;
  if (root.contains("name")) {
    if (!root["name"].is_string()) throw ParseError("name: expected a string");
    doc.spec.name = root["name"].get<std::string>();
  }
  doc.spec.dim = detail::read_int(root["dim"], "dim");
  if (doc.spec.dim < 1) throw ParseError("dim: must be positive");

  const auto& brackets = root["brackets"];
  if (!brackets.is_array()) throw ParseError("brackets: expected a list");
  for (std::size_t n = 0; n < brackets.size(); ++n) {
    const std::string where = "brackets[" + std::to_string(n) + "]";
    detail::require_keys(brackets[n], where, {"i", "j", "k", "c"});
    doc.spec.brackets.push_back({detail::read_int(brackets[n]["i"], where + ".i"),
                                 detail::read_int(brackets[n]["j"], where + ".j"),
                                 detail::read_int(brackets[n]["k"], where + ".k"),
                                 detail::read_rational(brackets[n]["c"], where + ".c")});
  }
  try {
    check_well_formed(doc.spec);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("brackets: ") + e.what());
  }

  if (root.contains("omega")) {
    const auto& omega = root["omega"];
    if (!omega.is_array()) throw ParseError("omega: expected a list");
    std::vector<FormEntry> entries;
    std::set<std::pair<int, int>> seen;
    for (std::size_t n = 0; n < omega.size(); ++n) {
      const std::string where = "omega[" + std::to_string(n) + "]";
      detail::require_keys(omega[n], where, {"i", "j", "c"});
      FormEntry e{detail::read_int(omega[n]["i"], where + ".i"), detail::read_int(omega[n]["j"], where + ".j"),
                  detail::read_rational(omega[n]["c"], where + ".c")};
      if (e.i < 1 || e.i >= e.j || e.j > doc.spec.dim)
        throw ParseError(where + ": indices must satisfy 1 <= i < j <= dim");
      if (!seen.insert({e.i, e.j}).second) throw ParseError(where + ": pair given twice");
      entries.push_back(std::move(e));
    }
    doc.omega = std::move(entries);
  }
  return doc;
}

inline nlohmann::ordered_json to_json(const AlgebraDocument& doc) {
  nlohmann::ordered_json j;
  j["name"] = doc.spec.name;
  j["dim"] = doc.spec.dim;
  j["brackets"] = nlohmann::ordered_json::array();
  for (const auto& b : doc.spec.brackets)
    j["brackets"].push_back({{"i", b.i}, {"j", b.j}, {"k", b.k}, {"c", to_string(b.c)}});
  if (doc.omega) {
    j["omega"] = nlohmann::ordered_json::array();
    for (const auto& e : *doc.omega) j["omega"].push_back({{"i", e.i}, {"j", e.j}, {"c", to_string(e.c)}});
  }
  return j;
}

inline std::string emit_document(const AlgebraDocument& doc) { return to_json(doc).dump(2) + "\n"; }

/// 64-bit FNV-1a of the compact canonical serialization, as 16 hex digits.
inline std::string document_digest(const AlgebraDocument& doc) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(doc).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nilsplit
