#pragma once

// The `nilsplit` command-line driver. Kept in a header so tests can run
// subcommands in-process against string streams.

#include <nilsplit/catalog.hpp>
#include <nilsplit/cohomology.hpp>
#include <nilsplit/document.hpp>
#include <nilsplit/lie.hpp>
#include <nilsplit/symplectic.hpp>
#include <nilsplit/twisted.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace nilsplit::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kNoSymplectic = 3,
  kInvalidTwist = 4,
  kSearchExhausted = 5,
};

using Json = nlohmann::ordered_json;

struct Options {
  std::string input;
  std::string format = "human";
  std::uint64_t seed = 1;
  std::optional<int> max_degree;
  bool omega_from_file = false;
  std::string base = "s2";
  std::string alpha = "solve";
  bool list = false;
  std::string emit;
};

/// A path, "catalog:<name>", or a bare catalog name when no such file exists.
inline AlgebraDocument load_input(const std::string& input) {
  constexpr std::string_view prefix = "catalog:";
  if (input.starts_with(prefix)) {
    auto doc = find_in_catalog(input.substr(prefix.size()));
    if (!doc) throw ParseError("unknown catalog entry \"" + input.substr(prefix.size()) + "\"");
    return *doc;
  }
  if (std::filesystem::is_regular_file(input)) {
    std::ifstream in(input, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      return parse_document(buf.str());
    } catch (const ParseError& e) {
      throw ParseError(input + ": " + e.what());
    }
  }
  if (auto doc = find_in_catalog(input)) return *doc;
  throw ParseError("no such file or catalog entry: " + input);
}

inline Json rationals(const RationalVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

inline Json counts(const std::vector<std::size_t>& v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

/// Columns of an alpha matrix, each listing the coefficients on x1..xn.
inline Json alpha_columns(const RationalMatrix& alpha) {
  Json a = Json::array();
  for (std::size_t j = 0; j < alpha.cols(); ++j) a.push_back(rationals(alpha.column(j)));
  return a;
}

inline Json form_json(const SymplecticForm& sf) {
  Json a = Json::array();
  for (const auto& [i, j, c] : sf.coefficients()) a.push_back({{"i", i}, {"j", j}, {"c", to_string(c)}});
  return a;
}

inline Json validation_json(const ValidationReport& r) {
  Json failures = Json::array();
  for (const auto& f : r.jacobi_failures)
    failures.push_back({{"triple", {f.i, f.j, f.l}}, {"value", rationals(f.value)}});
  Json j;
  j["valid"] = r.ok();
  j["jacobi"] = r.jacobi();
  j["jacobi_failures"] = failures;
  j["nilpotent"] = r.nilpotent;
  j["nilpotency_class"] = r.nilpotency_class ? Json(*r.nilpotency_class) : Json(nullptr);
  j["lower_central_series"] = counts(r.lower_central_dims);
  j["derived_dim"] = r.derived_dim;
  return j;
}

inline Json certificate_json(const SymplecticCertificate& c) {
  Json j;
  j["symplectic"] = c.symplectic();
  j["even_dimension"] = c.even_dimension;
  j["closed"] = c.closed;
  j["d_omega"] = c.d_omega.to_string();
  j["rank"] = c.rank;
  j["nondegenerate"] = c.nondegenerate;
  j["kernel_witness"] = c.kernel_witness ? rationals(*c.kernel_witness) : Json(nullptr);
  return j;
}

inline Json lefschetz_json(const std::vector<LefschetzStep>& steps) {
  Json a = Json::array();
  for (const auto& s : steps)
    a.push_back({{"k", s.k},
                 {"source_dim", s.source_dim},
                 {"target_dim", s.target_dim},
                 {"rank", s.rank},
                 {"isomorphism", s.isomorphism}});
  return a;
}

namespace detail {

inline bool is_flat(const Json& v) {
  if (v.is_primitive()) return true;
  if (!v.is_array()) return false;
  for (const auto& x : v)
    if (!x.is_primitive() && !(x.is_array() && is_flat(x) && !x.empty() && x.front().is_primitive())) return false;
  return true;
}

inline std::string inline_value(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  if (v.is_array()) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + inline_value(v[i]);
    return s + ")";
  }
  return v.dump();
}

inline void render(const Json& v, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (v.is_object()) {
    for (const auto& [key, value] : v.items()) {
      if (is_flat(value)) {
        out << pad << key << ": " << inline_value(value) << "\n";
      } else {
        out << pad << key << ":\n";
        render(value, out, indent + 2);
      }
    }
  } else if (v.is_array()) {
    for (const auto& item : v) {
      if (item.is_object()) {
        std::ostringstream inner;
        render(item, inner, 0);
        std::string text = inner.str();
        std::istringstream lines(text);
        std::string line;
        bool first = true;
        while (std::getline(lines, line)) {
          out << pad << (first ? "- " : "  ") << line << "\n";
          first = false;
        }
      } else {
        out << pad << "- " << inline_value(item) << "\n";
      }
    }
  } else {
    out << pad << inline_value(v) << "\n";
  }
}

}  // namespace detail

inline void print_report(const Json& report, const Options& opt, std::ostream& out) {
  if (opt.format == "machine") {
    out << report.dump(2) << "\n";
  } else {
    detail::render(report, out, 0);
  }
}

inline Json report_header(const std::string& command, const AlgebraDocument& doc, const Options& opt) {
  Json j;
  j["tool"] = "nilsplit";
  j["version"] = kVersion;
  j["command"] = command;
  j["input"] = {{"name", doc.spec.name}, {"dim", doc.spec.dim}, {"digest", document_digest(doc)}};
  j["seed"] = opt.seed;
  return j;
}

inline BaseModel parse_base(const std::string& text) {
  if (text == "s2") return BaseModel::sphere();
  constexpr std::string_view prefix = "formal:";
  if (text.starts_with(prefix)) {
    const std::string m = text.substr(prefix.size());
    if (!m.empty() && m.find_first_not_of("0123456789") == std::string::npos && m.size() < 4 && std::stoi(m) >= 1)
      return BaseModel::formal_even(std::stoi(m));
  }
  throw ParseError("--base must be s2 or formal:<m> with m >= 1, got \"" + text + "\"");
}

/// Columns separated by ';', entries by ','. "1,0" is a single column (x1 -> 1, x2 -> 0).
inline RationalMatrix parse_alpha(const std::string& text, std::size_t rows, std::size_t cols) {
  std::vector<std::vector<Rational>> columns;
  std::stringstream all(text);
  std::string column;
  while (std::getline(all, column, ';')) {
    std::vector<Rational> entries;
    std::stringstream cs(column);
    std::string entry;
    while (std::getline(cs, entry, ',')) entries.push_back(parse_rational(entry));
    columns.push_back(std::move(entries));
  }
  if (columns.size() != cols)
    throw ParseError("--alpha needs " + std::to_string(cols) + " column(s), got " + std::to_string(columns.size()));
  RationalMatrix alpha(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    if (columns[j].size() != rows)
      throw ParseError("--alpha column " + std::to_string(j + 1) + " needs " + std::to_string(rows) + " entries");
    for (std::size_t k = 0; k < rows; ++k) alpha(k, j) = columns[j][k];
  }
  return alpha;
}

inline int cmd_validate(const AlgebraDocument& doc, const Options& opt, std::ostream& out) {
  Json report = report_header("validate", doc, opt);
  const auto v = validate(doc.spec);
  report["validation"] = validation_json(v);
  print_report(report, opt, out);
  return v.ok() ? kOk : kInputError;
}

inline int cmd_cohomology(const AlgebraDocument& doc, const Options& opt, std::ostream& out) {
  Json report = report_header("cohomology", doc, opt);
  const auto v = validate(doc.spec);
  report["validation"] = validation_json(v);
  if (!v.ok()) {
    print_report(report, opt, out);
    return kInputError;
  }
  const CEModel ce = ce_model(doc.spec);
  const int cap = opt.max_degree.value_or(ce.dim());
  if (cap < 0 || cap > kMaxDegree) throw CapError("--max-degree must lie in [0, " + std::to_string(kMaxDegree) + "]");
  std::vector<std::size_t> b;
  for (int k = 0; k <= cap; ++k) b.push_back(betti(ce.dga, k));
  const auto full = betti_numbers(ce);
  report["cohomology"] = {{"max_degree", cap},
                          {"betti", counts(b)},
                          {"poincare_duality", poincare_check(ce)},
                          {"euler_characteristic", euler_characteristic(full)}};
  print_report(report, opt, out);
  return kOk;
}

/// Certified form from the document or the search; fills `section`. Exit code on failure.
inline std::optional<SymplecticForm> obtain_form(const CEModel& ce, const AlgebraDocument& doc, const Options& opt,
                                                 Json& section, int& code) {
  if (opt.omega_from_file) {
    if (!doc.omega) throw ParseError("--omega-from-file given but the document has no omega");
    const auto sf = SymplecticForm::from_coefficients(ce, doc.omega_coefficients());
    const auto cert = is_symplectic(ce, sf.omega());
    section["source"] = "document";
    section["omega"] = sf.omega().to_string();
    section["certificate"] = certificate_json(cert);
    if (!cert.symplectic()) {
      code = kNoSymplectic;
      return std::nullopt;
    }
    return sf;
  }
  const auto search = find_symplectic(ce, {.seed = opt.seed});
  section["source"] = "search";
  section["closed_2_forms"] = search.closed_forms_dim;
  section["trials"] = search.trials;
  switch (search.outcome) {
    case SearchOutcome::Found:
      section["outcome"] = "found";
      break;
    case SearchOutcome::DefinitelyNone:
      section["outcome"] = "none";
      break;
    case SearchOutcome::SearchExhausted:
      section["outcome"] = "exhausted";
      break;
  }
  section["reason"] = search.reason;
  if (!search.form) {
    code = search.outcome == SearchOutcome::DefinitelyNone ? kNoSymplectic : kSearchExhausted;
    return std::nullopt;
  }
  section["omega"] = search.form->omega().to_string();
  section["coefficients"] = form_json(*search.form);
  section["certificate"] = certificate_json(is_symplectic(ce, search.form->omega()));
  return search.form;
}

inline int cmd_symplectic(const AlgebraDocument& doc, const Options& opt, std::ostream& out) {
  Json report = report_header("symplectic", doc, opt);
  const auto v = validate(doc.spec);
  if (!v.ok()) {
    report["validation"] = validation_json(v);
    print_report(report, opt, out);
    return kInputError;
  }
  const CEModel ce = ce_model(doc.spec);
  Json section;
  int code = kOk;
  const auto sf = obtain_form(ce, doc, opt, section, code);
  report["symplectic"] = section;
  if (sf) {
    const auto steps = hard_lefschetz(ce, *sf);
    bool all = true;
    for (const auto& s : steps) all = all && s.isomorphism;
    report["hard_lefschetz"] = {{"holds", all}, {"steps", lefschetz_json(steps)}};
  }
  print_report(report, opt, out);
  return code;
}

inline Json model_section(const BaseModel& base, const RationalMatrix& alpha) {
  return {{"base", base.label()}, {"alpha", alpha_columns(alpha)}};
}

inline Json csplit_json(const CsplitVerdict& v) {
  return {{"max_degree", v.cap},
          {"total_betti", counts(v.total)},
          {"base_betti", counts(v.base)},
          {"fiber_betti", counts(v.fiber)},
          {"expected_betti", counts(v.expected)},
          {"c_splits", v.additive},
          {"ring_level", v.ring_level}};
}

inline int cmd_csplit(const AlgebraDocument& doc, const Options& opt, std::ostream& out) {
  Json report = report_header("csplit", doc, opt);
  const BaseModel base = parse_base(opt.base);
  const auto v = validate(doc.spec);
  if (!v.ok()) {
    report["validation"] = validation_json(v);
    print_report(report, opt, out);
    return kInputError;
  }
  const CEModel ce = ce_model(doc.spec);
  const auto n = static_cast<std::size_t>(ce.dim());
  const auto m = static_cast<std::size_t>(base.twist_count());
  std::optional<RationalMatrix> explicit_alpha;
  if (opt.alpha != "solve") explicit_alpha = parse_alpha(opt.alpha, n, m);
  const int cap = opt.max_degree.value_or(ce.dim() + 2);
  if (cap < 0 || cap > kMaxDegree) throw CapError("--max-degree must lie in [0, " + std::to_string(kMaxDegree) + "]");

  Json form_section;
  int code = kOk;
  const auto sf = obtain_form(ce, doc, opt, form_section, code);
  report["symplectic"] = form_section;
  if (!sf) {
    print_report(report, opt, out);
    return code;
  }

  RationalMatrix alpha(n, m);
  if (explicit_alpha) {
    alpha = *explicit_alpha;
  } else {
    const auto forcing = forcing_check(ce, *sf, base);
    Json f;
    f["unknowns"] = forcing.unknowns;
    f["differential_rank"] = forcing.differential_rank;
    f["hamiltonian_rank"] = forcing.hamiltonian_rank;
    f["solution_dim"] = forcing.solution_dim;
    f["column_solution_dims"] = counts(forcing.column_solution_dims);
    f["forced_zero"] = forcing.forced_zero();
    if (forcing.witness) {
      f["witness"] = alpha_columns(*forcing.witness);
      f["witness_verified"] = forcing.witness_verified;
      alpha = *forcing.witness;
    }
    report["forcing"] = f;
  }

  Json model = model_section(base, alpha);
  try {
    const TwistedModel tm = build_twisted(ce, base, alpha);
    model["d_squared_zero"] = true;
    report["model"] = model;
    const auto obstruction = hamiltonian_obstruction(tm, *sf);
    Json a_coefficients = Json::array();
    for (const auto& e : obstruction.a_coefficients) a_coefficients.push_back(e.to_string());
    report["hamiltonian"] = {{"obstruction", obstruction.full.to_string()},
                             {"a_coefficients", a_coefficients},
                             {"hamiltonian", obstruction.hamiltonian()}};
    report["csplit"] = csplit_json(csplit_compare(tm, cap));
  } catch (const TwistError& e) {
    model["d_squared_zero"] = false;
    model["witness_generator"] = e.generator();
    model["witness"] = e.witness().to_string();
    report["model"] = model;
    code = kInvalidTwist;
  }
  print_report(report, opt, out);
  return code;
}

inline int cmd_catalog(const Options& opt, std::ostream& out) {
  if (!opt.emit.empty()) {
    auto doc = find_in_catalog(opt.emit);
    if (!doc) throw ParseError("unknown catalog entry \"" + opt.emit + "\"");
    out << emit_document(*doc);
    return kOk;
  }
  if (opt.format == "machine") {
    Json a = Json::array();
    for (const auto& e : catalog())
      a.push_back({{"name", e.document.spec.name}, {"dim", e.document.spec.dim}, {"description", e.description}});
    out << a.dump(2) << "\n";
  } else {
    for (const auto& e : catalog()) {
      std::string name = e.document.spec.name;
      name.resize(std::max<std::size_t>(name.size(), 18), ' ');
      out << name << " dim " << e.document.spec.dim << "  " << e.description << "\n";
    }
  }
  return kOk;
}

/// Runs the CLI on `args` (without the program name). Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sullivan models of nilmanifold bundles and c-splitting checks", "nilsplit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) sub->add_option("input", opt.input, "algebra document path or catalog name")->required();
    sub->add_option("--format", opt.format, "human or machine")->check(CLI::IsMember({"human", "machine"}));
    sub->add_option("--seed", opt.seed, "random seed")->envname("NILSPLIT_SEED");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check Jacobi identity and nilpotency");
  add_common(validate_cmd, true);

  auto* cohomology_cmd = app.add_subcommand("cohomology", "Betti numbers of the Chevalley-Eilenberg model");
  add_common(cohomology_cmd, true);
  cohomology_cmd->add_option("--max-degree", opt.max_degree, "highest degree to compute");

  auto* symplectic_cmd = app.add_subcommand("symplectic", "certify or find a symplectic form; hard Lefschetz");
  add_common(symplectic_cmd, true);
  symplectic_cmd->add_flag("--omega-from-file", opt.omega_from_file, "certify the document's omega instead of searching");

  auto* csplit_cmd = app.add_subcommand("csplit", "twisted model over a base, forcing and c-splitting");
  add_common(csplit_cmd, true);
  csplit_cmd->add_flag("--omega-from-file", opt.omega_from_file, "use the document's omega instead of searching");
  csplit_cmd->add_option("--base", opt.base, "s2 or formal:<m>");
  csplit_cmd->add_option("--alpha", opt.alpha, "\"solve\" or columns like \"1,0\" (';' between columns)");
  csplit_cmd->add_option("--max-degree", opt.max_degree, "highest degree of total cohomology");

  auto* catalog_cmd = app.add_subcommand("catalog", "list or emit built-in algebras");
  add_common(catalog_cmd, false);
  auto* list_flag = catalog_cmd->add_flag("--list", opt.list, "list entries");
  catalog_cmd->add_option("--emit", opt.emit, "print the document for an entry")->excludes(list_flag);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*catalog_cmd) return cmd_catalog(opt, out);
    const AlgebraDocument doc = load_input(opt.input);
    if (*validate_cmd) return cmd_validate(doc, opt, out);
    if (*cohomology_cmd) return cmd_cohomology(doc, opt, out);
    if (*symplectic_cmd) return cmd_symplectic(doc, opt, out);
    if (*csplit_cmd) return cmd_csplit(doc, opt, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const CapError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace nilsplit::cli
