#pragma once

// Twisted models (Lambda V_B (x) Lambda g^*, D) of nilmanifold bundles over S^2
// and over formal bases with m degree-2 generators.
//
// Fiber generators have degree 1, so a twist can only land on the degree-2
// base generators a_j:  D x_k = sum_j alpha_kj a_j + dbar x_k.
// Generators of the total algebra are ordered base first, then x1..xn.

#include <nilsplit/algebra.hpp>
#include <nilsplit/cohomology.hpp>
#include <nilsplit/lie.hpp>
#include <nilsplit/linalg.hpp>
#include <nilsplit/symplectic.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nilsplit {

class BaseModel {
 public:
  enum class Kind { SphereS2, FormalEven };

  /// Lambda(a, b), |a| = 2, |b| = 3, da = 0, db = a^2.
  static BaseModel sphere() { return BaseModel(Kind::SphereS2, 1); }

  /// Lambda(a_1..a_m), all of degree 2, d = 0.
  static BaseModel formal_even(int m) {
    if (m < 1) throw std::invalid_argument("formal base needs at least one generator");
    return BaseModel(Kind::FormalEven, m);
  }

  Kind kind() const { return kind_; }
  /// Number of degree-2 generators a_j that can carry a twist.
  int twist_count() const { return m_; }

  std::vector<Generator> generators() const {
    if (kind_ == Kind::SphereS2) return {{"a", 2}, {"b", 3}};
    std::vector<Generator> g;
    for (int j = 1; j <= m_; ++j) g.push_back({"a" + std::to_string(j), 2});
    return g;
  }

  /// Index of a_j (0-based j) among the base generators.
  std::size_t twist_generator(int j) const { return static_cast<std::size_t>(j); }

  /// The base differential, over the given generator set whose first entries are the base generators.
  std::vector<Element> differential_images(const GeneratorsPtr& gens) const {
    std::vector<Element> images(generators().size(), Element(gens));
    if (kind_ == Kind::SphereS2) images[1] = power(Element::generator(gens, 0), 2);
    return images;
  }

  FreeDGA dga() const {
    auto gens = make_generators(generators());
    return FreeDGA(gens, differential_images(gens));
  }

  std::string label() const { return kind_ == Kind::SphereS2 ? "s2" : "formal:" + std::to_string(m_); }

  bool operator==(const BaseModel&) const = default;

 private:
  BaseModel(Kind kind, int m) : kind_(kind), m_(m) {}

  Kind kind_;
  int m_;
};

namespace detail {

/// Re-expresses `e` over `target`, moving generator i to i + offset.
inline Element shift_generators(const Element& e, const GeneratorsPtr& target, std::size_t offset) {
  Element out(target);
  for (const auto& [m, c] : e.terms()) {
    std::vector<Monomial::Factor> fs;
    for (const auto& f : m.factors()) fs.push_back({static_cast<std::uint32_t>(f.index + offset), f.exponent});
    out.add_term(Monomial::from_sorted(std::move(fs)), c);
  }
  return out;
}

inline GeneratorsPtr total_generators(const BaseModel& base, const CEModel& fiber) {
  auto gens = base.generators();
  for (const auto& g : fiber.generators()->list()) gens.push_back(g);
  return make_generators(std::move(gens));
}

inline void check_alpha_shape(const RationalMatrix& alpha, const CEModel& fiber, const BaseModel& base) {
  if (alpha.rows() != static_cast<std::size_t>(fiber.dim()) ||
      alpha.cols() != static_cast<std::size_t>(base.twist_count()))
    throw std::invalid_argument("alpha must be " + std::to_string(fiber.dim()) + "x" +
                                std::to_string(base.twist_count()) + ", got " + std::to_string(alpha.rows()) +
                                "x" + std::to_string(alpha.cols()));
}

}  // namespace detail

/// The total differential for the given twist, without checking D^2 = 0.
inline FreeDGA twisted_differential(const CEModel& fiber, const BaseModel& base, const RationalMatrix& alpha) {
  detail::check_alpha_shape(alpha, fiber, base);
  auto gens = detail::total_generators(base, fiber);
  const std::size_t offset = base.generators().size();
  auto images = base.differential_images(gens);
  for (int k = 0; k < fiber.dim(); ++k) {
    Element dx = detail::shift_generators(fiber.dga.differential_of(static_cast<std::size_t>(k)), gens, offset);
    for (int j = 0; j < base.twist_count(); ++j)
      dx.add_term(Monomial::generator(base.twist_generator(j)), alpha(static_cast<std::size_t>(k), static_cast<std::size_t>(j)));
    images.push_back(std::move(dx));
  }
  return FreeDGA(gens, std::move(images));
}

/// Raised when a twist is incompatible with the fiber differential (D^2 != 0).
class TwistError : public std::runtime_error {
 public:
  TwistError(std::string generator, Element witness)
      : std::runtime_error("D^2 " + generator + " = " + witness.to_string() + " != 0"),
        generator_(std::move(generator)),
        witness_(std::move(witness)) {}

  const std::string& generator() const { return generator_; }
  const Element& witness() const { return witness_; }

 private:
  std::string generator_;
  Element witness_;
};

struct TwistedModel {
  BaseModel base;
  CEModel fiber;
  RationalMatrix alpha;  // fiber dim x twist count
  FreeDGA total;

  std::size_t fiber_offset() const { return base.generators().size(); }
  const GeneratorsPtr& generators() const { return total.generators(); }

  Element embed_fiber(const Element& e) const { return detail::shift_generators(e, generators(), fiber_offset()); }
  bool alpha_is_zero() const { return alpha.is_zero(); }
};

inline TwistedModel build_twisted(const CEModel& fiber, const BaseModel& base, const RationalMatrix& alpha) {
  FreeDGA total = twisted_differential(fiber, base, alpha);
  if (auto bad = first_nonzero_square(total)) throw TwistError((*total.generators())[bad->first].name, bad->second);
  return {base, fiber, alpha, std::move(total)};
}

/// Re-checks the fibration-model shape: D restricts to the base differential on
/// base generators, and D v - dbar v lies in the ideal of positive-degree base elements.
inline bool fibration_conditions_hold(const TwistedModel& tm) {
  const auto& gens = tm.generators();
  const std::size_t offset = tm.fiber_offset();
  const auto base_images = tm.base.differential_images(gens);
  for (std::size_t i = 0; i < offset; ++i)
    if (tm.total.differential_of(i) != base_images[i]) return false;
  for (int k = 0; k < tm.fiber.dim(); ++k) {
    const Element diff = tm.total.differential_of(offset + static_cast<std::size_t>(k)) -
                         tm.embed_fiber(tm.fiber.dga.differential_of(static_cast<std::size_t>(k)));
    for (const auto& [m, c] : diff.terms()) {
      if (m.is_unit() || m.factors().front().index >= offset) return false;
    }
  }
  return true;
}

struct Obstruction {
  Element full;              // D(omega) in the total algebra
  std::vector<Element> a_coefficients;  // coefficient of a_j in D(omega), over the fiber generators

  bool hamiltonian() const { return full.is_zero(); }
};

/// D(omega) and its a_j-components sum_{i<j} a_ij (alpha_i x_j - alpha_j x_i).
inline Obstruction hamiltonian_obstruction(const TwistedModel& tm, const SymplecticForm& sf) {
  if (!same_generators(sf.omega().generators(), tm.fiber.generators()))
    throw StructureError("form does not live on the fiber model");
  Obstruction out{tm.total.differential(tm.embed_fiber(sf.omega())), {}};
  const std::size_t offset = tm.fiber_offset();
  for (int j = 0; j < tm.base.twist_count(); ++j) {
    const auto aj = static_cast<std::uint32_t>(tm.base.twist_generator(j));
    Element coeff(tm.fiber.generators());
    for (const auto& [m, c] : out.full.terms()) {
      const auto& fs = m.factors();
      if (fs.empty() || fs.front().index != aj || fs.front().exponent != 1) continue;
      std::vector<Monomial::Factor> rest;
      bool pure_fiber = true;
      for (std::size_t t = 1; t < fs.size(); ++t) {
        if (fs[t].index < offset) pure_fiber = false;
        rest.push_back({static_cast<std::uint32_t>(fs[t].index - offset), fs[t].exponent});
      }
      if (pure_fiber) coeff.add_term(Monomial::from_sorted(std::move(rest)), c);
    }
    out.a_coefficients.push_back(std::move(coeff));
  }
  return out;
}

struct ForcingReport {
  std::size_t unknowns = 0;
  std::size_t differential_rank = 0;  // rank of the D^2 = 0 rows alone
  std::size_t hamiltonian_rank = 0;   // rank of the D(omega) = 0 rows alone
  std::size_t combined_rank = 0;
  std::size_t solution_dim = 0;
  std::vector<std::size_t> column_solution_dims;  // per base generator a_j
  std::vector<RationalMatrix> solution_basis;
  bool form_nondegenerate = false;
  /// A nonzero admissible Hamiltonian twist, re-checked by building its model.
  std::optional<RationalMatrix> witness;
  bool witness_verified = false;

  bool forced_zero() const { return solution_dim == 0; }
};

/// Solves, over all twists alpha, the linear system {D^2 = 0, D(omega) = 0}.
inline ForcingReport forcing_check(const CEModel& fiber, const SymplecticForm& sf, const BaseModel& base) {
  if (!fiber.dga.differential(sf.omega()).is_zero()) throw std::invalid_argument("forcing needs a closed form");
  const auto n = static_cast<std::size_t>(fiber.dim());
  const auto m = static_cast<std::size_t>(base.twist_count());
  ForcingReport report;
  report.unknowns = n * m;
  report.form_nondegenerate = rank(sf.skew_matrix()) == n;

  // Both conditions are linear in alpha (D a_j = 0, dbar^2 = 0, dbar omega = 0), so column u is
  // the value of the conditions at the unit twist E_u. Rows are keyed by (equation, monomial).
  using RowKey = std::pair<std::size_t, Monomial>;
  std::map<RowKey, std::size_t> row_of;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> columns(report.unknowns);
  auto record = [&](std::size_t u, std::size_t equation, const Element& value) {
    for (const auto& [mono, c] : value.terms()) {
      auto [it, inserted] = row_of.try_emplace({equation, mono}, row_of.size());
      columns[u].emplace_back(it->second, c);
    }
  };
  auto evaluate = [&](const RationalMatrix& alpha, auto&& sink) {
    const FreeDGA total = twisted_differential(fiber, base, alpha);
    const std::size_t offset = base.generators().size();
    for (std::size_t k = 0; k < n; ++k) sink(k, total.differential(total.differential_of(offset + k)));
    sink(n, total.differential(detail::shift_generators(sf.omega(), total.generators(), offset)));
  };
  evaluate(RationalMatrix(n, m), [](std::size_t, const Element& v) {
    if (!v.is_zero()) throw std::logic_error("twist conditions are not homogeneous in alpha");
  });
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < m; ++j) {
      RationalMatrix unit(n, m);
      unit(k, j) = 1;
      evaluate(unit, [&](std::size_t eq, const Element& v) { record(k * m + j, eq, v); });
    }

  std::vector<bool> hamiltonian_row(row_of.size(), false);
  for (const auto& [key, r] : row_of) hamiltonian_row[r] = key.first == n;
  auto assemble = [&](auto&& keep_row, auto&& keep_col) {
    std::vector<std::size_t> cols;
    for (std::size_t u = 0; u < report.unknowns; ++u)
      if (keep_col(u)) cols.push_back(u);
    RationalMatrix a(row_of.size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (const auto& [r, v] : columns[cols[c]])
        if (keep_row(r)) a(r, c) = v;
    return a;
  };
  auto all = [](std::size_t) { return true; };
  const RationalMatrix system = assemble(all, all);
  report.combined_rank = rank(system);
  report.differential_rank = rank(assemble([&](std::size_t r) { return !hamiltonian_row[r]; }, all));
  report.hamiltonian_rank = rank(assemble([&](std::size_t r) { return hamiltonian_row[r]; }, all));
  report.solution_dim = report.unknowns - report.combined_rank;
  for (std::size_t j = 0; j < m; ++j) {
    const auto sub = assemble(all, [&](std::size_t u) { return u % m == j; });
    report.column_solution_dims.push_back(sub.cols() - rank(sub));
  }
  for (const auto& v : nullspace(system)) {
    RationalMatrix alpha(n, m);
    for (std::size_t u = 0; u < report.unknowns; ++u) alpha(u / m, u % m) = v[u];
    report.solution_basis.push_back(std::move(alpha));
  }
  if (!report.solution_basis.empty()) {
    report.witness = report.solution_basis.front();
    try {
      const auto tm = build_twisted(fiber, base, *report.witness);
      report.witness_verified = hamiltonian_obstruction(tm, sf).hamiltonian();
    } catch (const TwistError&) {
      report.witness_verified = false;
    }
  }
  return report;
}

/// Formal top degree of the fiber plus two.
inline int default_cap(const TwistedModel& tm) { return tm.fiber.dim() + 2; }

inline std::vector<std::size_t> total_betti(const TwistedModel& tm, int cap) {
  if (cap < 0 || cap > kMaxDegree)
    throw CapError("cap " + std::to_string(cap) + " outside [0, " + std::to_string(kMaxDegree) + "]");
  std::vector<std::size_t> b;
  for (int k = 0; k <= cap; ++k) b.push_back(betti(tm.total, k));
  return b;
}

struct CsplitVerdict {
  int cap = 0;
  std::vector<std::size_t> total;
  std::vector<std::size_t> base;
  std::vector<std::size_t> fiber;
  std::vector<std::size_t> expected;  // base (*) fiber, truncated at cap
  bool additive = false;
  bool alpha_zero = false;
  /// alpha = 0 and D is literally d (x) 1 + 1 (x) dbar on generators.
  bool ring_level = false;

  bool splits() const { return additive; }
};

inline bool is_tensor_product(const TwistedModel& tm) {
  const auto base_images = tm.base.differential_images(tm.generators());
  const std::size_t offset = tm.fiber_offset();
  for (std::size_t i = 0; i < offset; ++i)
    if (tm.total.differential_of(i) != base_images[i]) return false;
  for (int k = 0; k < tm.fiber.dim(); ++k) {
    const auto idx = static_cast<std::size_t>(k);
    if (tm.total.differential_of(offset + idx) != tm.embed_fiber(tm.fiber.dga.differential_of(idx))) return false;
  }
  return true;
}

inline CsplitVerdict csplit_compare(const TwistedModel& tm, int cap) {
  CsplitVerdict v;
  v.cap = cap;
  v.total = total_betti(tm, cap);
  const FreeDGA base = tm.base.dga();
  for (int k = 0; k <= cap; ++k) v.base.push_back(betti(base, k));
  for (int k = 0; k <= std::min(cap, tm.fiber.dim()); ++k) v.fiber.push_back(betti(tm.fiber.dga, k));
  v.expected = convolve(v.base, v.fiber, cap);
  v.additive = v.total == v.expected;
  v.alpha_zero = tm.alpha_is_zero();
  v.ring_level = v.alpha_zero && is_tensor_product(tm);
  return v;
}

/// Model-level pullback along f_i : S^2 -> B over a formal base: a_j -> delta_ij a, x_k -> x_k.
/// The result is the S^2-base model twisted by column i (0-based) of alpha.
inline TwistedModel pullback_column(const TwistedModel& tm, int i) {
  if (tm.base.kind() != BaseModel::Kind::FormalEven) throw std::invalid_argument("pullback needs a formal base");
  if (i < 0 || i >= tm.base.twist_count())
    throw std::out_of_range("column " + std::to_string(i) + " outside [0, " + std::to_string(tm.base.twist_count()) + ")");
  RationalMatrix column(static_cast<std::size_t>(tm.fiber.dim()), 1);
  for (std::size_t k = 0; k < column.rows(); ++k) column(k, 0) = tm.alpha(k, static_cast<std::size_t>(i));
  return build_twisted(tm.fiber, BaseModel::sphere(), column);
}

/// Images of the formal-base model's generators under the pullback map into `target`.
inline std::vector<Element> pullback_images(const TwistedModel& source, int i, const TwistedModel& target) {
  std::vector<Element> images;
  for (int j = 0; j < source.base.twist_count(); ++j)
    images.push_back(j == i ? target.total.generator(0) : Element(target.generators()));
  for (int k = 0; k < source.fiber.dim(); ++k)
    images.push_back(target.total.generator(target.fiber_offset() + static_cast<std::size_t>(k)));
  return images;
}

/// Checks f^*(D~ g) == D(f^* g) on every generator g of the formal-base model.
inline bool pullback_commutes(const TwistedModel& source, int i) {
  const TwistedModel target = pullback_column(source, i);
  const auto images = pullback_images(source, i, target);
  for (std::size_t g = 0; g < source.generators()->size(); ++g) {
    const Element lhs = apply_morphism(source.total.differential_of(g), images, target.generators());
    const Element rhs = target.total.differential(images[g]);
    if (lhs != rhs) return false;
  }
  return true;
}

}  // namespace nilsplit
