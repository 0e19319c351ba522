#pragma once

// Nilpotent Lie algebras given by rational structure constants, and their
// Chevalley-Eilenberg models.
//
// Convention: [X_i, X_j] = sum_k c_ij^k X_k with i < j, and the dual basis
// satisfies d x_k = - sum_{i<j} c_ij^k x_i x_j, i.e. dx(X, Y) = -x([X, Y]).

#include <nilsplit/algebra.hpp>
#include <nilsplit/cohomology.hpp>
#include <nilsplit/linalg.hpp>

#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace nilsplit {

/// [X_i, X_j] contributes c X_k; indices are 1-based with i < j.
struct Bracket {
  int i = 0;
  int j = 0;
  int k = 0;
  Rational c;

  bool operator==(const Bracket&) const = default;
};

struct LieAlgebraSpec {
  std::string name;
  int dim = 0;
  std::vector<Bracket> brackets;

  bool operator==(const LieAlgebraSpec&) const = default;
};

/// Throws std::invalid_argument on out-of-range indices, i >= j, or a repeated (i, j, k).
inline void check_well_formed(const LieAlgebraSpec& spec) {
  if (spec.dim < 1) throw std::invalid_argument("dim must be positive");
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& b : spec.brackets) {
    const std::string where = "bracket (" + std::to_string(b.i) + "," + std::to_string(b.j) + "," +
                              std::to_string(b.k) + ")";
    if (b.i < 1 || b.j > spec.dim || b.k < 1 || b.k > spec.dim || b.i >= b.j)
      throw std::invalid_argument(where + ": indices must satisfy 1 <= i < j <= dim, 1 <= k <= dim");
    if (!seen.insert({b.i, b.j, b.k}).second) throw std::invalid_argument(where + " given twice");
  }
}

/// Dense antisymmetric structure constants, 0-based.
class StructureConstants {
 public:
  explicit StructureConstants(const LieAlgebraSpec& spec) : n_(static_cast<std::size_t>(spec.dim)) {
    check_well_formed(spec);
    c_.assign(n_ * n_ * n_, Rational(0));
    for (const auto& b : spec.brackets) {
      const auto i = static_cast<std::size_t>(b.i - 1), j = static_cast<std::size_t>(b.j - 1),
                 k = static_cast<std::size_t>(b.k - 1);
      at(i, j, k) += b.c;
      at(j, i, k) -= b.c;
    }
  }

  std::size_t dim() const { return n_; }
  const Rational& operator()(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * n_ + j) * n_ + k]; }

  RationalVector bracket(const RationalVector& u, const RationalVector& v) const {
    RationalVector out(n_, Rational(0));
    for (std::size_t i = 0; i < n_; ++i) {
      if (u[i] == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (v[j] == 0) continue;
        const Rational uv = u[i] * v[j];
        for (std::size_t k = 0; k < n_; ++k)
          if ((*this)(i, j, k) != 0) out[k] += uv * (*this)(i, j, k);
      }
    }
    return out;
  }

  RationalVector basis_vector(std::size_t i) const {
    RationalVector e(n_, Rational(0));
    e[i] = 1;
    return e;
  }

 private:
  Rational& at(std::size_t i, std::size_t j, std::size_t k) { return c_[(i * n_ + j) * n_ + k]; }

  std::size_t n_;
  std::vector<Rational> c_;
};

struct JacobiFailure {
  int i, j, l;           // 1-based triple
  RationalVector value;  // [[Xi,Xj],Xl] + [[Xj,Xl],Xi] + [[Xl,Xi],Xj]
};

struct ValidationReport {
  int dim = 0;
  std::vector<JacobiFailure> jacobi_failures;
  bool nilpotent = false;
  std::optional<int> nilpotency_class;
  /// Dimensions of g = g^1, g^2 = [g,g], g^3, ... until zero or stabilization.
  std::vector<std::size_t> lower_central_dims;
  std::size_t derived_dim = 0;

  bool jacobi() const { return jacobi_failures.empty(); }
  bool ok() const { return jacobi() && nilpotent; }
};

namespace detail {

/// Basis (RREF rows) of the span of the given vectors.
inline std::vector<RationalVector> span_basis(const std::vector<RationalVector>& vectors, std::size_t n) {
  if (vectors.empty()) return {};
  RationalMatrix m(vectors.size(), n);
  for (std::size_t r = 0; r < vectors.size(); ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = vectors[r][c];
  const Echelon e = reduced_row_echelon(std::move(m));
  std::vector<RationalVector> out;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    RationalVector row(n);
    for (std::size_t c = 0; c < n; ++c) row[c] = e.reduced(r, c);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace detail

inline ValidationReport validate(const LieAlgebraSpec& spec) {
  const StructureConstants sc(spec);
  const std::size_t n = sc.dim();
  ValidationReport report;
  report.dim = spec.dim;

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t l = j + 1; l < n; ++l) {
        const auto ei = sc.basis_vector(i), ej = sc.basis_vector(j), el = sc.basis_vector(l);
        RationalVector sum = sc.bracket(sc.bracket(ei, ej), el);
        const auto t2 = sc.bracket(sc.bracket(ej, el), ei);
        const auto t3 = sc.bracket(sc.bracket(el, ei), ej);
        for (std::size_t k = 0; k < n; ++k) sum[k] += t2[k] + t3[k];
        if (!is_zero_vector(sum))
          report.jacobi_failures.push_back({static_cast<int>(i + 1), static_cast<int>(j + 1),
                                            static_cast<int>(l + 1), std::move(sum)});
      }

  // Lower central series g^{s+1} = [g, g^s]; a nilpotent algebra reaches 0 within n steps.
  std::vector<RationalVector> current;
  for (std::size_t i = 0; i < n; ++i) current.push_back(sc.basis_vector(i));
  report.lower_central_dims.push_back(n);
  for (std::size_t step = 1; step <= n; ++step) {
    std::vector<RationalVector> brackets;
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& v : current) brackets.push_back(sc.bracket(sc.basis_vector(i), v));
    auto next = detail::span_basis(brackets, n);
    report.lower_central_dims.push_back(next.size());
    if (step == 1) report.derived_dim = next.size();
    if (next.empty()) {
      report.nilpotent = true;
      report.nilpotency_class = static_cast<int>(step);
      break;
    }
    if (next.size() >= current.size()) break;
    current = std::move(next);
  }
  return report;
}

class InvalidAlgebra : public std::runtime_error {
 public:
  explicit InvalidAlgebra(ValidationReport report)
      : std::runtime_error(describe(report)), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  static std::string describe(const ValidationReport& r) {
    if (!r.jacobi()) {
      const auto& f = r.jacobi_failures.front();
      return "Jacobi identity fails on (" + std::to_string(f.i) + "," + std::to_string(f.j) + "," +
             std::to_string(f.l) + ")";
    }
    return "lower central series stabilizes at dimension " + std::to_string(r.lower_central_dims.back());
  }
  ValidationReport report_;
};

enum class CESign { Standard, Opposite };

inline GeneratorsPtr degree_one_generators(int n, const std::string& prefix = "x") {
  std::vector<Generator> gens;
  for (int k = 1; k <= n; ++k) gens.push_back({prefix + std::to_string(k), 1});
  return make_generators(std::move(gens));
}

/// The CE differential, built without validating the spec.
inline FreeDGA ce_differential(const LieAlgebraSpec& spec, CESign sign = CESign::Standard) {
  const StructureConstants sc(spec);
  const auto n = sc.dim();
  auto gens = degree_one_generators(spec.dim);
  std::vector<Element> images;
  for (std::size_t k = 0; k < n; ++k) {
    Element dx(gens);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const Rational& c = sc(i, j, k);
        if (c == 0) continue;
        dx.add_term(Monomial::from_sorted({{static_cast<std::uint32_t>(i), 1}, {static_cast<std::uint32_t>(j), 1}}),
                    sign == CESign::Standard ? Rational(-c) : c);
      }
    images.push_back(std::move(dx));
  }
  return FreeDGA(gens, std::move(images));
}

/// Chevalley-Eilenberg model (Lambda g^*, d) on generators x1..xn of degree 1.
struct CEModel {
  LieAlgebraSpec spec;
  FreeDGA dga;

  int dim() const { return spec.dim; }
  const GeneratorsPtr& generators() const { return dga.generators(); }
};

inline CEModel ce_model(const LieAlgebraSpec& spec, CESign sign = CESign::Standard) {
  check_well_formed(spec);
  auto report = validate(spec);
  if (!report.ok()) throw InvalidAlgebra(std::move(report));
  FreeDGA dga = ce_differential(spec, sign);
  if (auto bad = first_nonzero_square(dga))
    throw std::logic_error("d^2 != 0 on " + (*dga.generators())[bad->first].name + " for a Jacobi-valid spec");
  return {spec, std::move(dga)};
}

inline bool poincare_check(const CEModel& ce) { return poincare_check(ce.dga, ce.dim()); }

inline std::vector<std::size_t> betti_numbers(const CEModel& ce) {
  std::vector<std::size_t> b;
  for (int k = 0; k <= ce.dim(); ++k) b.push_back(betti(ce.dga, k));
  return b;
}

}  // namespace nilsplit
