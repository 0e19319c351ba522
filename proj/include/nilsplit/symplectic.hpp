#pragma once

// Symplectic forms on Chevalley-Eilenberg models: certification, contraction,
// search, and the hard Lefschetz test.

#include <nilsplit/algebra.hpp>
#include <nilsplit/cohomology.hpp>
#include <nilsplit/lie.hpp>
#include <nilsplit/linalg.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace nilsplit {

/// A degree-2 element omega = sum_{i<j} a_ij x_i x_j of a CE model.
///
/// Only closedness-independent data lives here; whether the form is closed and
/// nondegenerate is decided by is_symplectic().
class SymplecticForm {
 public:
  static SymplecticForm from_element(const CEModel& ce, const Element& omega) {
    if (!same_generators(omega.generators(), ce.generators()))
      throw StructureError("form is not an element of this CE model");
    const auto n = static_cast<std::size_t>(ce.dim());
    RationalMatrix upper(n, n);
    for (const auto& [m, c] : omega.terms()) {
      const auto& fs = m.factors();
      if (fs.size() != 2) throw std::invalid_argument("form has a term of degree != 2: " + omega.to_string());
      upper(fs[0].index, fs[1].index) = c;
    }
    return SymplecticForm(omega, std::move(upper));
  }

  /// 1-based (i, j, a_ij) with i < j.
  static SymplecticForm from_coefficients(const CEModel& ce, const std::vector<std::tuple<int, int, Rational>>& coeffs) {
    Element omega(ce.generators());
    for (const auto& [i, j, c] : coeffs) {
      if (i < 1 || j > ce.dim() || i >= j) throw std::invalid_argument("form indices must satisfy 1 <= i < j <= dim");
      omega += Element::word(ce.generators(), std::vector<std::size_t>{std::size_t(i - 1), std::size_t(j - 1)}, c);
    }
    return from_element(ce, omega);
  }

  const Element& omega() const { return omega_; }
  std::size_t dim() const { return upper_.rows(); }

  /// a_ij for i < j (0-based).
  const Rational& coefficient(std::size_t i, std::size_t j) const { return upper_(i, j); }

  /// Full antisymmetric matrix A with A(i,j) = a_ij, A(j,i) = -a_ij.
  RationalMatrix skew_matrix() const {
    RationalMatrix a(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = i + 1; j < dim(); ++j) {
        a(i, j) = upper_(i, j);
        a(j, i) = -upper_(i, j);
      }
    return a;
  }

  /// Nonzero (i, j, a_ij), 1-based, ordered by (i, j).
  std::vector<std::tuple<int, int, Rational>> coefficients() const {
    std::vector<std::tuple<int, int, Rational>> out;
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = i + 1; j < dim(); ++j)
        if (upper_(i, j) != 0) out.emplace_back(int(i + 1), int(j + 1), upper_(i, j));
    return out;
  }

 private:
  SymplecticForm(Element omega, RationalMatrix upper) : omega_(std::move(omega)), upper_(std::move(upper)) {}

  Element omega_;
  RationalMatrix upper_;
};

/// omega(X, -) = sum_{i<j} a_ij (alpha_i x_j - alpha_j x_i), where alpha_k = x_k(X).
inline Element contraction(const SymplecticForm& sf, std::span<const Rational> alpha) {
  if (alpha.size() != sf.dim()) throw std::invalid_argument("contraction vector length mismatch");
  const auto& gens = sf.omega().generators();
  Element out(gens);
  for (std::size_t i = 0; i < sf.dim(); ++i)
    for (std::size_t j = i + 1; j < sf.dim(); ++j) {
      const Rational& a = sf.coefficient(i, j);
      if (a == 0) continue;
      out.add_term(Monomial::generator(j), a * alpha[i]);
      out.add_term(Monomial::generator(i), -a * alpha[j]);
    }
  return out;
}

struct SymplecticCertificate {
  bool even_dimension = false;
  bool degree_two = false;
  bool closed = false;
  Element d_omega;
  std::size_t rank = 0;
  bool nondegenerate = false;
  /// Nonzero X with omega(X, -) = 0, when degenerate.
  std::optional<RationalVector> kernel_witness;

  bool symplectic() const { return even_dimension && degree_two && closed && nondegenerate; }
};

inline SymplecticCertificate is_symplectic(const CEModel& ce, const Element& omega) {
  SymplecticCertificate cert{.d_omega = Element(ce.generators()), .kernel_witness = std::nullopt};
  cert.even_dimension = ce.dim() % 2 == 0;
  cert.degree_two = omega.component(2) == omega && same_generators(omega.generators(), ce.generators());
  if (!cert.degree_two) return cert;
  cert.d_omega = ce.dga.differential(omega);
  cert.closed = cert.d_omega.is_zero();
  const auto sf = SymplecticForm::from_element(ce, omega);
  const auto a = sf.skew_matrix();
  cert.rank = rank(a);
  cert.nondegenerate = cert.rank == sf.dim();
  if (!cert.nondegenerate) {
    auto kernel = nullspace(a);
    if (!kernel.empty()) cert.kernel_witness = std::move(kernel.front());
  }
  return cert;
}

/// Closed 2-forms Z^2 of the CE model, as a basis of elements.
inline std::vector<Element> closed_two_forms(const CEModel& ce) {
  const auto s = slice(ce.dga, 2);
  std::vector<Element> out;
  for (const auto& z : nullspace(s.d_out)) out.push_back(from_coordinates(ce.generators(), s.basis, z));
  return out;
}

/// omega^m for the generic closed form sum_l t_l z_l, read off on x1...x_{2m}.
/// This is m! times the Pfaffian of its coefficient matrix, as a polynomial in the t_l.
/// Returned over generators t1..tr (degree 2).
inline Element generic_pfaffian(const CEModel& ce, const std::vector<Element>& z) {
  const std::size_t n = static_cast<std::size_t>(ce.dim());
  const std::size_t r = z.size();
  std::vector<Generator> gens;
  for (std::size_t l = 1; l <= r; ++l) gens.push_back({"t" + std::to_string(l), 2});
  for (std::size_t k = 1; k <= n; ++k) gens.push_back({"x" + std::to_string(k), 1});
  auto joint = make_generators(gens);
  Element generic(joint);
  for (std::size_t l = 0; l < r; ++l) {
    for (const auto& [m, c] : z[l].terms()) {
      std::vector<Monomial::Factor> fs{{static_cast<std::uint32_t>(l), 1}};
      for (const auto& f : m.factors()) fs.push_back({static_cast<std::uint32_t>(f.index + r), f.exponent});
      generic.add_term(Monomial::from_sorted(std::move(fs)), c);
    }
  }
  const Element top = power(generic, static_cast<unsigned>(n / 2));
  auto polys = make_generators(std::vector<Generator>(gens.begin(), gens.begin() + static_cast<std::ptrdiff_t>(r)));
  Element pf(polys);
  for (const auto& [m, c] : top.terms()) {
    std::vector<Monomial::Factor> t_part;
    for (const auto& f : m.factors())
      if (f.index < r) t_part.push_back(f);
    pf.add_term(Monomial::from_sorted(std::move(t_part)), c);
  }
  return pf;
}

struct SearchOptions {
  std::uint64_t seed = 1;
  int budget = 64;
};

enum class SearchOutcome { Found, DefinitelyNone, SearchExhausted };

struct SymplecticSearch {
  SearchOutcome outcome = SearchOutcome::SearchExhausted;
  std::optional<SymplecticForm> form;
  int trials = 0;
  std::size_t closed_forms_dim = 0;
  std::string reason;
};

/// Searches Z^2 for a nondegenerate element by random rational substitution.
/// Hits are re-certified exactly. When the search fails, the generic Pfaffian is
/// expanded symbolically; if it vanishes identically no symplectic form exists.
inline SymplecticSearch find_symplectic(const CEModel& ce, const SearchOptions& options = {}) {
  SymplecticSearch result;
  if (ce.dim() % 2 != 0) {
    result.outcome = SearchOutcome::DefinitelyNone;
    result.reason = "odd dimension";
    return result;
  }
  const auto z = closed_two_forms(ce);
  result.closed_forms_dim = z.size();
  std::mt19937_64 rng(options.seed);
  for (int trial = 0; trial < options.budget && !z.empty(); ++trial) {
    ++result.trials;
    // Trial 0 is the plain sum of the basis. After that the pool is {-2,-1,1,2} up to
    // trial 16, then [-w, w] with w doubling every 16 trials.
    const long width = 2L << (trial / 16);
    std::uniform_int_distribution<long> pick(-width, width);
    Element omega(ce.generators());
    for (const auto& zl : z) {
      long v = trial == 0 ? 1 : pick(rng);
      while (trial < 16 && v == 0) v = pick(rng);
      omega += zl * Rational(v);
    }
    if (omega.is_zero()) continue;
    const auto cert = is_symplectic(ce, omega);
    if (cert.symplectic()) {
      result.outcome = SearchOutcome::Found;
      result.form = SymplecticForm::from_element(ce, omega);
      result.reason = "certified";
      return result;
    }
  }
  if (z.empty() || generic_pfaffian(ce, z).is_zero()) {
    result.outcome = SearchOutcome::DefinitelyNone;
    result.reason = "Pfaffian of the generic closed 2-form vanishes identically";
  } else {
    result.outcome = SearchOutcome::SearchExhausted;
    result.reason = "random search budget exhausted";
  }
  return result;
}

struct LefschetzStep {
  int k = 0;
  std::size_t source_dim = 0;  // b_{m-k}
  std::size_t target_dim = 0;  // b_{m+k}
  std::size_t rank = 0;
  bool isomorphism = false;
};

/// For each 0 <= k <= m (dim = 2m): is [omega]^k : H^{m-k} -> H^{m+k} an isomorphism?
inline std::vector<LefschetzStep> hard_lefschetz(const CEModel& ce, const SymplecticForm& sf) {
  if (ce.dim() % 2 != 0) throw std::invalid_argument("hard Lefschetz needs even dimension");
  const int m = ce.dim() / 2;
  const Cohomology h(ce.dga, ce.dim());
  std::vector<LefschetzStep> steps;
  for (int k = 0; k <= m; ++k) {
    const auto& src = h.at(m - k);
    const auto& tgt = h.at(m + k);
    const Element wk = power(sf.omega(), static_cast<unsigned>(k));
    std::vector<RationalVector> cols;
    for (const auto& rep : src.representatives()) cols.push_back(tgt.reduce(wk * rep));
    LefschetzStep step;
    step.k = k;
    step.source_dim = src.betti();
    step.target_dim = tgt.betti();
    step.rank = cols.empty() ? 0 : rank(from_columns(cols, tgt.betti()));
    step.isomorphism = step.source_dim == step.target_dim && step.rank == step.source_dim;
    steps.push_back(step);
  }
  return steps;
}

}  // namespace nilsplit
