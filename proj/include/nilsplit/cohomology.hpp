#pragma once

// Per-degree cohomology of finite-type free DGAs.

#include <nilsplit/algebra.hpp>
#include <nilsplit/linalg.hpp>

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilsplit {

/// Requested degree lies outside the computed range.
class CapError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Reduction was asked for something that is not a cocycle.
class NotClosedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Upper bound on degrees any per-degree computation will accept.
inline constexpr int kMaxDegree = 64;

/// All normal-form monomials of total degree k, sorted ascending.
inline std::vector<Monomial> degree_basis(const GeneratorSet& gens, int k) {
  std::vector<Monomial> out;
  if (k < 0) return out;
  std::vector<Monomial::Factor> current;
  std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int remaining) {
    if (remaining == 0) {
      out.push_back(Monomial::from_sorted(current));
      return;
    }
    if (idx == gens.size()) return;
    const int d = gens.degree(idx);
    const int max_exp = gens.is_odd(idx) ? 1 : remaining / d;
    for (int e = 0; e <= max_exp && e * d <= remaining; ++e) {
      if (e > 0) current.push_back({static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(e)});
      rec(idx + 1, remaining - e * d);
      if (e > 0) current.pop_back();
    }
  };
  rec(0, k);
  std::sort(out.begin(), out.end());
  return out;
}

/// Coordinates of `e` against an ordered monomial basis. Throws if `e` leaves the span.
inline RationalVector coordinates(const Element& e, const std::vector<Monomial>& basis) {
  RationalVector v(basis.size(), Rational(0));
  for (const auto& [m, c] : e.terms()) {
    auto it = std::lower_bound(basis.begin(), basis.end(), m);
    if (it == basis.end() || *it != m) throw StructureError("element has a term outside the basis");
    v[static_cast<std::size_t>(it - basis.begin())] = c;
  }
  return v;
}

inline Element from_coordinates(const GeneratorsPtr& gens, const std::vector<Monomial>& basis,
                                const RationalVector& v) {
  Element e(gens);
  for (std::size_t i = 0; i < basis.size(); ++i) e.add_term(basis[i], v[i]);
  return e;
}

/// Matrix of d in the given bases: column j is d(from[j]) written in `to`.
inline RationalMatrix differential_matrix(const FreeDGA& dga, const std::vector<Monomial>& from,
                                          const std::vector<Monomial>& to) {
  RationalMatrix m(to.size(), from.size());
  for (std::size_t j = 0; j < from.size(); ++j) {
    auto col = coordinates(dga.differential(from[j]), to);
    for (std::size_t i = 0; i < to.size(); ++i) m(i, j) = col[i];
  }
  return m;
}

struct DegreeSlice {
  int degree = 0;
  std::vector<Monomial> previous_basis;  // degree - 1
  std::vector<Monomial> basis;           // degree
  std::vector<Monomial> next_basis;      // degree + 1
  RationalMatrix d_in;                   // previous -> this
  RationalMatrix d_out;                  // this -> next
};

inline DegreeSlice slice(const FreeDGA& dga, int k) {
  if (k < 0 || k > kMaxDegree) throw CapError("degree " + std::to_string(k) + " outside [0, " +
                                              std::to_string(kMaxDegree) + "]");
  DegreeSlice s;
  s.degree = k;
  const auto& gens = *dga.generators();
  s.previous_basis = degree_basis(gens, k - 1);
  s.basis = degree_basis(gens, k);
  s.next_basis = degree_basis(gens, k + 1);
  s.d_in = differential_matrix(dga, s.previous_basis, s.basis);
  s.d_out = differential_matrix(dga, s.basis, s.next_basis);
  return s;
}

inline std::size_t betti(const DegreeSlice& s) { return s.basis.size() - rank(s.d_out) - rank(s.d_in); }

inline std::size_t betti(const FreeDGA& dga, int k) { return betti(slice(dga, k)); }

/// Basis of H^k with a reduction map from cocycles to class coordinates.
class CohomologyBasis {
 public:
  CohomologyBasis(const FreeDGA& dga, int k) : gens_(dga.generators()) {
    DegreeSlice s = slice(dga, k);
    degree_ = k;
    basis_ = std::move(s.basis);
    d_out_ = std::move(s.d_out);
    const std::size_t dim = basis_.size();

    // Coboundaries first, then cocycles; echelon pivots pick a complement of B in Z.
    std::vector<RationalVector> columns;
    for (std::size_t j = 0; j < s.d_in.cols(); ++j) columns.push_back(s.d_in.column(j));
    const std::size_t boundary_count = columns.size();
    for (auto& z : nullspace(d_out_)) columns.push_back(std::move(z));
    const auto pivots = independent_columns(from_columns(columns, dim));

    std::vector<RationalVector> chosen;
    for (auto p : pivots) {
      chosen.push_back(columns[p]);
      if (p < boundary_count) {
        ++boundary_rank_;
      } else {
        representatives_.push_back(from_coordinates(gens_, basis_, columns[p]));
      }
    }
    // Left inverse (M^T M)^{-1} M^T of the full-column-rank [B | R]; its last rows read off classes.
    if (!chosen.empty()) {
      const RationalMatrix m = from_columns(chosen, dim);
      const RationalMatrix mt = m.transpose();
      auto gram_inv = inverse(mt * m);
      if (!gram_inv) throw std::logic_error("cohomology basis columns are dependent");
      left_inverse_ = *gram_inv * mt;
    }
  }

  int degree() const { return degree_; }
  std::size_t betti() const { return representatives_.size(); }
  const std::vector<Element>& representatives() const { return representatives_; }
  const std::vector<Monomial>& basis() const { return basis_; }

  bool is_cocycle(const Element& e) const {
    if (e.component(degree_) != e) return false;
    return is_zero_vector(d_out_.apply(coordinates(e, basis_)));
  }

  /// Class coordinates of a degree-k cocycle against the representatives.
  RationalVector reduce(const Element& cocycle) const {
    if (!same_generators(cocycle.generators(), gens_)) throw StructureError("cocycle over foreign generators");
    if (cocycle.component(degree_) != cocycle)
      throw NotClosedError("element is not homogeneous of degree " + std::to_string(degree_));
    const RationalVector v = coordinates(cocycle, basis_);
    if (!is_zero_vector(d_out_.apply(v))) throw NotClosedError("element is not closed");
    RationalVector out(betti(), Rational(0));
    if (betti() == 0) return out;
    const RationalVector all = left_inverse_.apply(v);
    for (std::size_t i = 0; i < betti(); ++i) out[i] = all[boundary_rank_ + i];
    return out;
  }

  Element representative(const RationalVector& coords) const {
    if (coords.size() != betti()) throw std::invalid_argument("class coordinate length mismatch");
    Element e(gens_);
    for (std::size_t i = 0; i < coords.size(); ++i) e += representatives_[i] * coords[i];
    return e;
  }

 private:
  GeneratorsPtr gens_;
  int degree_ = 0;
  std::vector<Monomial> basis_;
  RationalMatrix d_out_;
  std::size_t boundary_rank_ = 0;
  std::vector<Element> representatives_;
  RationalMatrix left_inverse_;
};

inline CohomologyBasis representatives(const FreeDGA& dga, int k) { return CohomologyBasis(dga, k); }

/// Cohomology in degrees 0..cap, with cup products.
class Cohomology {
 public:
  Cohomology(FreeDGA dga, int cap) : dga_(std::move(dga)), cap_(cap) {
    if (cap < 0 || cap > kMaxDegree) throw CapError("cap " + std::to_string(cap) + " outside [0, " +
                                                    std::to_string(kMaxDegree) + "]");
    for (int k = 0; k <= cap; ++k) degrees_.emplace_back(dga_, k);
  }

  const FreeDGA& dga() const { return dga_; }
  int cap() const { return cap_; }

  const CohomologyBasis& at(int k) const {
    if (k < 0 || k > cap_)
      throw CapError("degree " + std::to_string(k) + " beyond computed cap " + std::to_string(cap_));
    return degrees_[static_cast<std::size_t>(k)];
  }

  std::vector<std::size_t> betti_numbers() const {
    std::vector<std::size_t> out;
    for (const auto& d : degrees_) out.push_back(d.betti());
    return out;
  }

  RationalVector cup(int p, const RationalVector& c1, int q, const RationalVector& c2) const {
    const auto& target = at(p + q);
    return target.reduce(at(p).representative(c1) * at(q).representative(c2));
  }

 private:
  FreeDGA dga_;
  int cap_;
  std::vector<CohomologyBasis> degrees_;
};

inline long euler_characteristic(const std::vector<std::size_t>& betti) {
  long chi = 0;
  for (std::size_t k = 0; k < betti.size(); ++k) chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(betti[k]);
  return chi;
}

/// b_k == b_{n-k} for 0 <= k <= n.
inline bool poincare_check(const FreeDGA& dga, int n) {
  std::vector<std::size_t> b;
  for (int k = 0; k <= n; ++k) b.push_back(betti(dga, k));
  for (int k = 0; k <= n; ++k)
    if (b[static_cast<std::size_t>(k)] != b[static_cast<std::size_t>(n - k)]) return false;
  return true;
}

/// Degree-wise convolution, truncated to degrees 0..cap.
inline std::vector<std::size_t> convolve(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                                         int cap) {
  std::vector<std::size_t> out(static_cast<std::size_t>(cap) + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (i + j <= static_cast<std::size_t>(cap)) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace nilsplit
