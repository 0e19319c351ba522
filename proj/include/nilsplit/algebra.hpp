#pragma once

// Free graded-commutative algebras over the rationals.
//
// A monomial is stored sparse, as (generator index, exponent) pairs sorted by
// index. Odd-degree generators carry exponent at most one. Products are brought
// to normal form by a merge that counts transpositions of odd factors, which
// gives the Koszul sign u*v = (-1)^{|u||v|} v*u.

#include <nilsplit/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace nilsplit {

/// Operands live over different generator sets, or an image has the wrong degree.
class StructureError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Generator {
  std::string name;
  int degree = 1;

  bool operator==(const Generator&) const = default;
};

/// Ordered, immutable list of generators. The position of a generator is its index.
class GeneratorSet {
 public:
  explicit GeneratorSet(std::vector<Generator> gens) : gens_(std::move(gens)) {
    std::unordered_set<std::string> seen;
    for (const auto& g : gens_) {
      if (g.degree < 1) throw StructureError("generator " + g.name + " has degree < 1");
      if (g.name.empty()) throw StructureError("generator with empty name");
      if (!seen.insert(g.name).second) throw StructureError("duplicate generator name " + g.name);
    }
  }

  std::size_t size() const { return gens_.size(); }
  const Generator& operator[](std::size_t i) const { return gens_.at(i); }
  int degree(std::size_t i) const { return gens_.at(i).degree; }
  bool is_odd(std::size_t i) const { return gens_.at(i).degree % 2 != 0; }
  const std::vector<Generator>& list() const { return gens_; }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].name == name) return i;
    return std::nullopt;
  }

  bool operator==(const GeneratorSet& other) const { return gens_ == other.gens_; }

 private:
  std::vector<Generator> gens_;
};

using GeneratorsPtr = std::shared_ptr<const GeneratorSet>;

inline GeneratorsPtr make_generators(std::vector<Generator> gens) {
  return std::make_shared<const GeneratorSet>(std::move(gens));
}

inline bool same_generators(const GeneratorsPtr& a, const GeneratorsPtr& b) {
  return a == b || (a && b && *a == *b);
}

class Monomial {
 public:
  struct Factor {
    std::uint32_t index;
    std::uint32_t exponent;
    auto operator<=>(const Factor&) const = default;
  };

  Monomial() = default;

  static Monomial generator(std::size_t index, std::uint32_t exponent = 1) {
    Monomial m;
    if (exponent > 0) m.factors_.push_back({static_cast<std::uint32_t>(index), exponent});
    return m;
  }

  /// Builds from factors that are already sorted by strictly increasing index.
  static Monomial from_sorted(std::vector<Factor> factors) {
    for (std::size_t i = 1; i < factors.size(); ++i)
      if (factors[i - 1].index >= factors[i].index)
        throw StructureError("monomial factors not strictly increasing");
    std::erase_if(factors, [](const Factor& f) { return f.exponent == 0; });
    Monomial m;
    m.factors_ = std::move(factors);
    return m;
  }

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_unit() const { return factors_.empty(); }

  std::uint32_t exponent(std::size_t index) const {
    for (const auto& f : factors_)
      if (f.index == index) return f.exponent;
    return 0;
  }

  int degree(const GeneratorSet& gens) const {
    int d = 0;
    for (const auto& f : factors_) d += gens.degree(f.index) * static_cast<int>(f.exponent);
    return d;
  }

  /// Word length counted with multiplicity.
  std::uint32_t length() const {
    std::uint32_t n = 0;
    for (const auto& f : factors_) n += f.exponent;
    return n;
  }

  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;

 private:
  std::vector<Factor> factors_;
};

/// Product of two normal-form monomials. `sign` is 0 when the product vanishes.
struct SignedMonomial {
  int sign = 1;
  Monomial monomial;
};

inline SignedMonomial multiply(const Monomial& lhs, const Monomial& rhs, const GeneratorSet& gens) {
  const auto& a = lhs.factors();
  const auto& b = rhs.factors();
  std::vector<Monomial::Factor> out;
  out.reserve(a.size() + b.size());
  // Odd factors of lhs not yet emitted; every odd factor of rhs overtaking one of them flips the sign.
  int pending_odd_lhs = 0;
  for (const auto& f : a)
    if (gens.is_odd(f.index) && f.exponent % 2 == 1) ++pending_odd_lhs;
  bool negative = false;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
      if (gens.is_odd(a[i].index) && a[i].exponent % 2 == 1) --pending_odd_lhs;
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].index < a[i].index) {
      if (gens.is_odd(b[j].index) && b[j].exponent % 2 == 1 && pending_odd_lhs % 2 == 1) negative = !negative;
      out.push_back(b[j++]);
    } else {
      if (gens.is_odd(a[i].index)) return {0, {}};
      out.push_back({a[i].index, a[i].exponent + b[j].exponent});
      ++i;
      ++j;
    }
  }
  return {negative ? -1 : 1, Monomial::from_sorted(std::move(out))};
}

/// Finite linear combination of normal-form monomials with nonzero rational coefficients.
class Element {
 public:
  using Terms = std::map<Monomial, Rational>;

  explicit Element(GeneratorsPtr gens) : gens_(std::move(gens)) {
    if (!gens_) throw StructureError("element without generator set");
  }

  static Element zero(GeneratorsPtr gens) { return Element(std::move(gens)); }

  static Element constant(GeneratorsPtr gens, const Rational& c) {
    Element e(std::move(gens));
    e.add_term(Monomial{}, c);
    return e;
  }

  static Element one(GeneratorsPtr gens) { return constant(std::move(gens), 1); }

  static Element generator(GeneratorsPtr gens, std::size_t index, const Rational& c = 1) {
    if (index >= gens->size()) throw std::out_of_range("generator index out of range");
    Element e(std::move(gens));
    e.add_term(Monomial::generator(index), c);
    return e;
  }

  static Element monomial(GeneratorsPtr gens, const Monomial& m, const Rational& c = 1) {
    Element e(std::move(gens));
    e.add_term(m, c);
    return e;
  }

  /// Product of generators taken in the given order, brought to normal form.
  static Element word(GeneratorsPtr gens, std::span<const std::size_t> factors, const Rational& c = 1) {
    Element e = constant(gens, c);
    for (std::size_t idx : factors) e = e * generator(gens, idx);
    return e;
  }

  /// Looks up generators by name, e.g. `Element::named(g, {"x1", "x2"})` is x1*x2.
  static Element named(GeneratorsPtr gens, std::initializer_list<std::string_view> names,
                       const Rational& c = 1) {
    std::vector<std::size_t> idx;
    for (auto n : names) {
      auto found = gens->find(n);
      if (!found) throw StructureError("unknown generator " + std::string(n));
      idx.push_back(*found);
    }
    return word(std::move(gens), idx, c);
  }

  const GeneratorsPtr& generators() const { return gens_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Adds c*m; m must be in normal form for this generator set.
  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    for (const auto& f : m.factors()) {
      if (f.index >= gens_->size()) throw StructureError("monomial uses unknown generator");
      if (gens_->is_odd(f.index) && f.exponent > 1) return;
    }
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::set<int> degrees() const {
    std::set<int> out;
    for (const auto& [m, c] : terms_) out.insert(m.degree(*gens_));
    return out;
  }

  bool is_homogeneous() const { return degrees().size() <= 1; }

  /// Degree of a nonzero homogeneous element.
  std::optional<int> degree() const {
    auto ds = degrees();
    if (ds.size() != 1) return std::nullopt;
    return *ds.begin();
  }

  /// Homogeneous component of the given degree.
  Element component(int degree) const {
    Element out(gens_);
    for (const auto& [m, c] : terms_)
      if (m.degree(*gens_) == degree) out.terms_.emplace(m, c);
    return out;
  }

  Element& operator+=(const Element& other) {
    require_same(other);
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
  }

  Element& operator-=(const Element& other) {
    require_same(other);
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
  }

  Element& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
    } else {
      for (auto& [m, c] : terms_) c *= s;
    }
    return *this;
  }

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator-(Element a) { return a *= Rational(-1); }
  friend Element operator*(Element a, const Rational& s) { return a *= s; }
  friend Element operator*(const Rational& s, Element a) { return a *= s; }

  friend Element operator*(const Element& u, const Element& v) {
    u.require_same(v);
    Element out(u.gens_);
    for (const auto& [mu, cu] : u.terms_) {
      for (const auto& [mv, cv] : v.terms_) {
        auto p = multiply(mu, mv, *u.gens_);
        if (p.sign == 0) continue;
        Rational c = cu * cv;
        if (p.sign < 0) c = -c;
        out.add_term(p.monomial, c);
      }
    }
    return out;
  }

  bool operator==(const Element& other) const {
    return same_generators(gens_, other.gens_) && terms_ == other.terms_;
  }

  /// Readable form such as "x1*x2 - 1/2*a^2*x3"; "0" for the zero element.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      Rational mag = abs(c);
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      const bool unit = m.is_unit();
      if (mag != 1 || unit) {
        os << mag.get_str();
        if (!unit) os << "*";
      }
      bool first_factor = true;
      for (const auto& f : m.factors()) {
        if (!first_factor) os << "*";
        first_factor = false;
        os << (*gens_)[f.index].name;
        if (f.exponent > 1) os << "^" << f.exponent;
      }
    }
    return os.str();
  }

 private:
  void require_same(const Element& other) const {
    if (!same_generators(gens_, other.gens_))
      throw StructureError("elements over different generator sets");
  }

  GeneratorsPtr gens_;
  Terms terms_;
};

/// Rebuilds every term from its factor word. Normal forms are fixed points.
inline Element renormalize(const Element& e) {
  Element out(e.generators());
  for (const auto& [m, c] : e.terms()) {
    std::vector<std::size_t> word;
    for (const auto& f : m.factors())
      for (std::uint32_t k = 0; k < f.exponent; ++k) word.push_back(f.index);
    out += Element::word(e.generators(), word, c);
  }
  return out;
}

inline Element power(const Element& e, unsigned n) {
  Element out = Element::one(e.generators());
  for (unsigned k = 0; k < n; ++k) out = out * e;
  return out;
}

namespace detail {

inline void check_images(const GeneratorsPtr& gens, std::span<const Element> images, int degree_shift) {
  if (images.size() != gens->size())
    throw StructureError("expected one image per generator");
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].is_zero()) continue;
    auto d = images[i].degree();
    if (!d || *d != gens->degree(i) + degree_shift)
      throw StructureError("image of " + (*gens)[i].name + " has the wrong degree");
  }
}

}  // namespace detail

/// Applies the degree +1 derivation determined by `images` (one per generator):
/// D(uv) = (Du)v + (-1)^{|u|} u(Dv).
inline Element extend_derivation(std::span<const Element> images, const Element& u) {
  const auto& gens = u.generators();
  detail::check_images(gens, images, 1);
  for (const auto& img : images)
    if (!same_generators(img.generators(), gens)) throw StructureError("derivation image over foreign generators");
  Element out(gens);
  for (const auto& [m, c] : u.terms()) {
    const auto& fs = m.factors();
    int prefix_degree = 0;
    for (std::size_t t = 0; t < fs.size(); ++t) {
      const auto& f = fs[t];
      const Element& dg = images[f.index];
      if (!dg.is_zero()) {
        std::vector<Monomial::Factor> before(fs.begin(), fs.begin() + static_cast<std::ptrdiff_t>(t));
        std::vector<Monomial::Factor> after;
        if (f.exponent > 1) after.push_back({f.index, f.exponent - 1});
        after.insert(after.end(), fs.begin() + static_cast<std::ptrdiff_t>(t) + 1, fs.end());
        // D(g^e) = e g^{e-1} Dg for even g; odd g has e = 1.
        Rational coeff = c * Rational(f.exponent);
        if (prefix_degree % 2 != 0) coeff = -coeff;
        Element piece = Element::monomial(gens, Monomial::from_sorted(std::move(before)), coeff) * dg *
                        Element::monomial(gens, Monomial::from_sorted(std::move(after)));
        out += piece;
      }
      prefix_degree += gens->degree(f.index) * static_cast<int>(f.exponent);
    }
  }
  return out;
}

/// Free graded-commutative algebra with a degree +1 differential given on generators.
class FreeDGA {
 public:
  FreeDGA(GeneratorsPtr gens, std::vector<Element> images) : gens_(std::move(gens)), images_(std::move(images)) {
    for (const auto& img : images_)
      if (!same_generators(img.generators(), gens_)) throw StructureError("differential image over foreign generators");
    detail::check_images(gens_, images_, 1);
  }

  const GeneratorsPtr& generators() const { return gens_; }
  const std::vector<Element>& images() const { return images_; }
  const Element& differential_of(std::size_t index) const { return images_.at(index); }

  Element differential(const Element& u) const { return extend_derivation(images_, u); }

  Element differential(const Monomial& m) const { return differential(Element::monomial(gens_, m)); }

  Element generator(std::size_t index) const { return Element::generator(gens_, index); }

  Element named(std::initializer_list<std::string_view> names, const Rational& c = 1) const {
    return Element::named(gens_, names, c);
  }

 private:
  GeneratorsPtr gens_;
  std::vector<Element> images_;
};

/// First generator g with d(d(g)) != 0, together with d(d(g)).
inline std::optional<std::pair<std::size_t, Element>> first_nonzero_square(const FreeDGA& dga) {
  for (std::size_t i = 0; i < dga.generators()->size(); ++i) {
    Element dd = dga.differential(dga.differential_of(i));
    if (!dd.is_zero()) return std::make_pair(i, std::move(dd));
  }
  return std::nullopt;
}

/// Algebra morphism given by degree-preserving images of the source generators.
inline Element apply_morphism(const Element& u, std::span<const Element> images, const GeneratorsPtr& target) {
  detail::check_images(u.generators(), images, 0);
  Element out(target);
  for (const auto& [m, c] : u.terms()) {
    Element term = Element::constant(target, c);
    for (const auto& f : m.factors())
      for (std::uint32_t k = 0; k < f.exponent; ++k) term = term * images[f.index];
    out += term;
  }
  return out;
}

}  // namespace nilsplit
