#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace nilsplit {

using Rational = mpq_class;
using Integer = mpz_class;

/// Raised for malformed textual input (rationals, documents, CLI matrices).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses an exact rational of the form `[-]digits[/digits]`, e.g. "3", "-1/2".
/// No whitespace, no leading '+', no zero denominator.
inline Rational parse_rational(std::string_view text) {
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  std::string_view body = text;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{} : body.substr(slash + 1);
  if (!digits(num) || (slash != std::string_view::npos && !digits(den)))
    throw ParseError("malformed rational \"" + std::string(text) + "\"");
  if (slash != std::string_view::npos && den.find_first_not_of('0') == std::string_view::npos)
    throw ParseError("zero denominator in rational \"" + std::string(text) + "\"");
  Rational q;
  q.set_str(std::string(text), 10);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace nilsplit
