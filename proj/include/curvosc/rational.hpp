#ifndef CURVOSC_RATIONAL_HPP
#define CURVOSC_RATIONAL_HPP

// Exact rational and complex-rational scalars for the symbolic layer.

#include <gmpxx.h>

#include <cctype>
#include <complex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace curvosc {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1)
{
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

/// Parses "p/q", an integer, a decimal ("-0.25") or scientific notation
/// ("1e-3", "2.5E2") into an exact rational. Decimal input is read as a
/// fraction over a power of ten, never through a float.
inline Rational parse_rational(std::string_view text)
{
  auto fail = [&] { throw std::invalid_argument("not a rational number: '" + std::string(text) + "'"); };
  if (text.empty()) fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) fail();
    Rational r = num / den;
    r.canonicalize();
    return r;
  }

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (; i < text.size() && text[i] != 'e' && text[i] != 'E'; ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_point) fail();
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      fail();
    }
  }
  if (digits.empty()) fail();

  long exponent = 0;
  if (i < text.size()) {
    std::string_view exp_text = text.substr(i + 1);
    if (exp_text.empty()) fail();
    std::size_t j = 0;
    bool exp_negative = false;
    if (exp_text[j] == '+' || exp_text[j] == '-') {
      exp_negative = exp_text[j] == '-';
      ++j;
    }
    if (j == exp_text.size()) fail();
    for (; j < exp_text.size(); ++j) {
      if (!std::isdigit(static_cast<unsigned char>(exp_text[j]))) fail();
      exponent = exponent * 10 + (exp_text[j] - '0');
      if (exponent > 4000) fail();
    }
    if (exp_negative) exponent = -exponent;
  }

  mpz_class num(digits, 10);
  long scale = exponent - frac_digits;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational r = scale >= 0 ? Rational(num * pow10) : Rational(num, pow10);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

/// Exact complex number with rational parts.
struct ComplexQ {
  Rational re;
  Rational im;

  ComplexQ() = default;
  ComplexQ(Rational r) : re(std::move(r)), im(0) {}
  ComplexQ(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  ComplexQ(long r) : re(r), im(0) {}

  static ComplexQ i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }

  ComplexQ conj() const { return {re, -im}; }

  ComplexQ& operator+=(const ComplexQ& o)
  {
    re += o.re;
    im += o.im;
    return *this;
  }
  ComplexQ& operator-=(const ComplexQ& o)
  {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ComplexQ& operator*=(const ComplexQ& o)
  {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  friend ComplexQ operator+(ComplexQ a, const ComplexQ& b) { return a += b; }
  friend ComplexQ operator-(ComplexQ a, const ComplexQ& b) { return a -= b; }
  friend ComplexQ operator*(ComplexQ a, const ComplexQ& b) { return a *= b; }
  friend ComplexQ operator-(const ComplexQ& a) { return {-a.re, -a.im}; }
  friend ComplexQ operator/(const ComplexQ& a, const ComplexQ& b)
  {
    Rational den = b.re * b.re + b.im * b.im;
    if (den == 0) throw std::domain_error("complex rational division by zero");
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
  }
  friend bool operator==(const ComplexQ& a, const ComplexQ& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const ComplexQ& a, const ComplexQ& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const ComplexQ& c)
  {
    os << '(' << c.re << (c.im < 0 ? " - " : " + ") << abs(c.im) << "i)";
    return os;
  }
};

} // namespace curvosc

#endif
