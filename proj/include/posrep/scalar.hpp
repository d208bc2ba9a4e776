#pragma once

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

#include "posrep/error.hpp"

namespace posrep {

// Absolute tolerance for the float backend. Set once at startup (CLI --tol).
inline double& tolerance() {
  static double eps = 1e-9;
  return eps;
}

using Rat = mpq_class;

template <class S>
struct Sc;

template <>
struct Sc<Rat> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  static int sign(const Rat& x) { return sgn(x); }
  static bool is_zero(const Rat& x) { return sgn(x) == 0; }
  static bool eq(const Rat& a, const Rat& b) { return a == b; }
  static Rat from_int(long v) { return Rat(v); }
  static Rat from_ratio(long p, long q) {
    Rat r(p, q);
    r.canonicalize();
    return r;
  }
  static double to_double(const Rat& x) { return x.get_d(); }
  static Rat abs(const Rat& x) { return ::abs(x); }
  static std::string str(const Rat& x) { return x.get_str(); }
  static Rat parse(std::string_view s);
};

template <>
struct Sc<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static int sign(double x) { return x > tolerance() ? 1 : (x < -tolerance() ? -1 : 0); }
  static bool is_zero(double x) { return std::fabs(x) <= tolerance(); }
  static bool eq(double a, double b) {
    double scale = std::fmax(1.0, std::fmax(std::fabs(a), std::fabs(b)));
    return std::fabs(a - b) <= tolerance() * scale;
  }
  static double from_int(long v) { return static_cast<double>(v); }
  static double from_ratio(long p, long q) { return static_cast<double>(p) / static_cast<double>(q); }
  static double to_double(double x) { return x; }
  static double abs(double x) { return std::fabs(x); }
  static std::string str(double x) {
    if (x == 0) x = 0;  // drop negative zero
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
  }
  static double parse(std::string_view s);
};

// Accepts "p", "p/q" and plain decimals ("-0.25", "1e-3" only on the float side).
inline Rat Sc<Rat>::parse(std::string_view s) {
  std::string t(s);
  if (t.empty()) throw Error(Err::ParseError, t, "empty number");
  auto dot = t.find('.');
  try {
    if (dot == std::string::npos) {
      Rat r(t, 10);
      if (r.get_den() == 0) throw Error(Err::ParseError, t, "zero denominator");
      r.canonicalize();
      return r;
    }
    std::string intpart = t.substr(0, dot), frac = t.substr(dot + 1);
    bool neg = !intpart.empty() && intpart[0] == '-';
    if (neg || (!intpart.empty() && intpart[0] == '+')) intpart = intpart.substr(1);
    if (intpart.empty()) intpart = "0";
    for (char c : intpart + frac)
      if (c < '0' || c > '9') throw Error(Err::ParseError, t, "bad number '" + t + "'");
    mpz_class num(intpart + frac, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    Rat r(neg ? mpz_class(-num) : num, den);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw Error(Err::ParseError, t, "bad number '" + t + "'");
  }
}

inline double Sc<double>::parse(std::string_view s) {
  std::string t(s);
  auto slash = t.find('/');
  try {
    size_t used = 0;
    if (slash != std::string::npos) {
      double p = std::stod(t.substr(0, slash), &used);
      double q = std::stod(t.substr(slash + 1));
      if (q == 0) throw Error(Err::ParseError, t, "zero denominator");
      return p / q;
    }
    double v = std::stod(t, &used);
    if (used != t.size()) throw Error(Err::ParseError, t, "bad number '" + t + "'");
    return v;
  } catch (const std::logic_error&) {
    throw Error(Err::ParseError, t, "bad number '" + t + "'");
  }
}

}  // namespace posrep
