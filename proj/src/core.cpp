#include "vv/core.hpp"

#include <cmath>
#include <cstdio>

namespace vv {

Rational parseRational(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw Error("empty rational");
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt p(s.substr(0, slash)), q(s.substr(slash + 1));
      if (q == 0) throw Error("zero denominator in '" + raw + "'");
      return Rational(p, q);
    }
    // Decimal with optional exponent.
    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
    BigInt mant = 0;
    int scale = 0;
    bool digits = false, dot = false;
    for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
      if (s[i] == '.') {
        if (dot) throw Error("malformed rational '" + raw + "'");
        dot = true;
        continue;
      }
      mant = mant * 10 + (s[i] - '0');
      digits = true;
      if (dot) --scale;
    }
    if (!digits) throw Error("malformed rational '" + raw + "'");
    if (i < s.size()) {
      if (s[i] != 'e' && s[i] != 'E') throw Error("malformed rational '" + raw + "'");
      std::size_t used = 0;
      int e = std::stoi(s.substr(i + 1), &used);
      if (i + 1 + used != s.size()) throw Error("malformed rational '" + raw + "'");
      scale += e;
    }
    Rational r(mant);
    BigInt p10 = boost::multiprecision::pow(BigInt(10), std::abs(scale));
    r = scale >= 0 ? r * Rational(p10) : r / Rational(p10);
    return neg ? -r : r;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error("malformed rational '" + raw + "'");
  }
}

std::string formatRational(const Rational& r) {
  auto num = boost::multiprecision::numerator(r);
  auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double toDouble(const Rational& r) { return r.convert_to<double>(); }

Rational rationalFromDouble(double x) {
  if (!std::isfinite(x)) throw Error("non-finite value has no rational form");
  if (x == 0) return Rational(0);
  int e = 0;
  double m = std::frexp(x, &e);  // x = m 2^e, |m| in [0.5,1)
  auto mi = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  Rational r{BigInt(mi)};
  BigInt p2 = BigInt(1) << std::abs(e);
  return e >= 0 ? r * Rational(p2) : r / Rational(p2);
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Rng makeStream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x76u};
  return Rng(seq);
}

}  // namespace vv
