#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>

#include <boost/integer/common_factor.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "mtjrng/entropy.hpp"
#include "mtjrng/error.hpp"
#include "mtjrng/extractor.hpp"

namespace mtjrng::extract {

using boost::multiprecision::cpp_int;
using Float = boost::multiprecision::cpp_bin_float_100;

namespace {

cpp_int pow10(unsigned e) {
  cpp_int out = 1;
  for (unsigned i = 0; i < e; ++i) out *= 10;
  return out;
}

}  // namespace

Epsilon::Epsilon(cpp_int num, cpp_int den, std::string text)
    : num_(std::move(num)), den_(std::move(den)), text_(std::move(text)) {
  const cpp_int g = boost::multiprecision::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ <= 0 || num_ >= den_) {
    throw ConfigError("epsilon must lie strictly between 0 and 1, got " + text_);
  }
}

Epsilon Epsilon::parse(std::string_view text) {
  std::size_t i = 0;
  cpp_int mantissa = 0;
  int fraction_digits = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      seen_digit = true;
      if (seen_point) ++fraction_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
    const std::size_t start = i;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 100000) throw ConfigError("epsilon exponent out of range");
    }
    if (i == start) seen_digit = false;
    if (negative) exponent = -exponent;
  }
  if (!seen_digit || i != text.size()) {
    throw ConfigError("epsilon is not a decimal number: '" + std::string(text) + "'");
  }
  const long scale = exponent - fraction_digits;
  if (scale >= 0) {
    return Epsilon(mantissa * pow10(static_cast<unsigned>(scale)), 1, std::string(text));
  }
  return Epsilon(mantissa, pow10(static_cast<unsigned>(-scale)), std::string(text));
}

Epsilon Epsilon::from_double(double value) {
  if (!(value > 0.0 && value < 1.0)) {
    throw ConfigError("epsilon must lie strictly between 0 and 1");
  }
  int exp2 = 0;
  const double frac = std::frexp(value, &exp2);  // value = frac * 2^exp2, exp2 <= 0
  const auto mantissa = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return Epsilon(cpp_int(mantissa), cpp_int(1) << (53 - exp2), buf);
}

double Epsilon::value() const { return static_cast<double>(Float(num_) / Float(den_)); }

bool Epsilon::is_power_of_two() const { return num_ == 1 && (den_ & (den_ - 1)) == 0; }

double Epsilon::log2_inverse() const {
  return static_cast<double>((log(Float(den_)) - log(Float(num_))) / log(Float(2)));
}

std::uint64_t output_length(std::uint64_t k, const Epsilon& eps) {
  if (k < 1) throw InsufficientEntropy("min-entropy bound k must be at least 1");
  cpp_int floor_value;
  if (eps.is_power_of_two()) {
    // 1/eps = 2^j, so the expression is an integer.
    const auto j = static_cast<long>(boost::multiprecision::msb(eps.denominator()));
    floor_value = cpp_int(k) + 2 - 2 * j;
  } else {
    // 2*log2(1/eps) is irrational here; 100 decimal digits put the floor
    // beyond doubt unless the value sits implausibly close to an integer.
    const Float v = Float(k) + 2 -
                    2 * (log(Float(eps.denominator())) - log(Float(eps.numerator()))) / log(Float(2));
    const Float f = floor(v);
    if (v - f < Float("1e-60") || (f + 1) - v < Float("1e-60")) {
      throw StageError("cannot certify the floor of the output length for epsilon " + eps.text());
    }
    floor_value = f.convert_to<cpp_int>();
  }
  if (floor_value < 1) {
    throw InsufficientEntropy("k = " + std::to_string(k) + " bits is too little min-entropy for" +
                              " epsilon = " + eps.text() + "; need k > 2*log2(1/epsilon) - 1");
  }
  if (floor_value > k) return k;
  return floor_value.convert_to<std::uint64_t>();
}

ExtractorParams ExtractorParams::derive(std::uint64_t n, std::uint64_t k, const Epsilon& eps) {
  if (k > n) throw ConfigError("min-entropy bound k exceeds the input length n");
  ExtractorParams p;
  p.n = n;
  p.k = k;
  p.epsilon = eps;
  p.m = output_length(k, eps);
  p.r = n + p.m - 1;
  return p;
}

void ExtractorParams::validate() const {
  if (n == 0) throw ConfigError("extractor input length must be positive");
  if (k > n) throw ConfigError("min-entropy bound k exceeds the input length n");
  if (m < 1 || m > k) throw ConfigError("output length must satisfy 1 <= m <= k");
  if (m != output_length(k, epsilon)) {
    throw ConfigError("output length " + std::to_string(m) +
                      " does not match floor(k - 2 log2(1/eps) + 2) = " +
                      std::to_string(output_length(k, epsilon)));
  }
  if (r != n + m - 1) throw ConfigError("seed length must equal n + m - 1");
}

ExtractorParams chunk_params(std::size_t chunk_bits, double h_per_bit, const Epsilon& eps) {
  if (chunk_bits == 0) throw ConfigError("chunk length must be positive");
  return ExtractorParams::derive(chunk_bits, entropy::extractable_bits(chunk_bits, h_per_bit), eps);
}

}  // namespace mtjrng::extract
