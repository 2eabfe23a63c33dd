#include "spectra/bigint.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spectra {

double log_big(const BigInt& x) {
  if (x < 0) throw std::domain_error("log_big: negative argument");
  if (x == 0) return -std::numeric_limits<double>::infinity();
  const std::size_t bits = boost::multiprecision::msb(x) + 1;
  if (bits <= 64) return std::log(static_cast<double>(x.convert_to<std::uint64_t>()));
  // Keep the leading 64 bits; the discarded tail only perturbs the 20th digit.
  const std::size_t shift = bits - 64;
  const BigInt head = x >> shift;
  return std::log(static_cast<double>(head.convert_to<std::uint64_t>())) +
         static_cast<double>(shift) * std::log(2.0);
}

double log_big(const BigRational& x) {
  if (x < 0) throw std::domain_error("log_big: negative argument");
  if (x == 0) return -std::numeric_limits<double>::infinity();
  return log_big(boost::multiprecision::numerator(x)) -
         log_big(boost::multiprecision::denominator(x));
}

double to_double(const BigInt& x) {
  if (x == 0) return 0.0;
  if (boost::multiprecision::msb(x < 0 ? BigInt(-x) : x) >= 1023)
    return x < 0 ? -std::numeric_limits<double>::infinity()
                 : std::numeric_limits<double>::infinity();
  return x.convert_to<double>();
}

double to_double(const BigRational& x) {
  if (x == 0) return 0.0;
  const double l = log_big(x < 0 ? BigRational(-x) : x);
  if (l > 709.0) return x < 0 ? -std::numeric_limits<double>::infinity()
                              : std::numeric_limits<double>::infinity();
  if (l < -744.0) return 0.0;
  return x.convert_to<double>();
}

BigInt uniform_below(const BigInt& bound, std::mt19937_64& rng) {
  if (bound <= 0) throw std::invalid_argument("uniform_below: bound must be positive");
  if (bound == 1) return 0;
  const std::size_t bits = boost::multiprecision::msb(BigInt(bound - 1)) + 1;
  const std::size_t words = (bits + 63) / 64;
  const std::size_t excess = words * 64 - bits;
  for (;;) {
    BigInt candidate = 0;
    for (std::size_t i = 0; i < words; ++i) {
      candidate <<= 64;
      candidate |= BigInt(rng());
    }
    candidate >>= excess;
    if (candidate < bound) return candidate;
  }
}

std::string to_string(const BigInt& x) { return x.str(); }

}  // namespace spectra
