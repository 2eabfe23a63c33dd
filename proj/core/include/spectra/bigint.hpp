#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <random>
#include <string>

namespace spectra {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Natural logarithm of a positive integer of arbitrary size. Accurate to
/// about 1e-15 relative; returns -inf for zero.
double log_big(const BigInt& x);

/// Natural logarithm of a non-negative rational.
double log_big(const BigRational& x);

/// Conversion that saturates to +inf instead of throwing.
double to_double(const BigInt& x);
double to_double(const BigRational& x);

/// Uniform integer in [0, bound) drawn by rejection from 64-bit words.
BigInt uniform_below(const BigInt& bound, std::mt19937_64& rng);

std::string to_string(const BigInt& x);

}  // namespace spectra
