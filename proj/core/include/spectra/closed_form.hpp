#pragma once

#include <optional>
#include <vector>

namespace spectra {

/// -p log p - (1 - p) log(1 - p), with 0 log 0 = 0.
double binary_entropy(double p);

/// log sum_i e^{q phi_i}: pressure of a locally constant potential on the
/// full shift.
double bernoulli_pressure(const std::vector<double>& phi, double q);

/// Digit-frequency spectrum of a locally constant potential on the full
/// shift: the largest entropy of a probability vector p with sum p_i phi_i
/// = alpha. For two symbols this is binary_entropy of the frequency of the
/// first symbol; for more symbols the maximizer is p_i proportional to
/// e^{q phi_i}, found by bisection on q. Undefined outside [min, max].
std::optional<double> bernoulli_spectrum(const std::vector<double>& phi, double alpha);

}  // namespace spectra
