#pragma once

#include <cmath>

#include "spectra/cocycle.hpp"

namespace bench {

inline spectra::CenterCocycle reference() {
  return spectra::CenterCocycle::locally_constant(spectra::SymbolicSystem::full_shift(2),
                                                  {std::log(0.25), std::log(2.0)});
}

inline spectra::CenterCocycle golden() {
  return spectra::CenterCocycle::locally_constant(
      spectra::SymbolicSystem::with_forbidden(2, {spectra::Word::parse("11")}), {0.5, -1.0});
}

}  // namespace bench
