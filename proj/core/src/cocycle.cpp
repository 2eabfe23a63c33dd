#include "spectra/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spectra/errors.hpp"

namespace spectra {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

CenterCocycle::CenterCocycle(SymbolicSystem system, int depth, std::vector<double> values)
    : system_(std::move(system)), depth_(depth) {
  if (depth_ < 1) throw InvalidArgument("cocycle depth must be at least 1");
  const auto k = static_cast<std::size_t>(system_.alphabet_size());
  const std::size_t total = ipow(k, depth_);
  if (total > (std::size_t{1} << 24))
    throw InvalidArgument("cocycle table k^d is too large");
  table_.assign(total, kNaN);

  // Admissible d-words in lexicographic order = increasing base-k code.
  std::vector<Symbol> digits(static_cast<std::size_t>(depth_));
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t x = code;
    for (int i = depth_ - 1; i >= 0; --i) {
      digits[static_cast<std::size_t>(i)] = static_cast<Symbol>(x % k);
      x /= k;
    }
    Word w{std::vector<Symbol>(digits)};
    if (system_.admissible(w)) windows_.push_back(std::move(w));
  }
  if (values.size() != windows_.size())
    throw InvalidArgument("cocycle needs " + std::to_string(windows_.size()) +
                          " values (one per admissible " + std::to_string(depth_) +
                          "-word), got " + std::to_string(values.size()));
  values_ = std::move(values);
  min_ = std::numeric_limits<double>::infinity();
  max_ = -min_;
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v))
      throw InvalidArgument("cocycle value for '" + windows_[i].str() + "' is not finite");
    table_[encode(windows_[i].symbols())] = v;
    min_ = std::min(min_, v);
    max_ = std::max(max_, v);
    max_abs_ = std::max(max_abs_, std::abs(v));
  }

  variation_ = 0.0;
  if (depth_ > 1) {
    // Windows sharing their first d-1 symbols are contiguous in code order.
    const std::size_t group = k;
    for (std::size_t base = 0; base < total; base += group) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (std::size_t c = base; c < base + group; ++c) {
        if (std::isnan(table_[c])) continue;
        lo = std::min(lo, table_[c]);
        hi = std::max(hi, table_[c]);
      }
      if (hi >= lo) variation_ = std::max(variation_, hi - lo);
    }
  }
}

CenterCocycle CenterCocycle::locally_constant(SymbolicSystem system, std::vector<double> per_symbol) {
  return CenterCocycle(std::move(system), 1, std::move(per_symbol));
}

std::size_t CenterCocycle::encode(std::span<const Symbol> window) const {
  const auto k = static_cast<std::size_t>(system_.alphabet_size());
  std::size_t code = 0;
  for (Symbol s : window) code = code * k + s;
  return code;
}

bool CenterCocycle::defined(std::size_t code) const {
  return code < table_.size() && !std::isnan(table_[code]);
}

double CenterCocycle::value(std::span<const Symbol> window) const {
  if (window.size() != static_cast<std::size_t>(depth_))
    throw InvalidArgument("cocycle window must have length " + std::to_string(depth_));
  for (Symbol s : window)
    if (s >= system_.alphabet_size()) throw InvalidArgument("symbol outside the alphabet");
  const double v = table_[encode(window)];
  if (std::isnan(v)) throw InadmissibleWord(0, "cocycle window is not admissible");
  return v;
}

double birkhoff_sum(const Word& w, const CenterCocycle& c, BoundaryMode mode) {
  if (w.empty()) return 0.0;
  c.system().require_admissible(w);
  const auto d = static_cast<std::size_t>(c.depth());
  const std::size_t n = w.size();
  if (mode == BoundaryMode::kTruncated) {
    if (n < d)
      throw InvalidArgument("word of length " + std::to_string(n) +
                            " is shorter than the cocycle depth " + std::to_string(d));
    double sum = 0.0;
    for (std::size_t i = 0; i + d <= n; ++i) sum += c.value_by_code(c.encode(w.symbols().subspan(i, d)));
    return sum;
  }
  // Periodic closure: window i reads w_i ... w_{i+d-1} cyclically.
  const auto k = static_cast<std::size_t>(c.alphabet_size());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t code = 0;
    for (std::size_t j = 0; j < d; ++j) code = code * k + w[(i + j) % n];
    if (!c.defined(code))
      throw InadmissibleWord(i, "periodic closure window at index " + std::to_string(i) +
                                    " is not admissible");
    sum += c.value_by_code(code);
  }
  return sum;
}

double finite_time_exponent(const Word& w, const CenterCocycle& c, BoundaryMode mode) {
  if (w.empty()) throw InvalidArgument("finite-time exponent of the empty word");
  return birkhoff_sum(w, c, mode) / static_cast<double>(w.size());
}

std::vector<double> prefix_sums(const Word& w, const CenterCocycle& c) {
  c.system().require_admissible(w);
  const auto d = static_cast<std::size_t>(c.depth());
  std::vector<double> out(w.size(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i + 1 >= d) sum += c.value_by_code(c.encode(w.symbols().subspan(i + 1 - d, d)));
    out[i] = sum;
  }
  return out;
}

}  // namespace spectra
