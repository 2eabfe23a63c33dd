#include "spectra/symbolic_system.hpp"

#include <sstream>

#include "spectra/errors.hpp"

namespace spectra {
namespace {

using Matrix = SymbolicSystem::Matrix;

Matrix bool_product(const Matrix& a, const Matrix& b) {
  const std::size_t k = a.size();
  Matrix out(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t l = 0; l < k; ++l)
      if (a[i][l])
        for (std::size_t j = 0; j < k; ++j)
          if (b[l][j]) out[i][j] = true;
  return out;
}

bool all_positive(const Matrix& m) {
  for (const auto& row : m)
    for (bool v : row)
      if (!v) return false;
  return true;
}

}  // namespace

SymbolicSystem::SymbolicSystem(Matrix transitions) : transitions_(std::move(transitions)) {
  validate_and_index();
  bridge_length_ = primitivity_exponent_ - 1;
  bridges_.assign(static_cast<std::size_t>(k_), std::vector<Word>(static_cast<std::size_t>(k_)));
  for (int a = 0; a < k_; ++a)
    for (int b = 0; b < k_; ++b)
      bridges_[a][b] = connect(static_cast<Symbol>(a), static_cast<Symbol>(b), bridge_length_);
}

SymbolicSystem::SymbolicSystem(Matrix transitions, std::vector<std::vector<Word>> bridges)
    : transitions_(std::move(transitions)), bridges_(std::move(bridges)) {
  validate_and_index();
  if (bridges_.size() != static_cast<std::size_t>(k_))
    throw InvalidArgument("bridge table must have one row per symbol");
  bridge_length_ = bridges_[0].empty() ? 0 : bridges_[0][0].size();
  for (int a = 0; a < k_; ++a) {
    if (bridges_[a].size() != static_cast<std::size_t>(k_))
      throw InvalidArgument("bridge table row " + std::to_string(a) + " has wrong size");
    for (int b = 0; b < k_; ++b) {
      const Word& w = bridges_[a][b];
      if (w.size() != bridge_length_)
        throw InvalidArgument("bridge entries must share one length");
      Word joined{static_cast<Symbol>(a)};
      joined.append(w);
      joined.push_back(static_cast<Symbol>(b));
      if (!admissible(joined))
        throw InvalidArgument("bridge " + std::to_string(a) + "->" + std::to_string(b) +
                              " '" + w.str() + "' is not admissible");
    }
  }
  if (bridge_length_ + 1 < primitivity_exponent_) {
    // Shorter than the mixing gap: lengths between l# and the exponent may
    // have no bridge at all, so connect() could fail for some pairs.
    throw InvalidArgument("bridge length " + std::to_string(bridge_length_) +
                          " is below the mixing gap " +
                          std::to_string(primitivity_exponent_ - 1));
  }
}

void SymbolicSystem::validate_and_index() {
  k_ = static_cast<int>(transitions_.size());
  if (k_ < 2) throw InvalidArgument("alphabet size must be at least 2");
  if (k_ > kMaxAlphabet)
    throw InvalidArgument("alphabet size exceeds " + std::to_string(kMaxAlphabet));
  full_shift_ = true;
  for (const auto& row : transitions_) {
    if (row.size() != static_cast<std::size_t>(k_))
      throw InvalidArgument("transition matrix must be square");
    for (bool v : row) full_shift_ = full_shift_ && v;
  }
  // Wielandt: a primitive k x k matrix has A^p > 0 for p = (k-1)^2 + 1.
  const std::size_t wielandt = static_cast<std::size_t>((k_ - 1) * (k_ - 1) + 1);
  reach_.clear();
  Matrix identity(static_cast<std::size_t>(k_), std::vector<bool>(static_cast<std::size_t>(k_), false));
  for (int i = 0; i < k_; ++i) identity[i][i] = true;
  reach_.push_back(identity);
  Matrix power = transitions_;
  std::size_t p = 1;
  while (!all_positive(power)) {
    if (p >= wielandt)
      throw InvalidArgument("transition matrix is not primitive (irreducible and aperiodic)");
    reach_.push_back(power);
    power = bool_product(power, transitions_);
    ++p;
  }
  primitivity_exponent_ = p;
}

SymbolicSystem SymbolicSystem::full_shift(int alphabet_size) {
  if (alphabet_size < 2) throw InvalidArgument("alphabet size must be at least 2");
  return SymbolicSystem(Matrix(static_cast<std::size_t>(alphabet_size),
                               std::vector<bool>(static_cast<std::size_t>(alphabet_size), true)));
}

SymbolicSystem SymbolicSystem::with_forbidden(int alphabet_size, const std::vector<Word>& forbidden) {
  if (alphabet_size < 2) throw InvalidArgument("alphabet size must be at least 2");
  Matrix m(static_cast<std::size_t>(alphabet_size),
           std::vector<bool>(static_cast<std::size_t>(alphabet_size), true));
  for (const Word& w : forbidden) {
    if (w.size() != 2)
      throw InvalidArgument("forbidden word '" + w.str() + "' must have length 2");
    if (w[0] >= alphabet_size || w[1] >= alphabet_size)
      throw InvalidArgument("forbidden word '" + w.str() + "' uses symbols outside the alphabet");
    m[w[0]][w[1]] = false;
  }
  return SymbolicSystem(std::move(m));
}

std::optional<std::size_t> SymbolicSystem::first_violation(const Word& w) const {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] >= k_) return i;
    if (i + 1 < w.size() && (w[i + 1] >= k_ || !transitions_[w[i]][w[i + 1]])) return i;
  }
  return std::nullopt;
}

void SymbolicSystem::require_admissible(const Word& w) const {
  if (auto bad = first_violation(w)) {
    std::ostringstream os;
    os << "inadmissible word '" << w.str() << "': transition at index " << *bad;
    if (*bad + 1 < w.size()) os << " (" << symbol_char(w[*bad]) << symbol_char(w[*bad + 1]) << ")";
    os << " is forbidden";
    throw InadmissibleWord(*bad, os.str());
  }
}

bool SymbolicSystem::reachable(Symbol a, Symbol b, std::size_t steps) const {
  if (steps >= primitivity_exponent_) return true;
  return reach_[steps][a][b];
}

Word SymbolicSystem::connect(Symbol a, Symbol b, std::size_t length) const {
  if (!reachable(a, b, length + 1))
    throw InvalidArgument("no admissible bridge of length " + std::to_string(length) + " from " +
                          std::string(1, symbol_char(a)) + " to " + std::string(1, symbol_char(b)));
  Word out;
  out.reserve(length);
  Symbol current = a;
  for (std::size_t i = 0; i < length; ++i) {
    const std::size_t remaining = length - i;  // steps from the next symbol to b
    for (int c = 0; c < k_; ++c) {
      if (transitions_[current][c] && reachable(static_cast<Symbol>(c), b, remaining)) {
        current = static_cast<Symbol>(c);
        break;
      }
    }
    out.push_back(current);
  }
  return out;
}

Word SymbolicSystem::continuation(Symbol a, std::size_t length) const {
  Word out;
  out.reserve(length);
  Symbol current = a;
  for (std::size_t i = 0; i < length; ++i) {
    for (int c = 0; c < k_; ++c) {
      if (transitions_[current][c]) {
        current = static_cast<Symbol>(c);
        break;
      }
    }
    out.push_back(current);
  }
  return out;
}

SymbolicSystem SymbolicSystem::reversed() const {
  Matrix t(static_cast<std::size_t>(k_), std::vector<bool>(static_cast<std::size_t>(k_), false));
  for (int a = 0; a < k_; ++a)
    for (int b = 0; b < k_; ++b) t[b][a] = transitions_[a][b];
  return SymbolicSystem(std::move(t));
}

std::string SymbolicSystem::describe() const {
  std::ostringstream os;
  os << (full_shift_ ? "full shift" : "SFT") << " on " << k_ << " symbols, bridge length "
     << bridge_length_;
  return os.str();
}

}  // namespace spectra
