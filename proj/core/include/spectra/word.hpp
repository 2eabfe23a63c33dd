#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spectra {

using Symbol = std::uint8_t;

/// Largest alphabet representable in the textual word format (0-9a-z).
inline constexpr int kMaxAlphabet = 36;

/// A finite sequence of symbols. Admissibility is a property relative to a
/// SymbolicSystem and is not enforced here.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}
  Word(std::initializer_list<Symbol> symbols) : symbols_(symbols) {}

  /// Parses "0110" style text. Throws InvalidArgument on characters outside
  /// 0-9a-z.
  static Word parse(std::string_view text);

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  Symbol& operator[](std::size_t i) { return symbols_[i]; }
  Symbol back() const { return symbols_.back(); }
  Symbol front() const { return symbols_.front(); }

  std::span<const Symbol> symbols() const noexcept { return symbols_; }
  std::vector<Symbol>& data() noexcept { return symbols_; }

  void push_back(Symbol s) { symbols_.push_back(s); }
  void append(const Word& other);
  void append(std::span<const Symbol> other);
  void reserve(std::size_t n) { symbols_.reserve(n); }

  Word prefix(std::size_t n) const;
  Word slice(std::size_t begin, std::size_t length) const;
  Word reversed() const;

  std::string str() const;

  friend auto operator<=>(const Word&, const Word&) = default;
  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Symbol> symbols_;
};

Word operator+(const Word& a, const Word& b);

char symbol_char(Symbol s);

/// Dyadic resolution eps = 2^-j of the symbolic metric
/// d(x, y) = 2^-min{i >= 0 : x_i != y_i}.
///
/// Two sequences are (n, 2^-j)-separated, in the sense d_n(x, y) >= 2^-j,
/// iff their prefixes of length n + j differ, and the Bowen ball
/// B_n(x, 2^-j) is the cylinder of depth n + j around x.
struct Resolution {
  int depth_j = 0;

  double epsilon() const;
  std::size_t cylinder_depth(std::size_t n) const {
    return n + static_cast<std::size_t>(depth_j);
  }
};

}  // namespace spectra
