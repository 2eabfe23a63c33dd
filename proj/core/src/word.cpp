#include "spectra/word.hpp"

#include <algorithm>
#include <cmath>

#include "spectra/errors.hpp"

namespace spectra {

Word Word::parse(std::string_view text) {
  std::vector<Symbol> out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c >= '0' && c <= '9') {
      out.push_back(static_cast<Symbol>(c - '0'));
    } else if (c >= 'a' && c <= 'z') {
      out.push_back(static_cast<Symbol>(10 + c - 'a'));
    } else {
      throw InvalidArgument("invalid symbol '" + std::string(1, c) +
                            "' at position " + std::to_string(i));
    }
  }
  return Word(std::move(out));
}

void Word::append(const Word& other) { append(other.symbols()); }

void Word::append(std::span<const Symbol> other) {
  symbols_.insert(symbols_.end(), other.begin(), other.end());
}

Word Word::prefix(std::size_t n) const { return slice(0, n); }

Word Word::slice(std::size_t begin, std::size_t length) const {
  if (begin + length > symbols_.size())
    throw InvalidArgument("slice [" + std::to_string(begin) + ", " +
                          std::to_string(begin + length) + ") exceeds word length " +
                          std::to_string(symbols_.size()));
  return Word(std::vector<Symbol>(symbols_.begin() + static_cast<std::ptrdiff_t>(begin),
                                  symbols_.begin() + static_cast<std::ptrdiff_t>(begin + length)));
}

Word Word::reversed() const {
  std::vector<Symbol> r(symbols_.rbegin(), symbols_.rend());
  return Word(std::move(r));
}

char symbol_char(Symbol s) {
  return s < 10 ? static_cast<char>('0' + s) : static_cast<char>('a' + (s - 10));
}

std::string Word::str() const {
  std::string s;
  s.reserve(symbols_.size());
  for (Symbol x : symbols_) s.push_back(symbol_char(x));
  return s;
}

Word operator+(const Word& a, const Word& b) {
  Word out = a;
  out.append(b);
  return out;
}

double Resolution::epsilon() const { return std::ldexp(1.0, -depth_j); }

}  // namespace spectra
