#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spectra {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A word contains a forbidden transition or an undefined cocycle window.
class InadmissibleWord : public Error {
 public:
  InadmissibleWord(std::size_t index, const std::string& what)
      : Error(what), index_(index) {}

  /// Position of the first symbol of the offending transition/window.
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// An enumeration or materialization would exceed its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A precondition on the inputs does not hold (bad lengths, bad grids, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical routine did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A requested class of measures, window or domain is empty.
class EmptyDomain : public Error {
 public:
  using Error::Error;
};

/// No word meets a skeleton window; carries the smallest K0 that admits one.
class EmptyWindow : public EmptyDomain {
 public:
  EmptyWindow(double suggested_K0, const std::string& what) : EmptyDomain(what), suggested_K0_(suggested_K0) {}

  double suggested_K0() const noexcept { return suggested_K0_; }

 private:
  double suggested_K0_;
};

/// The quantifier schedule could not satisfy one of its inequalities.
class InfeasibleSchedule : public Error {
 public:
  InfeasibleSchedule(std::string inequality, int level, const std::string& what)
      : Error(what), inequality_(std::move(inequality)), level_(level) {}

  const std::string& inequality() const noexcept { return inequality_; }
  int level() const noexcept { return level_; }

 private:
  std::string inequality_;
  int level_;
};

/// Malformed configuration text.
class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, std::size_t column, const std::string& what)
      : Error("config:" + std::to_string(line) + ":" + std::to_string(column) +
              ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace spectra
