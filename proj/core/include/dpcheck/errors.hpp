#ifndef DPCHECK_ERRORS_HPP
#define DPCHECK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dpcheck {

// Bad arguments or preconditions violated by the caller.
class input_error : public std::invalid_argument {
 public:
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// Maximum-likelihood fitting failed (degenerate data, non-convergence).
class fit_error : public std::runtime_error {
 public:
  explicit fit_error(const std::string& what) : std::runtime_error(what) {}
};

// The divergence estimator could not produce a finite value.
class estimator_error : public std::runtime_error {
 public:
  explicit estimator_error(const std::string& what) : std::runtime_error(what) {}
};

// Data file could not be parsed; carries the 1-based position of the offender.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace dpcheck

#endif
