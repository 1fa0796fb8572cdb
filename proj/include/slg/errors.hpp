#ifndef SLG_ERRORS_HPP
#define SLG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace slg {

// Syntax error in a grammar, corpus, or parameter file.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line, int col)
      : std::runtime_error(format(msg, line, col)), line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  static std::string format(const std::string& msg, int line, int col) {
    return "line " + std::to_string(line) + ", col " + std::to_string(col) +
           ": " + msg;
  }
  int line_ = 0;
  int col_ = 0;
};

// An unsmoothed model was queried for a conditioning context it has no
// distribution for. Distinct from a zero-probability outcome, which scores
// as -inf rather than raising.
class MissingContextError : public std::runtime_error {
 public:
  explicit MissingContextError(const std::string& context)
      : std::runtime_error("missing context: " + context) {}
};

// A sampling or enumeration budget was exhausted before completion.
class BudgetExceededError : public std::runtime_error {
 public:
  explicit BudgetExceededError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace slg

#endif  // SLG_ERRORS_HPP
