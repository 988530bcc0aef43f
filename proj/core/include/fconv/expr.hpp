#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fconv {

/// Raised when an expression string cannot be parsed. Carries the byte
/// offset of the offending token and the set of tokens that were expected.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset, std::vector<std::string> expected);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Raised when evaluation hits a domain fault (division by zero, log of a
/// nonpositive value, ...) or produces a non-finite intermediate. Carries
/// the source text of the offending subexpression.
class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& reason, std::string subexpression);

  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

/// A parsed arithmetic expression in one variable `x`.
///
/// Grammar: + - * / ^ with `^` right-associative and binding tighter than
/// unary minus; no implicit multiplication; functions sin cos tan exp log
/// abs sqrt; constants pi and e are folded to numeric literals at parse
/// time. Copies share the immutable syntax tree.
class Expression {
 public:
  struct Node;  // syntax tree node, defined in the implementation

  static Expression parse(std::string_view text);

  /// Evaluate at x. Throws EvalError on domain faults or non-finite results.
  double operator()(double x) const;

  /// Canonical form with minimal parentheses; parses back to an equal tree.
  std::string str() const;

  /// Structural tree equality.
  bool equal_tree(const Expression& other) const;

  const std::string& source() const { return source_; }

 private:
  Expression(std::shared_ptr<const Node> root, std::string source);

  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace fconv
