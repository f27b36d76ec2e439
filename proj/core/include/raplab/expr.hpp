#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace raplab {

/// Compiled arithmetic expression over named scalar slots.
///
/// Grammar: + - * / ^, unary minus, parentheses, numbers, identifiers, and the
/// functions sin, cos, ln (alias log), exp, abs, sqrt, pow(a, b) and
/// norm(a, b, ...) (Euclidean norm of the arguments). Identifiers are resolved
/// against the slot names given at compile time; `pi` is predefined.
class Expr {
 public:
  static constexpr int kMaxDepth = 32;

  /// Throws ParseError on syntax errors, unknown identifiers, or trees deeper
  /// than kMaxDepth.
  static Expr compile(std::string_view source, const std::vector<std::string>& slots);

  double eval(const double* slots) const;

  const std::string& source() const { return source_; }
  int depth() const { return depth_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
  int depth_ = 0;
};

}  // namespace raplab
