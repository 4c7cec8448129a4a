#pragma once

// Symbolic scalar expressions over a chart's base coordinates.
//
// An Expr is an immutable handle to a shared node graph. Construction goes
// through the arithmetic operators and the free functions below, which fold
// constants (c1 op c2, x+0, x*1, x*0, ...) so that iterated brackets do not
// accumulate dead subtrees. No other rewriting is performed.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace alab {

/// Base-point coordinates x^i.
using Point = Eigen::VectorXd;

/// Maximum node depth accepted by the constructors.
inline constexpr std::uint32_t kMaxExprDepth = 10000;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ExprDepthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Op : std::uint8_t {
  kConst,
  kCoord,
  kNeg,
  kSin,
  kCos,
  kTan,
  kExp,
  kLog,
  kSqrt,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
};

struct Node;

class Expr {
 public:
  /// The zero constant.
  Expr();
  Expr(double value);  // NOLINT(google-explicit-constructor)

  static Expr constant(double value);
  static Expr coord(std::size_t index);

  Op op() const;
  /// Constant value, or the exponent of a kPow node.
  double value() const;
  /// Coordinate index of a kCoord node.
  std::size_t index() const;
  /// Operands; `rhs()` is only meaningful for binary nodes.
  const Expr& lhs() const;
  const Expr& rhs() const;
  std::uint32_t depth() const;

  bool is_constant() const { return op() == Op::kConst; }
  bool is_zero() const { return is_constant() && value() == 0.0; }
  bool is_one() const { return is_constant() && value() == 1.0; }

  const Node* node() const { return node_.get(); }

 private:
  struct NullTag {};
  explicit Expr(NullTag) {}
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  friend Expr make_node(Op, double, std::size_t, Expr, Expr);
  friend struct Node;

  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op;
  double value = 0.0;
  std::size_t index = 0;
  // Leaves and unary nodes hold null handles in unused slots.
  Expr a{Expr::NullTag{}};
  Expr b{Expr::NullTag{}};
  std::uint32_t depth = 1;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr tan(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sqrt(const Expr& a);
/// a^exponent; only constant exponents are representable.
Expr pow(const Expr& a, double exponent);

/// Exact partial derivative with respect to coordinate `coord`.
Expr diff(const Expr& e, std::size_t coord);

/// Recursive IEEE evaluation. Throws DomainError on division by zero, log of
/// a nonpositive number, sqrt of a negative number or a nonfinite result.
/// Walks the expression as a tree; graphs with heavy sharing (derivatives
/// of deep expressions) are cheaper through PointEvaluator.
double eval(const Expr& e, std::span<const double> point);
double eval(const Expr& e, const Point& point);

/// Evaluates many expressions at one point, sharing the values of common
/// subgraphs between calls. Evaluated roots are held until the evaluator is
/// destroyed, so cached node addresses cannot be reused by new nodes.
class PointEvaluator {
 public:
  explicit PointEvaluator(std::span<const double> point);
  explicit PointEvaluator(const Point& point);

  double operator()(const Expr& e);
  std::span<const double> point() const { return point_; }

 private:
  double visit(const Node* node);

  std::vector<double> point_;
  std::vector<Expr> held_;
  std::unordered_map<const Node*, double> cache_;
};

/// Replaces every coordinate node by `image(index)`; the result is rebuilt
/// through the folding constructors.
Expr substitute(const Expr& e, const std::function<Expr(std::size_t)>& image);

bool depends_on(const Expr& e, std::size_t coord);
bool structurally_equal(const Expr& a, const Expr& b);
/// Number of distinct nodes in the expression graph.
std::size_t node_count(const Expr& e);

/// Parses `text` with the grammar
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := ('-')? power
///   power  := atom ('^' ('-')? number)?
///   atom   := number | ident | func '(' expr ')' | '(' expr ')'
/// where identifiers name entries of `coords`.
Expr parse(std::string_view text, std::span<const std::string> coords);

/// Canonical text form. parse(to_string(e)) reproduces the tree exactly.
std::string to_string(const Expr& e, std::span<const std::string> coords);
/// Canonical text form with placeholder names x1, x2, ...
std::string to_string(const Expr& e);

}  // namespace alab
