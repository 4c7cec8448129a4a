#include "alab/expr.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <utility>

namespace alab {

ParseError::ParseError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " at offset " + std::to_string(offset)),
      offset_(offset) {}

Expr make_node(Op op, double value, std::size_t index, Expr a, Expr b) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->value = value;
  node->index = index;
  std::uint32_t depth = 0;
  if (a.node() != nullptr) depth = std::max(depth, a.depth());
  if (b.node() != nullptr) depth = std::max(depth, b.depth());
  node->depth = depth + 1;
  if (node->depth > kMaxExprDepth) {
    throw ExprDepthError("expression depth exceeds " +
                         std::to_string(kMaxExprDepth));
  }
  node->a = std::move(a);
  node->b = std::move(b);
  return Expr(std::move(node));
}

namespace {

bool is_binary(Op op) {
  return op == Op::kAdd || op == Op::kSub || op == Op::kMul ||
         op == Op::kDiv;
}

const char* op_name(Op op) {
  switch (op) {
    case Op::kSin: return "sin";
    case Op::kCos: return "cos";
    case Op::kTan: return "tan";
    case Op::kExp: return "exp";
    case Op::kLog: return "log";
    case Op::kSqrt: return "sqrt";
    default: return "";
  }
}

// Applies `op` to constants; returns false when the result is not a finite
// real, in which case the node is kept symbolic.
bool fold_unary(Op op, double x, double exponent, double* out) {
  double r = 0.0;
  switch (op) {
    case Op::kNeg: r = -x; break;
    case Op::kSin: r = std::sin(x); break;
    case Op::kCos: r = std::cos(x); break;
    case Op::kTan: r = std::tan(x); break;
    case Op::kExp: r = std::exp(x); break;
    case Op::kLog:
      if (x <= 0.0) return false;
      r = std::log(x);
      break;
    case Op::kSqrt:
      if (x < 0.0) return false;
      r = std::sqrt(x);
      break;
    case Op::kPow: r = std::pow(x, exponent); break;
    default: return false;
  }
  if (!std::isfinite(r)) return false;
  *out = r;
  return true;
}

Expr unary(Op op, const Expr& a, double exponent = 0.0) {
  double folded = 0.0;
  if (a.is_constant() && fold_unary(op, a.value(), exponent, &folded)) {
    return Expr::constant(folded);
  }
  return make_node(op, exponent, 0, a, Expr());
}

}  // namespace

// The zero singleton is built by hand so that Expr() does not recurse.
Expr::Expr() {
  static const std::shared_ptr<const Node> kZero = [] {
    auto node = std::make_shared<Node>();
    node->op = Op::kConst;
    node->value = 0.0;
    node->depth = 1;
    return std::shared_ptr<const Node>(node);
  }();
  node_ = kZero;
}

Expr::Expr(double value) : Expr(constant(value)) {}

Expr Expr::constant(double value) {
  if (value == 0.0) return Expr();
  auto node = std::make_shared<Node>();
  node->op = Op::kConst;
  node->value = value;
  node->depth = 1;
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr Expr::coord(std::size_t index) {
  auto node = std::make_shared<Node>();
  node->op = Op::kCoord;
  node->index = index;
  node->depth = 1;
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Op Expr::op() const { return node_->op; }
double Expr::value() const { return node_->value; }
std::size_t Expr::index() const { return node_->index; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }
std::uint32_t Expr::depth() const { return node_->depth; }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() + b.value());
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  return make_node(Op::kAdd, 0.0, 0, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() - b.value());
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return make_node(Op::kSub, 0.0, 0, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() * b.value());
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return make_node(Op::kMul, 0.0, 0, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.value() != 0.0) {
    return Expr(a.value() / b.value());
  }
  if (a.is_zero()) return Expr();
  if (b.is_one()) return a;
  return make_node(Op::kDiv, 0.0, 0, a, b);
}

Expr operator-(const Expr& a) { return unary(Op::kNeg, a); }

Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr sin(const Expr& a) { return unary(Op::kSin, a); }
Expr cos(const Expr& a) { return unary(Op::kCos, a); }
Expr tan(const Expr& a) { return unary(Op::kTan, a); }
Expr exp(const Expr& a) { return unary(Op::kExp, a); }
Expr log(const Expr& a) { return unary(Op::kLog, a); }
Expr sqrt(const Expr& a) { return unary(Op::kSqrt, a); }

Expr pow(const Expr& a, double exponent) {
  if (exponent == 1.0) return a;
  if (exponent == 0.0) return Expr(1.0);
  return unary(Op::kPow, a, exponent);
}

namespace {

class Differentiator {
 public:
  explicit Differentiator(std::size_t coord) : coord_(coord) {}

  Expr operator()(const Expr& e) {
    if (e.op() == Op::kConst) return Expr();
    if (e.op() == Op::kCoord) return Expr(e.index() == coord_ ? 1.0 : 0.0);
    auto it = memo_.find(e.node());
    if (it != memo_.end()) return it->second;
    Expr d = compute(e);
    memo_.emplace(e.node(), d);
    keep_.push_back(e);
    return d;
  }

 private:
  Expr compute(const Expr& e) {
    const Expr& a = e.lhs();
    switch (e.op()) {
      case Op::kNeg: return -(*this)(a);
      case Op::kSin: return cos(a) * (*this)(a);
      case Op::kCos: return -(sin(a) * (*this)(a));
      case Op::kTan: return (*this)(a) / pow(cos(a), 2.0);
      case Op::kExp: return e * (*this)(a);
      case Op::kLog: return (*this)(a) / a;
      case Op::kSqrt: return (*this)(a) / (Expr(2.0) * e);
      case Op::kPow:
        return Expr(e.value()) * pow(a, e.value() - 1.0) * (*this)(a);
      case Op::kAdd: return (*this)(a) + (*this)(e.rhs());
      case Op::kSub: return (*this)(a) - (*this)(e.rhs());
      case Op::kMul: {
        const Expr& b = e.rhs();
        return (*this)(a) * b + a * (*this)(b);
      }
      case Op::kDiv: {
        const Expr& b = e.rhs();
        Expr da = (*this)(a);
        Expr db = (*this)(b);
        if (db.is_zero()) return da / b;
        return (da * b - a * db) / pow(b, 2.0);
      }
      default: return Expr();
    }
  }

  std::size_t coord_;
  std::unordered_map<const Node*, Expr> memo_;
  std::vector<Expr> keep_;
};

// Size of the expression printed as a tree, saturating at `cap`. Shared
// subgraphs are counted once per use, which is what printing costs.
std::size_t tree_size(const Node* node, std::size_t cap,
                      std::unordered_map<const Node*, std::size_t>& memo) {
  if (node->op == Op::kConst || node->op == Op::kCoord) return 1;
  auto it = memo.find(node);
  if (it != memo.end()) return it->second;
  std::size_t n = 1 + tree_size(node->a.node(), cap, memo);
  if (is_binary(node->op)) n += tree_size(node->b.node(), cap, memo);
  n = std::min(n, cap);
  memo.emplace(node, n);
  return n;
}

// Operand text for error messages; large operands are summarized.
std::string operand_text(const Expr& e) {
  constexpr std::size_t kMaxPrinted = 64;
  std::unordered_map<const Node*, std::size_t> memo;
  if (tree_size(e.node(), kMaxPrinted + 1, memo) > kMaxPrinted) {
    return "<expression of " + std::to_string(node_count(e)) + " nodes>";
  }
  return to_string(e);
}

[[noreturn]] void domain_failure(const Node* node, const char* what) {
  std::string text = std::string(what) + " in ";
  switch (node->op) {
    case Op::kDiv:
      text += "(" + operand_text(node->a) + ")/(" + operand_text(node->b) + ")";
      break;
    case Op::kPow:
      text += "(" + operand_text(node->a) + ")^" + to_string(Expr(node->value));
      break;
    case Op::kAdd: case Op::kSub: case Op::kMul:
      text += "(" + operand_text(node->a) + ") and (" + operand_text(node->b) + ")";
      break;
    case Op::kNeg:
      text += "-(" + operand_text(node->a) + ")";
      break;
    default:
      text += std::string(op_name(node->op)) + "(" + operand_text(node->a) + ")";
      break;
  }
  throw DomainError(text);
}

double apply(const Node* node, double x, double y) {
  double r = 0.0;
  switch (node->op) {
    case Op::kNeg: r = -x; break;
    case Op::kSin: r = std::sin(x); break;
    case Op::kCos: r = std::cos(x); break;
    case Op::kTan: r = std::tan(x); break;
    case Op::kExp: r = std::exp(x); break;
    case Op::kLog:
      if (!(x > 0.0)) domain_failure(node, "log of a nonpositive value");
      r = std::log(x);
      break;
    case Op::kSqrt:
      if (x < 0.0) domain_failure(node, "sqrt of a negative value");
      r = std::sqrt(x);
      break;
    case Op::kPow: r = std::pow(x, node->value); break;
    case Op::kAdd: r = x + y; break;
    case Op::kSub: r = x - y; break;
    case Op::kMul: r = x * y; break;
    case Op::kDiv:
      if (y == 0.0) domain_failure(node, "division by zero");
      r = x / y;
      break;
    default: break;
  }
  if (!std::isfinite(r)) domain_failure(node, "nonfinite result");
  return r;
}

double eval_node(const Node* node, std::span<const double> p) {
  switch (node->op) {
    case Op::kConst: return node->value;
    case Op::kCoord:
      if (node->index >= p.size()) {
        throw std::out_of_range("coordinate index " +
                                std::to_string(node->index) +
                                " outside point of size " +
                                std::to_string(p.size()));
      }
      return p[node->index];
    default: break;
  }
  double x = eval_node(node->a.node(), p);
  double y = is_binary(node->op) ? eval_node(node->b.node(), p) : 0.0;
  return apply(node, x, y);
}

}  // namespace

Expr diff(const Expr& e, std::size_t coord) {
  Differentiator d(coord);
  return d(e);
}

double eval(const Expr& e, std::span<const double> point) {
  return eval_node(e.node(), point);
}

double eval(const Expr& e, const Point& point) {
  return eval(e, std::span<const double>(point.data(),
                                         static_cast<std::size_t>(point.size())));
}

PointEvaluator::PointEvaluator(std::span<const double> point)
    : point_(point.begin(), point.end()) {}

PointEvaluator::PointEvaluator(const Point& point)
    : point_(point.data(), point.data() + point.size()) {}

double PointEvaluator::operator()(const Expr& e) {
  if (e.op() != Op::kConst && e.op() != Op::kCoord) held_.push_back(e);
  return visit(e.node());
}

double PointEvaluator::visit(const Node* node) {
  if (node->op == Op::kConst || node->op == Op::kCoord) {
    return eval_node(node, point_);
  }
  auto it = cache_.find(node);
  if (it != cache_.end()) return it->second;
  double x = visit(node->a.node());
  double y = is_binary(node->op) ? visit(node->b.node()) : 0.0;
  double r = apply(node, x, y);
  cache_.emplace(node, r);
  return r;
}

Expr substitute(const Expr& e, const std::function<Expr(std::size_t)>& image) {
  std::unordered_map<const Node*, Expr> memo;
  std::function<Expr(const Expr&)> rec = [&](const Expr& x) -> Expr {
    switch (x.op()) {
      case Op::kConst: return x;
      case Op::kCoord: return image(x.index());
      default: break;
    }
    auto it = memo.find(x.node());
    if (it != memo.end()) return it->second;
    Expr a = rec(x.lhs());
    Expr r;
    switch (x.op()) {
      case Op::kAdd: r = a + rec(x.rhs()); break;
      case Op::kSub: r = a - rec(x.rhs()); break;
      case Op::kMul: r = a * rec(x.rhs()); break;
      case Op::kDiv: r = a / rec(x.rhs()); break;
      case Op::kPow: r = pow(a, x.value()); break;
      default: r = unary(x.op(), a); break;
    }
    memo.emplace(x.node(), r);
    return r;
  };
  Expr out = rec(e);
  return out;
}

bool depends_on(const Expr& e, std::size_t coord) {
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> stack{e.node()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->op == Op::kCoord && n->index == coord) return true;
    if (n->op == Op::kConst || n->op == Op::kCoord) continue;
    if (!seen.insert(n).second) continue;
    stack.push_back(n->a.node());
    if (is_binary(n->op)) stack.push_back(n->b.node());
  }
  return false;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::kConst: return a.value() == b.value();
    case Op::kCoord: return a.index() == b.index();
    case Op::kPow:
      return a.value() == b.value() && structurally_equal(a.lhs(), b.lhs());
    default: break;
  }
  if (!structurally_equal(a.lhs(), b.lhs())) return false;
  return !is_binary(a.op()) || structurally_equal(a.rhs(), b.rhs());
}

std::size_t node_count(const Expr& e) {
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> stack{e.node()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    if (n->op == Op::kConst || n->op == Op::kCoord) continue;
    stack.push_back(n->a.node());
    if (is_binary(n->op)) stack.push_back(n->b.node());
  }
  return seen.size();
}

}  // namespace alab
