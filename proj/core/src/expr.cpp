#include "raplab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "raplab/error.hpp"

namespace raplab {

struct Expr::Node {
  enum class Op { Const, Slot, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Ln, Exp, Abs, Sqrt, Norm };
  Op op = Op::Const;
  double value = 0.0;
  std::size_t slot = 0;
  std::vector<std::unique_ptr<Node>> args;

  double eval(const double* s) const {
    switch (op) {
      case Op::Const: return value;
      case Op::Slot: return s[slot];
      case Op::Neg: return -args[0]->eval(s);
      case Op::Add: return args[0]->eval(s) + args[1]->eval(s);
      case Op::Sub: return args[0]->eval(s) - args[1]->eval(s);
      case Op::Mul: return args[0]->eval(s) * args[1]->eval(s);
      case Op::Div: return args[0]->eval(s) / args[1]->eval(s);
      case Op::Pow: return std::pow(args[0]->eval(s), args[1]->eval(s));
      case Op::Sin: return std::sin(args[0]->eval(s));
      case Op::Cos: return std::cos(args[0]->eval(s));
      case Op::Ln: return std::log(args[0]->eval(s));
      case Op::Exp: return std::exp(args[0]->eval(s));
      case Op::Abs: return std::abs(args[0]->eval(s));
      case Op::Sqrt: return std::sqrt(args[0]->eval(s));
      case Op::Norm: {
        double acc = 0.0;
        for (const auto& a : args) {
          const double v = a->eval(s);
          acc += v * v;
        }
        return std::sqrt(acc);
      }
    }
    return 0.0;
  }

  int depth() const {
    int d = 0;
    for (const auto& a : args) d = std::max(d, a->depth());
    return d + 1;
  }
};

namespace {

using Node = Expr::Node;
using Op = Node::Op;

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& slots) : src_(src), slots_(slots) {}

  std::unique_ptr<Node> parse() {
    auto n = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError, "expression '" + std::string(src_) + "' at " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  static std::unique_ptr<Node> make(Op op, std::unique_ptr<Node> a, std::unique_ptr<Node> b = nullptr) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->args.push_back(std::move(a));
    if (b) n->args.push_back(std::move(b));
    return n;
  }

  std::unique_ptr<Node> expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Op::Add, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = make(Op::Sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Node> term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Op::Mul, std::move(lhs), unary());
      } else if (accept('/')) {
        lhs = make(Op::Div, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Node> unary() {
    if (accept('-')) return make(Op::Neg, unary());
    if (accept('+')) return unary();
    auto base = primary();
    if (accept('^')) return make(Op::Pow, std::move(base), unary());
    return base;
  }

  std::unique_ptr<Node> primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    if (accept('(')) {
      auto n = expr();
      expect(')');
      return n;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  std::unique_ptr<Node> number() {
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_unique<Node>();
    n->value = v;
    return n;
  }

  std::unique_ptr<Node> identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    if (accept('(')) return call(name);
    const auto it = std::find(slots_.begin(), slots_.end(), name);
    if (it != slots_.end()) {
      auto n = std::make_unique<Node>();
      n->op = Op::Slot;
      n->slot = static_cast<std::size_t>(it - slots_.begin());
      return n;
    }
    if (name == "pi") {
      auto n = std::make_unique<Node>();
      n->value = std::numbers::pi;
      return n;
    }
    fail("unknown identifier '" + name + "'");
  }

  std::unique_ptr<Node> call(const std::string& name) {
    std::vector<std::unique_ptr<Node>> args;
    if (!accept(')')) {
      do {
        args.push_back(expr());
      } while (accept(','));
      expect(')');
    }
    struct Fn {
      const char* name;
      Op op;
      std::size_t arity;  // 0 = variadic (at least one)
    };
    static constexpr Fn fns[] = {{"sin", Op::Sin, 1},   {"cos", Op::Cos, 1},   {"ln", Op::Ln, 1},
                                 {"log", Op::Ln, 1},    {"exp", Op::Exp, 1},   {"abs", Op::Abs, 1},
                                 {"sqrt", Op::Sqrt, 1}, {"pow", Op::Pow, 2},   {"norm", Op::Norm, 0}};
    for (const auto& f : fns) {
      if (name != f.name) continue;
      if ((f.arity != 0 && args.size() != f.arity) || args.empty()) {
        fail("wrong number of arguments to " + name);
      }
      auto n = std::make_unique<Node>();
      n->op = f.op;
      n->args = std::move(args);
      return n;
    }
    fail("unknown function '" + name + "'");
  }

  std::string_view src_;
  const std::vector<std::string>& slots_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::compile(std::string_view source, const std::vector<std::string>& slots) {
  Parser p(source, slots);
  std::unique_ptr<Node> root = p.parse();
  Expr e;
  e.source_ = std::string(source);
  e.depth_ = root->depth();
  if (e.depth_ > kMaxDepth) {
    throw Error(ErrorCode::ParseError, "expression '" + e.source_ + "' is deeper than " + std::to_string(kMaxDepth));
  }
  e.root_ = std::move(root);
  return e;
}

double Expr::eval(const double* slots) const { return root_->eval(slots); }

}  // namespace raplab
