#include "fconv/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace fconv {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += i + 1 == parts.size() ? " or " : ", ";
    out += parts[i];
  }
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t offset,
                       std::vector<std::string> expected)
    : std::runtime_error(message + " at offset " + std::to_string(offset) +
                         (expected.empty() ? "" : " (expected " + join(expected) + ")")),
      offset_(offset),
      expected_(std::move(expected)) {}

EvalError::EvalError(const std::string& reason, std::string subexpression)
    : std::runtime_error(reason + " in '" + subexpression + "'"),
      subexpression_(std::move(subexpression)) {}

enum class Fn { sin, cos, tan, exp, log, abs, sqrt };

struct Expression::Node {
  enum class Kind { number, variable, add, sub, mul, div, pow, neg, call };

  Kind kind;
  double value = 0.0;  // number
  Fn fn = Fn::sin;     // call
  std::shared_ptr<const Node> lhs, rhs;
  std::size_t begin = 0, end = 0;  // byte span in the source text
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using Kind = Node::Kind;

struct Token {
  enum class Type { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };
  Type type;
  std::size_t begin, end;
  double value = 0.0;
  std::string_view text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) {
      current_ = {Token::Type::end, start, start, 0.0, {}};
      return;
    }
    const char c = text_[pos_];
    if ((c >= '0' && c <= '9') || c == '.') {
      double v = 0.0;
      const char* first = text_.data() + pos_;
      const char* last = text_.data() + text_.size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec == std::errc::result_out_of_range)
        throw ParseError("numeric literal out of range", start, {});
      if (ec != std::errc() || ptr == first)
        throw ParseError("malformed numeric literal", start, {"a number"});
      pos_ = static_cast<std::size_t>(ptr - text_.data());
      current_ = {Token::Type::number, start, pos_, v, text_.substr(start, pos_ - start)};
      return;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
      std::size_t e = pos_;
      while (e < text_.size() &&
             ((text_[e] >= 'a' && text_[e] <= 'z') || (text_[e] >= 'A' && text_[e] <= 'Z') ||
              (text_[e] >= '0' && text_[e] <= '9') || text_[e] == '_'))
        ++e;
      current_ = {Token::Type::ident, start, e, 0.0, text_.substr(start, e - start)};
      pos_ = e;
      return;
    }
    Token::Type type;
    switch (c) {
      case '+': type = Token::Type::plus; break;
      case '-': type = Token::Type::minus; break;
      case '*': type = Token::Type::star; break;
      case '/': type = Token::Type::slash; break;
      case '^': type = Token::Type::caret; break;
      case '(': type = Token::Type::lparen; break;
      case ')': type = Token::Type::rparen; break;
      default:
        throw ParseError("unexpected character '" + std::string(1, c) + "'", start,
                         {"a value", "an operator"});
    }
    ++pos_;
    current_ = {type, start, pos_, 0.0, text_.substr(start, 1)};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_{Token::Type::end, 0, 0, 0.0, {}};
};

NodePtr make(Kind kind, NodePtr lhs, NodePtr rhs, std::size_t begin, std::size_t end) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  node->begin = begin;
  node->end = end;
  return node;
}

NodePtr make_number(double v, std::size_t begin, std::size_t end) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::number;
  node->value = v;
  node->begin = begin;
  node->end = end;
  return node;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) {}

  NodePtr parse() {
    NodePtr root = sum();
    const Token& t = lexer_.peek();
    if (t.type != Token::Type::end)
      throw ParseError("trailing input", t.begin, {"an operator", "end of input"});
    return root;
  }

 private:
  NodePtr sum() {
    NodePtr lhs = product();
    while (true) {
      const Token& t = lexer_.peek();
      if (t.type != Token::Type::plus && t.type != Token::Type::minus) return lhs;
      const Kind kind = t.type == Token::Type::plus ? Kind::add : Kind::sub;
      lexer_.take();
      NodePtr rhs = product();
      lhs = make(kind, lhs, rhs, lhs->begin, rhs->end);
    }
  }

  NodePtr product() {
    NodePtr lhs = unary();
    while (true) {
      const Token& t = lexer_.peek();
      if (t.type != Token::Type::star && t.type != Token::Type::slash) return lhs;
      const Kind kind = t.type == Token::Type::star ? Kind::mul : Kind::div;
      lexer_.take();
      NodePtr rhs = unary();
      lhs = make(kind, lhs, rhs, lhs->begin, rhs->end);
    }
  }

  NodePtr unary() {
    const Token& t = lexer_.peek();
    if (t.type == Token::Type::minus) {
      const std::size_t begin = t.begin;
      lexer_.take();
      NodePtr operand = unary();
      return make(Kind::neg, operand, nullptr, begin, operand->end);
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (lexer_.peek().type != Token::Type::caret) return base;
    lexer_.take();
    NodePtr exponent = unary();  // right-associative; allows 2^-x
    return make(Kind::pow, base, exponent, base->begin, exponent->end);
  }

  NodePtr primary() {
    const Token t = lexer_.take();
    switch (t.type) {
      case Token::Type::number:
        return make_number(t.value, t.begin, t.end);
      case Token::Type::lparen: {
        NodePtr inner = sum();
        const Token close = lexer_.take();
        if (close.type != Token::Type::rparen)
          throw ParseError("unbalanced parenthesis", close.begin, {"')'"});
        // keep the parenthesized span so EvalError excerpts stay readable
        auto node = std::make_shared<Node>(*inner);
        node->begin = t.begin;
        node->end = close.end;
        return node;
      }
      case Token::Type::ident:
        return identifier(t);
      default:
        throw ParseError("unexpected token", t.begin,
                         {"a number", "'x'", "a function name", "'('", "'-'"});
    }
  }

  NodePtr identifier(const Token& t) {
    if (t.text == "x") {
      auto node = std::make_shared<Node>();
      node->kind = Kind::variable;
      node->begin = t.begin;
      node->end = t.end;
      return node;
    }
    if (t.text == "pi") return make_number(3.14159265358979323846, t.begin, t.end);
    if (t.text == "e") return make_number(2.71828182845904523536, t.begin, t.end);

    Fn fn;
    if (t.text == "sin") fn = Fn::sin;
    else if (t.text == "cos") fn = Fn::cos;
    else if (t.text == "tan") fn = Fn::tan;
    else if (t.text == "exp") fn = Fn::exp;
    else if (t.text == "log") fn = Fn::log;
    else if (t.text == "abs") fn = Fn::abs;
    else if (t.text == "sqrt") fn = Fn::sqrt;
    else
      throw ParseError("unknown identifier '" + std::string(t.text) + "'", t.begin,
                       {"'x'", "'pi'", "'e'", "a function name"});

    const Token open = lexer_.take();
    if (open.type != Token::Type::lparen)
      throw ParseError("function name needs an argument list", open.begin, {"'('"});
    NodePtr arg = sum();
    const Token close = lexer_.take();
    if (close.type != Token::Type::rparen)
      throw ParseError("unbalanced parenthesis", close.begin, {"')'"});
    auto node = std::make_shared<Node>();
    node->kind = Kind::call;
    node->fn = fn;
    node->lhs = arg;
    node->begin = t.begin;
    node->end = close.end;
    return node;
  }

  Lexer lexer_;
};

[[noreturn]] void fail(const std::string& reason, const Node& node, const std::string& source) {
  throw EvalError(reason, source.substr(node.begin, node.end - node.begin));
}

double eval_pow(double base, double exponent, const Node& node, const std::string& source) {
  const bool integral = exponent == std::floor(exponent) && std::abs(exponent) <= 64.0;
  if (integral) {
    const int e = static_cast<int>(exponent);
    if (e < 0 && base == 0.0) fail("zero raised to a negative power", node, source);
    double r = 1.0;
    for (int i = 0; i < std::abs(e); ++i) r *= base;
    return e < 0 ? 1.0 / r : r;
  }
  if (base < 0.0) fail("negative base with non-integer exponent", node, source);
  if (base == 0.0 && exponent < 0.0) fail("zero raised to a negative power", node, source);
  return std::pow(base, exponent);
}

double eval(const Node& node, double x, const std::string& source) {
  double v = 0.0;
  switch (node.kind) {
    case Kind::number: v = node.value; break;
    case Kind::variable: v = x; break;
    case Kind::add: v = eval(*node.lhs, x, source) + eval(*node.rhs, x, source); break;
    case Kind::sub: v = eval(*node.lhs, x, source) - eval(*node.rhs, x, source); break;
    case Kind::mul: v = eval(*node.lhs, x, source) * eval(*node.rhs, x, source); break;
    case Kind::div: {
      const double num = eval(*node.lhs, x, source);
      const double den = eval(*node.rhs, x, source);
      if (den == 0.0) fail("division by zero", node, source);
      v = num / den;
      break;
    }
    case Kind::pow:
      v = eval_pow(eval(*node.lhs, x, source), eval(*node.rhs, x, source), node, source);
      break;
    case Kind::neg: v = -eval(*node.lhs, x, source); break;
    case Kind::call: {
      const double a = eval(*node.lhs, x, source);
      switch (node.fn) {
        case Fn::sin: v = std::sin(a); break;
        case Fn::cos: v = std::cos(a); break;
        case Fn::tan: v = std::tan(a); break;
        case Fn::exp: v = std::exp(a); break;
        case Fn::log:
          if (a <= 0.0) fail("log of a nonpositive value", node, source);
          v = std::log(a);
          break;
        case Fn::abs: v = std::abs(a); break;
        case Fn::sqrt:
          if (a < 0.0) fail("sqrt of a negative value", node, source);
          v = std::sqrt(a);
          break;
      }
      break;
    }
  }
  if (!std::isfinite(v)) fail("non-finite result", node, source);
  return v;
}

int precedence(Kind kind) {
  switch (kind) {
    case Kind::add:
    case Kind::sub: return 1;
    case Kind::mul:
    case Kind::div: return 2;
    case Kind::neg: return 3;
    case Kind::pow: return 4;
    default: return 6;
  }
}

const char* fn_name(Fn fn) {
  switch (fn) {
    case Fn::sin: return "sin";
    case Fn::cos: return "cos";
    case Fn::tan: return "tan";
    case Fn::exp: return "exp";
    case Fn::log: return "log";
    case Fn::abs: return "abs";
    case Fn::sqrt: return "sqrt";
  }
  return "";
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void render(const Node& node, int min_prec, std::string& out) {
  const int prec = precedence(node.kind);
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (node.kind) {
    case Kind::number: out += format_number(node.value); break;
    case Kind::variable: out += 'x'; break;
    case Kind::add:
      render(*node.lhs, 1, out);
      out += '+';
      render(*node.rhs, 2, out);
      break;
    case Kind::sub:
      render(*node.lhs, 1, out);
      out += '-';
      render(*node.rhs, 2, out);
      break;
    case Kind::mul:
      render(*node.lhs, 2, out);
      out += '*';
      render(*node.rhs, 3, out);
      break;
    case Kind::div:
      render(*node.lhs, 2, out);
      out += '/';
      render(*node.rhs, 3, out);
      break;
    case Kind::neg:
      out += '-';
      render(*node.lhs, 3, out);
      break;
    case Kind::pow:
      render(*node.lhs, 6, out);
      out += '^';
      render(*node.rhs, 4, out);
      break;
    case Kind::call:
      out += fn_name(node.fn);
      out += '(';
      render(*node.lhs, 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

bool trees_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::number: return a.value == b.value;
    case Kind::variable: return true;
    case Kind::neg: return trees_equal(*a.lhs, *b.lhs);
    case Kind::call: return a.fn == b.fn && trees_equal(*a.lhs, *b.lhs);
    default: return trees_equal(*a.lhs, *b.lhs) && trees_equal(*a.rhs, *b.rhs);
  }
}

}  // namespace

Expression::Expression(std::shared_ptr<const Node> root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

Expression Expression::parse(std::string_view text) {
  Parser parser(text);
  return Expression(parser.parse(), std::string(text));
}

double Expression::operator()(double x) const { return eval(*root_, x, source_); }

std::string Expression::str() const {
  std::string out;
  render(*root_, 0, out);
  return out;
}

bool Expression::equal_tree(const Expression& other) const {
  return trees_equal(*root_, *other.root_);
}

}  // namespace fconv
