#include "dibvp/expression.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

#include "dibvp/errors.hpp"

namespace dibvp {

enum class Op { Const, VarT, VarZ, Add, Sub, Mul, Div, Neg, Exp, Sin, Cos, Pow };

struct Expr::Node {
  Op op = Op::Const;
  Complex value{0.0, 0.0};
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_const(Complex v) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

NodePtr make_node(Op op, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

bool const_of(const NodePtr& n, Complex& out) {
  if (n->op == Op::Const) {
    out = n->value;
    return true;
  }
  return false;
}

bool is_zero(const NodePtr& n) {
  Complex c;
  return const_of(n, c) && c == Complex(0.0, 0.0);
}

bool is_one(const NodePtr& n) {
  Complex c;
  return const_of(n, c) && c == Complex(1.0, 0.0);
}

// Smart constructors fold constants so that repeated differentiation (the jet
// recursion applies the spatial operator K times) keeps trees small.
NodePtr add(NodePtr a, NodePtr b) {
  Complex ca, cb;
  if (const_of(a, ca) && const_of(b, cb)) return make_const(ca + cb);
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  return make_node(Op::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  Complex ca, cb;
  if (const_of(a, ca) && const_of(b, cb)) return make_const(ca - cb);
  if (is_zero(b)) return a;
  if (is_zero(a)) return make_node(Op::Neg, std::move(b));
  return make_node(Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  Complex ca, cb;
  if (const_of(a, ca) && const_of(b, cb)) return make_const(ca * cb);
  if (is_zero(a) || is_zero(b)) return make_const(0.0);
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  return make_node(Op::Mul, std::move(a), std::move(b));
}

NodePtr divide(NodePtr a, NodePtr b) {
  Complex ca, cb;
  if (const_of(a, ca) && const_of(b, cb) && cb != Complex(0.0)) return make_const(ca / cb);
  if (is_zero(a) && !is_zero(b)) return make_const(0.0);
  if (is_one(b)) return a;
  return make_node(Op::Div, std::move(a), std::move(b));
}

NodePtr neg(NodePtr a) {
  Complex c;
  if (const_of(a, c)) return make_const(-c);
  return make_node(Op::Neg, std::move(a));
}

NodePtr fn(Op op, NodePtr a) {
  Complex c;
  if (const_of(a, c)) {
    switch (op) {
      case Op::Exp: return make_const(std::exp(c));
      case Op::Sin: return make_const(std::sin(c));
      case Op::Cos: return make_const(std::cos(c));
      default: break;
    }
  }
  return make_node(op, std::move(a));
}

NodePtr power(NodePtr a, NodePtr b) {
  Complex ca, cb;
  if (const_of(b, cb)) {
    if (cb == Complex(0.0)) return make_const(1.0);
    if (cb == Complex(1.0)) return a;
    if (const_of(a, ca)) return make_const(std::pow(ca, cb));
  }
  return make_node(Op::Pow, std::move(a), std::move(b));
}

Complex eval_node(const Expr::Node& n, double t, double z) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::VarT: return Complex(t, 0.0);
    case Op::VarZ: return Complex(z, 0.0);
    case Op::Add: return eval_node(*n.a, t, z) + eval_node(*n.b, t, z);
    case Op::Sub: return eval_node(*n.a, t, z) - eval_node(*n.b, t, z);
    case Op::Mul: return eval_node(*n.a, t, z) * eval_node(*n.b, t, z);
    case Op::Div: return eval_node(*n.a, t, z) / eval_node(*n.b, t, z);
    case Op::Neg: return -eval_node(*n.a, t, z);
    case Op::Exp: return std::exp(eval_node(*n.a, t, z));
    case Op::Sin: return std::sin(eval_node(*n.a, t, z));
    case Op::Cos: return std::cos(eval_node(*n.a, t, z));
    case Op::Pow: return std::pow(eval_node(*n.a, t, z), eval_node(*n.b, t, z));
  }
  return Complex(0.0);
}

NodePtr diff(const NodePtr& n, Op var) {
  switch (n->op) {
    case Op::Const: return make_const(0.0);
    case Op::VarT: return make_const(var == Op::VarT ? 1.0 : 0.0);
    case Op::VarZ: return make_const(var == Op::VarZ ? 1.0 : 0.0);
    case Op::Add: return add(diff(n->a, var), diff(n->b, var));
    case Op::Sub: return sub(diff(n->a, var), diff(n->b, var));
    case Op::Mul: return add(mul(diff(n->a, var), n->b), mul(n->a, diff(n->b, var)));
    case Op::Div:
      return divide(sub(mul(diff(n->a, var), n->b), mul(n->a, diff(n->b, var))),
                    mul(n->b, n->b));
    case Op::Neg: return neg(diff(n->a, var));
    case Op::Exp: return mul(fn(Op::Exp, n->a), diff(n->a, var));
    case Op::Sin: return mul(fn(Op::Cos, n->a), diff(n->a, var));
    case Op::Cos: return neg(mul(fn(Op::Sin, n->a), diff(n->a, var)));
    case Op::Pow: {
      Complex c;
      if (!const_of(n->b, c))
        throw analysis_error("cannot differentiate a^b with non-constant exponent");
      // d(u^c) = c u^(c-1) u'
      return mul(mul(make_const(c), power(n->a, make_const(c - 1.0))), diff(n->a, var));
    }
  }
  return make_const(0.0);
}

void print_node(const Expr::Node& n, std::ostream& os) {
  switch (n.op) {
    case Op::Const: {
      os << '(' << n.value.real();
      if (n.value.imag() != 0.0) os << (n.value.imag() < 0 ? "" : "+") << n.value.imag() << 'i';
      os << ')';
      return;
    }
    case Op::VarT: os << 't'; return;
    case Op::VarZ: os << 'z'; return;
    case Op::Add: os << '('; print_node(*n.a, os); os << '+'; print_node(*n.b, os); os << ')'; return;
    case Op::Sub: os << '('; print_node(*n.a, os); os << '-'; print_node(*n.b, os); os << ')'; return;
    case Op::Mul: os << '('; print_node(*n.a, os); os << '*'; print_node(*n.b, os); os << ')'; return;
    case Op::Div: os << '('; print_node(*n.a, os); os << '/'; print_node(*n.b, os); os << ')'; return;
    case Op::Neg: os << "(-"; print_node(*n.a, os); os << ')'; return;
    case Op::Exp: os << "exp("; print_node(*n.a, os); os << ')'; return;
    case Op::Sin: os << "sin("; print_node(*n.a, os); os << ')'; return;
    case Op::Cos: os << "cos("; print_node(*n.a, os); os << ')'; return;
    case Op::Pow: os << '('; print_node(*n.a, os); os << '^'; print_node(*n.b, os); os << ')'; return;
  }
}

} // namespace

Expr::Expr() : node_(make_const(0.0)) {}
Expr::Expr(double v) : node_(make_const(Complex(v, 0.0))) {}
Expr::Expr(Complex v) : node_(make_const(v)) {}

Expr Expr::constant(Complex v) { return Expr(make_const(v)); }
Expr Expr::var_t() { return Expr(make_node(Op::VarT, nullptr)); }
Expr Expr::var_z() { return Expr(make_node(Op::VarZ, nullptr)); }

Complex Expr::eval(double t, double z) const { return eval_node(*node_, t, z); }
Expr Expr::d_dt() const { return Expr(diff(node_, Op::VarT)); }
Expr Expr::d_dz() const { return Expr(diff(node_, Op::VarZ)); }

bool Expr::is_constant(Complex* value) const {
  Complex c;
  if (const_of(node_, c)) {
    if (value) *value = c;
    return true;
  }
  return false;
}

std::string Expr::str() const {
  std::ostringstream os;
  print_node(*node_, os);
  return os.str();
}

Expr operator+(const Expr& a, const Expr& b) { return Expr(add(a.node_, b.node_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(sub(a.node_, b.node_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(mul(a.node_, b.node_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(divide(a.node_, b.node_)); }
Expr operator-(const Expr& a) { return Expr(neg(a.node_)); }
Expr exp(const Expr& a) { return Expr(fn(Op::Exp, a.node_)); }
Expr sin(const Expr& a) { return Expr(fn(Op::Sin, a.node_)); }
Expr cos(const Expr& a) { return Expr(fn(Op::Cos, a.node_)); }
Expr pow(const Expr& base, const Expr& exponent) { return Expr(power(base.node_, exponent.node_)); }

// ---------------------------------------------------------------------------
// Recursive-descent parser.

namespace {

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("trailing characters");
    return e;
  }

private:
  std::string_view src_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw config_error("expression parse error at offset " + std::to_string(pos_) + ": " + msg +
                       " in '" + std::string(src_) + "'");
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (eat('+')) e = e + term();
      else if (eat('-')) e = e - term();
      else return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (eat('*')) e = e * unary();
      else if (eat('/')) e = e / unary();
      else return e;
    }
  }

  Expr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power_expr();
  }

  Expr power_expr() {
    Expr base = atom();
    if (eat('^')) return pow(base, unary());
    return base;
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr number() {
    size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      size_t mark = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark; // 'e' was not an exponent
      }
    }
    double v = 0.0;
    try {
      v = std::stod(std::string(src_.substr(start, pos_ - start)));
    } catch (const std::exception&) {
      fail("bad numeric literal");
    }
    if (pos_ < src_.size() && src_[pos_] == 'i') {
      ++pos_;
      return Expr(Complex(0.0, v));
    }
    return Expr(v);
  }

  Expr identifier() {
    size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (name == "t") return Expr::var_t();
    if (name == "z") return Expr::var_z();
    if (name == "i") return Expr(Complex(0.0, 1.0));
    if (name == "pi") return Expr(3.14159265358979323846);
    if (name == "exp" || name == "sin" || name == "cos" || name == "gaussian") {
      if (!eat('(')) fail("expected '(' after " + name);
      std::vector<Expr> args;
      args.push_back(expr());
      while (eat(',')) args.push_back(expr());
      if (!eat(')')) fail("expected ')'");
      if (name == "exp" || name == "sin" || name == "cos") {
        if (args.size() != 1) fail(name + " takes one argument");
        if (name == "exp") return exp(args[0]);
        if (name == "sin") return sin(args[0]);
        return cos(args[0]);
      }
      // gaussian(c,w) = exp(-((z-c)/w)^2); gaussian(u,c,w) with explicit argument
      Expr u, center, width;
      if (args.size() == 2) {
        u = Expr::var_z();
        center = args[0];
        width = args[1];
      } else if (args.size() == 3) {
        u = args[0];
        center = args[1];
        width = args[2];
      } else {
        fail("gaussian takes 2 or 3 arguments");
      }
      Expr r = (u - center) / width;
      return exp(-(r * r));
    }
    fail("unknown identifier '" + name + "'");
  }
};

} // namespace

Expr parse_expression(std::string_view src) { return Parser(src).parse(); }

} // namespace dibvp
