#ifndef DIBVP_EXPRESSION_HPP
#define DIBVP_EXPRESSION_HPP

#include <complex>
#include <memory>
#include <string>
#include <string_view>

namespace dibvp {

using Complex = std::complex<double>;

/// Immutable complex-valued arithmetic expression in the variables t and z.
///
/// Supports evaluation and exact symbolic differentiation, which is what the
/// coefficient analysis and the compatibility-jet recursion run on. Trees are
/// shared; copying is cheap and thread-safe.
class Expr {
public:
  Expr(); // zero
  Expr(double v);
  Expr(Complex v);

  static Expr constant(Complex v);
  static Expr var_t();
  static Expr var_z();

  Complex eval(double t, double z) const;
  Expr d_dt() const;
  Expr d_dz() const;

  /// True if the tree folded to a literal; stores it in *value when given.
  bool is_constant(Complex* value = nullptr) const;

  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr pow(const Expr& base, const Expr& exponent);

  struct Node;

private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Parse the scenario expression grammar: variables t, z; operators + - * / ^;
/// functions exp, sin, cos, gaussian(center,width) and gaussian(arg,center,width);
/// complex literals like 2+3i, 1.5i, i. gaussian(c,w) is shorthand for
/// exp(-((z-c)/w)^2). Throws config_error on malformed input.
Expr parse_expression(std::string_view src);

} // namespace dibvp

#endif
