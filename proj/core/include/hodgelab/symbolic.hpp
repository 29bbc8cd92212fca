#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace hodgelab::symbolic {

using Rational = boost::rational<std::int64_t>;

/// One-variable factor x^power * T(pi * freq * x) with T in {1, sin, cos}.
/// Normal form: freq > 0 whenever trig != One; freq == 0 otherwise.
struct Factor {
  enum class Trig : std::uint8_t { One, Sin, Cos };
  int power = 0;
  Trig trig = Trig::One;
  Rational freq{0};

  friend bool operator==(const Factor&, const Factor&) = default;
  friend bool operator<(const Factor& l, const Factor& r) {
    if (l.power != r.power) return l.power < r.power;
    if (l.trig != r.trig) return l.trig < r.trig;
    return l.freq < r.freq;
  }
};

/// pi^pi_power * prod_i factor_i(x_i).
struct Monomial {
  int pi_power = 0;
  std::vector<Factor> factors;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend bool operator<(const Monomial& l, const Monomial& r) {
    if (l.pi_power != r.pi_power) return l.pi_power < r.pi_power;
    return l.factors < r.factors;
  }
};

/// Exact coefficient function on R^n: a rational combination of monomials.
/// The map keeps terms canonical, so structural equality is equality of
/// functions.
class Coefficient {
 public:
  explicit Coefficient(int n = 0) : n_(n) {}

  static Coefficient constant(int n, Rational c);
  static Coefficient coordinate(int n, int i, int power = 1);
  /// sin(pi * freq * x_i) or cos(...)
  static Coefficient sin(int n, int i, Rational freq);
  static Coefficient cos(int n, int i, Rational freq);

  int ambient_dim() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  Coefficient derivative(int i) const;
  /// Substitutes x_i = 0.
  Coefficient restrict_to_zero(int i) const;
  double evaluate(const std::vector<double>& x) const;

  Coefficient operator-() const;
  Coefficient& operator+=(const Coefficient& o);
  Coefficient& operator-=(const Coefficient& o);
  Coefficient& operator*=(const Rational& c);

  friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
  friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b);
  friend Coefficient operator*(Coefficient a, const Rational& c) { return a *= c; }
  friend Coefficient operator*(const Rational& c, Coefficient a) { return a *= c; }
  friend bool operator==(const Coefficient&, const Coefficient&) = default;

  std::string to_string() const;

  void add_term(const Monomial& m, const Rational& c);

 private:
  int n_;
  std::map<Monomial, Rational> terms_;
};

/// Bitmask of wedge indices; bit i stands for dx^{i+1}.
using IndexSet = std::uint32_t;

int degree_of(IndexSet s);
/// Sign of dx^a ^ dx^b relative to dx^{a|b}; 0 if they overlap.
int wedge_sign(IndexSet a, IndexSet b);

/// Differential form sum_I f_I dx^I on Euclidean R^n.
class Form {
 public:
  explicit Form(int n = 0) : n_(n) {}

  static Form zero(int n) { return Form(n); }
  /// f dx^{indices}, indices 1-based, any order (sign applied).
  static Form term(Coefficient f, std::vector<int> indices);
  static Form scalar(Coefficient f) { return term(std::move(f), {}); }

  int ambient_dim() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<IndexSet, Coefficient>& terms() const { return terms_; }
  /// Component of degree p.
  Form homogeneous_part(int p) const;
  const Coefficient* component(IndexSet s) const;

  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  Form operator-() const;
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(const Rational& c, Form a);
  friend Form operator*(const Coefficient& c, const Form& a);
  friend bool operator==(const Form&, const Form&) = default;

  std::string to_string() const;

  void add(IndexSet s, const Coefficient& f);

 private:
  int n_;
  std::map<IndexSet, Coefficient> terms_;
};

Form wedge(const Form& a, const Form& b);
Form exterior_derivative(const Form& a);
/// Euclidean metric, orientation dx^1 ^ ... ^ dx^n.
Form hodge_star(const Form& a);
/// Degree-wise (-1)^{n(p+1)+1} * d * on each homogeneous part of degree p;
/// 0-forms map to zero.
Form codifferential(const Form& a);
Form hodge_laplacian(const Form& a);

struct TraceSplit {
  Form tangential;
  Form normal;
};

/// Boundary modeled as the hyperplane {x_wall = 0}, wall 1-based. The
/// tangential part keeps the terms without dx^wall, the normal part the rest;
/// both restricted to the hyperplane.
TraceSplit trace_split(const Form& a, int wall);

/// Restriction of every coefficient to {x_wall = 0}, indices kept.
Form restrict_to_wall(const Form& a, int wall);

}  // namespace hodgelab::symbolic
