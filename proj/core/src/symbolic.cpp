#include "hodgelab/symbolic.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "hodgelab/errors.hpp"

namespace hodgelab::symbolic {

namespace {

using Trig = Factor::Trig;

struct WeightedFactor {
  Rational weight;
  Factor factor;
};

// Canonical form of weight * x^power * trig(pi*freq*x); weight 0 means "drop".
WeightedFactor normalize(Rational weight, int power, Trig trig, Rational freq) {
  if (trig == Trig::One) return {weight, {power, Trig::One, Rational(0)}};
  if (freq < 0) {
    freq = -freq;
    if (trig == Trig::Sin) weight = -weight;
  }
  if (freq == Rational(0)) {
    if (trig == Trig::Sin) return {Rational(0), {}};
    return {weight, {power, Trig::One, Rational(0)}};
  }
  return {weight, {power, trig, freq}};
}

// Product-to-sum rewriting of two factors in the same variable.
std::vector<WeightedFactor> multiply(const Factor& f, const Factor& g) {
  const int power = f.power + g.power;
  const Rational half(1, 2);
  std::vector<WeightedFactor> out;
  auto push = [&](Rational w, Trig t, Rational freq) {
    auto wf = normalize(w, power, t, freq);
    if (wf.weight != Rational(0)) out.push_back(wf);
  };
  if (f.trig == Trig::One) {
    push(1, g.trig, g.freq);
  } else if (g.trig == Trig::One) {
    push(1, f.trig, f.freq);
  } else if (f.trig == Trig::Sin && g.trig == Trig::Sin) {
    push(half, Trig::Cos, f.freq - g.freq);
    push(-half, Trig::Cos, f.freq + g.freq);
  } else if (f.trig == Trig::Cos && g.trig == Trig::Cos) {
    push(half, Trig::Cos, f.freq - g.freq);
    push(half, Trig::Cos, f.freq + g.freq);
  } else if (f.trig == Trig::Sin) {  // sin a cos b
    push(half, Trig::Sin, f.freq + g.freq);
    push(half, Trig::Sin, f.freq - g.freq);
  } else {  // cos a sin b
    push(half, Trig::Sin, f.freq + g.freq);
    push(half, Trig::Sin, g.freq - f.freq);
  }
  // Equal frequencies can make both pushes land on the same factor.
  if (out.size() == 2 && out[0].factor == out[1].factor) {
    out[0].weight += out[1].weight;
    out.pop_back();
    if (out[0].weight == Rational(0)) out.clear();
  }
  return out;
}

Monomial unit_monomial(int n) { return Monomial{0, std::vector<Factor>(n)}; }

std::string rational_string(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << "/" << r.denominator();
  return os.str();
}

}  // namespace

void Coefficient::add_term(const Monomial& m, const Rational& c) {
  if (c == Rational(0)) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Rational(0)) terms_.erase(it);
  }
}

Coefficient Coefficient::constant(int n, Rational c) {
  Coefficient out(n);
  out.add_term(unit_monomial(n), c);
  return out;
}

Coefficient Coefficient::coordinate(int n, int i, int power) {
  if (i < 1 || i > n) throw ContractError("coordinate index out of range");
  Monomial m = unit_monomial(n);
  m.factors[i - 1].power = power;
  Coefficient out(n);
  out.add_term(m, 1);
  return out;
}

Coefficient Coefficient::sin(int n, int i, Rational freq) {
  if (i < 1 || i > n) throw ContractError("coordinate index out of range");
  auto wf = normalize(1, 0, Trig::Sin, freq);
  Coefficient out(n);
  Monomial m = unit_monomial(n);
  m.factors[i - 1] = wf.factor;
  out.add_term(m, wf.weight);
  return out;
}

Coefficient Coefficient::cos(int n, int i, Rational freq) {
  if (i < 1 || i > n) throw ContractError("coordinate index out of range");
  auto wf = normalize(1, 0, Trig::Cos, freq);
  Coefficient out(n);
  Monomial m = unit_monomial(n);
  m.factors[i - 1] = wf.factor;
  out.add_term(m, wf.weight);
  return out;
}

Coefficient Coefficient::derivative(int i) const {
  if (i < 1 || i > n_) throw ContractError("derivative index out of range");
  Coefficient out(n_);
  for (const auto& [m, c] : terms_) {
    const Factor& f = m.factors[i - 1];
    if (f.power > 0) {
      Monomial dm = m;
      dm.factors[i - 1].power -= 1;
      out.add_term(dm, c * f.power);
    }
    if (f.trig != Trig::One) {
      Monomial dm = m;
      dm.pi_power += 1;
      dm.factors[i - 1].trig = f.trig == Trig::Sin ? Trig::Cos : Trig::Sin;
      out.add_term(dm, f.trig == Trig::Sin ? c * f.freq : -c * f.freq);
    }
  }
  return out;
}

Coefficient Coefficient::restrict_to_zero(int i) const {
  if (i < 1 || i > n_) throw ContractError("restriction index out of range");
  Coefficient out(n_);
  for (const auto& [m, c] : terms_) {
    const Factor& f = m.factors[i - 1];
    if (f.power > 0 || f.trig == Trig::Sin) continue;
    Monomial rm = m;
    rm.factors[i - 1] = Factor{};
    out.add_term(rm, c);
  }
  return out;
}

double Coefficient::evaluate(const std::vector<double>& x) const {
  double total = 0.0;
  for (const auto& [m, c] : terms_) {
    double v = boost::rational_cast<double>(c) * std::pow(M_PI, m.pi_power);
    for (int i = 0; i < n_; ++i) {
      const Factor& f = m.factors[i];
      v *= std::pow(x[i], f.power);
      const double arg = M_PI * boost::rational_cast<double>(f.freq) * x[i];
      if (f.trig == Trig::Sin) v *= std::sin(arg);
      if (f.trig == Trig::Cos) v *= std::cos(arg);
    }
    total += v;
  }
  return total;
}

Coefficient Coefficient::operator-() const {
  Coefficient out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Coefficient& Coefficient::operator+=(const Coefficient& o) {
  if (n_ != o.n_) throw ContractError("ambient dimension mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& o) {
  if (n_ != o.n_) throw ContractError("ambient dimension mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Coefficient& Coefficient::operator*=(const Rational& k) {
  if (k == Rational(0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= k;
  return *this;
}

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
  if (a.n_ != b.n_) throw ContractError("ambient dimension mismatch");
  const int n = a.n_;
  Coefficient out(n);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      // Expand the per-variable products into a sum of monomials.
      std::vector<std::pair<Rational, Monomial>> partial{{ca * cb, Monomial{ma.pi_power + mb.pi_power, {}}}};
      for (int i = 0; i < n; ++i) {
        const auto options = multiply(ma.factors[i], mb.factors[i]);
        std::vector<std::pair<Rational, Monomial>> next;
        next.reserve(partial.size() * options.size());
        for (const auto& [w, m] : partial) {
          for (const auto& opt : options) {
            Monomial nm = m;
            nm.factors.push_back(opt.factor);
            next.emplace_back(w * opt.weight, std::move(nm));
          }
        }
        partial = std::move(next);
      }
      for (const auto& [w, m] : partial) out.add_term(m, w);
    }
  }
  return out;
}

std::string Coefficient::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = c < 0 ? -c : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> parts;
    if (mag != Rational(1)) parts.push_back(rational_string(mag));
    if (m.pi_power == 1) parts.emplace_back("pi");
    if (m.pi_power > 1) parts.push_back("pi^" + std::to_string(m.pi_power));
    for (int i = 0; i < n_; ++i) {
      const Factor& f = m.factors[i];
      const std::string var = "x" + std::to_string(i + 1);
      if (f.power == 1) parts.push_back(var);
      if (f.power > 1) parts.push_back(var + "^" + std::to_string(f.power));
      if (f.trig != Trig::One) {
        std::string arg = f.freq == Rational(1) ? "pi*" + var : rational_string(f.freq) + "*pi*" + var;
        parts.push_back((f.trig == Trig::Sin ? "sin(" : "cos(") + arg + ")");
      }
    }
    if (parts.empty()) parts.emplace_back("1");
    for (std::size_t k = 0; k < parts.size(); ++k) os << (k ? "*" : "") << parts[k];
  }
  return os.str();
}

int degree_of(IndexSet s) { return std::popcount(s); }

int wedge_sign(IndexSet a, IndexSet b) {
  if (a & b) return 0;
  int inversions = 0;
  for (int i = 0; i < 32; ++i) {
    if (!(a & (1u << i))) continue;
    inversions += std::popcount(b & ((1u << i) - 1u));
  }
  return inversions % 2 ? -1 : 1;
}

void Form::add(IndexSet s, const Coefficient& f) {
  if (f.ambient_dim() != n_) throw ContractError("ambient dimension mismatch");
  if (f.is_zero()) return;
  auto [it, inserted] = terms_.emplace(s, f);
  if (!inserted) {
    it->second += f;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Form Form::term(Coefficient f, std::vector<int> indices) {
  const int n = f.ambient_dim();
  Form out(n);
  IndexSet s = 0;
  int sign = 1;
  for (int idx : indices) {
    if (idx < 1 || idx > n) throw ContractError("wedge index out of range");
    const IndexSet bit = 1u << (idx - 1);
    const int w = wedge_sign(s, bit);
    if (w == 0) return out;
    sign *= w;
    s |= bit;
  }
  out.add(s, sign > 0 ? f : -f);
  return out;
}

Form Form::homogeneous_part(int p) const {
  Form out(n_);
  for (const auto& [s, f] : terms_)
    if (degree_of(s) == p) out.terms_.emplace(s, f);
  return out;
}

const Coefficient* Form::component(IndexSet s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? nullptr : &it->second;
}

Form& Form::operator+=(const Form& o) {
  if (n_ != o.n_) throw ContractError("ambient dimension mismatch");
  for (const auto& [s, f] : o.terms_) add(s, f);
  return *this;
}

Form& Form::operator-=(const Form& o) {
  if (n_ != o.n_) throw ContractError("ambient dimension mismatch");
  for (const auto& [s, f] : o.terms_) add(s, -f);
  return *this;
}

Form Form::operator-() const {
  Form out(n_);
  for (const auto& [s, f] : terms_) out.terms_.emplace(s, -f);
  return out;
}

Form operator*(const Rational& c, Form a) {
  Form out(a.n_);
  for (const auto& [s, f] : a.terms_) out.add(s, f * c);
  return out;
}

Form operator*(const Coefficient& c, const Form& a) {
  Form out(a.n_);
  for (const auto& [s, f] : a.terms_) out.add(s, c * f);
  return out;
}

std::string Form::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, f] : terms_) {
    if (!first) os << " + ";
    first = false;
    const bool compound = f.terms().size() > 1 && s != 0;
    os << (compound ? "(" : "") << f.to_string() << (compound ? ")" : "");
    bool first_dx = true;
    for (int i = 0; i < n_; ++i) {
      if (!(s & (1u << i))) continue;
      os << (first_dx ? " " : "^") << "dx" << (i + 1);
      first_dx = false;
    }
  }
  return os.str();
}

Form wedge(const Form& a, const Form& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw ContractError("ambient dimension mismatch");
  Form out(a.ambient_dim());
  for (const auto& [sa, fa] : a.terms()) {
    for (const auto& [sb, fb] : b.terms()) {
      const int sign = wedge_sign(sa, sb);
      if (sign == 0) continue;
      const Coefficient prod = fa * fb;
      out.add(sa | sb, sign > 0 ? prod : -prod);
    }
  }
  return out;
}

Form exterior_derivative(const Form& a) {
  const int n = a.ambient_dim();
  Form out(n);
  for (const auto& [s, f] : a.terms()) {
    for (int j = 0; j < n; ++j) {
      const IndexSet bit = 1u << j;
      if (s & bit) continue;
      const Coefficient df = f.derivative(j + 1);
      if (df.is_zero()) continue;
      out.add(s | bit, wedge_sign(bit, s) > 0 ? df : -df);
    }
  }
  return out;
}

Form hodge_star(const Form& a) {
  const int n = a.ambient_dim();
  const IndexSet full = (1u << n) - 1u;
  Form out(n);
  for (const auto& [s, f] : a.terms()) {
    const IndexSet complement = full & ~s;
    out.add(complement, wedge_sign(s, complement) > 0 ? f : -f);
  }
  return out;
}

Form codifferential(const Form& a) {
  const int n = a.ambient_dim();
  Form out(n);
  for (int p = 1; p <= n; ++p) {
    const Form part = a.homogeneous_part(p);
    if (part.is_zero()) continue;
    const int exponent = n * (p + 1) + 1;
    const Form chain = hodge_star(exterior_derivative(hodge_star(part)));
    out += exponent % 2 ? -chain : chain;
  }
  return out;
}

Form hodge_laplacian(const Form& a) {
  return codifferential(exterior_derivative(a)) + exterior_derivative(codifferential(a));
}

Form restrict_to_wall(const Form& a, int wall) {
  Form out(a.ambient_dim());
  for (const auto& [s, f] : a.terms()) out.add(s, f.restrict_to_zero(wall));
  return out;
}

TraceSplit trace_split(const Form& a, int wall) {
  const int n = a.ambient_dim();
  if (wall < 1 || wall > n) throw ContractError("wall index out of range");
  const IndexSet bit = 1u << (wall - 1);
  TraceSplit out{Form(n), Form(n)};
  for (const auto& [s, f] : a.terms()) {
    (s & bit ? out.normal : out.tangential).add(s, f.restrict_to_zero(wall));
  }
  return out;
}

}  // namespace hodgelab::symbolic
