#include "hodgelab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hodgelab/errors.hpp"

namespace hodgelab {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Computed: return "computed";
    case Provenance::Oracle: return "oracle";
    case Provenance::Union: return "union";
  }
  return "computed";
}

std::string to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::Dirichlet: return "dirichlet";
    case OracleKind::Neumann: return "neumann";
    case OracleKind::MaxwellCavity: return "maxwell";
  }
  return "dirichlet";
}

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Exploratory: return "exploratory";
  }
  return "fail";
}

bool OrderedSpectrum::sorted() const { return std::is_sorted(values.begin(), values.end()); }

OrderedSpectrum OrderedSpectrum::prefix(int k) const {
  OrderedSpectrum out = *this;
  const auto n = static_cast<std::size_t>(std::clamp(k, 0, size()));
  out.values.resize(n);
  if (!out.labels.empty()) out.labels.resize(n);
  return out;
}

OrderedSpectrum OrderedSpectrum::drop_front(int count) const {
  OrderedSpectrum out = *this;
  const int n = std::clamp(count, 0, size());
  out.values.erase(out.values.begin(), out.values.begin() + n);
  if (!out.labels.empty()) out.labels.erase(out.labels.begin(), out.labels.begin() + n);
  return out;
}

OrderedSpectrum OrderedSpectrum::computed(std::vector<double> values, std::string label) {
  OrderedSpectrum s;
  s.values = std::move(values);
  if (!label.empty()) s.labels.assign(s.values.size(), label);
  return s;
}

OrderedSpectrum ordered_disjoint_union(const OrderedSpectrum& a, const OrderedSpectrum& b) {
  if (!a.sorted() || !b.sorted()) throw ContractError("disjoint union needs sorted inputs");
  const bool labelled = !a.labels.empty() || !b.labels.empty();
  auto label = [](const OrderedSpectrum& s, std::size_t i) { return s.labels.empty() ? std::string() : s.labels[i]; };

  OrderedSpectrum out;
  out.provenance = Provenance::Union;
  out.values.reserve(a.values.size() + b.values.size());
  std::size_t i = 0, j = 0;
  while (i < a.values.size() || j < b.values.size()) {
    // Ties take from `a` first so the merge is stable.
    const bool from_a = j == b.values.size() || (i < a.values.size() && a.values[i] <= b.values[j]);
    if (from_a) {
      out.values.push_back(a.values[i]);
      if (labelled) out.labels.push_back(label(a, i));
      ++i;
    } else {
      out.values.push_back(b.values[j]);
      if (labelled) out.labels.push_back(label(b, j));
      ++j;
    }
  }
  return out;
}

// ---------------------------------------------------------------- Bessel zeros

namespace {

double bessel_j(int m, double x) { return std::cyl_bessel_j(static_cast<double>(m), x); }

double bessel_jp(int m, double x) {
  if (m == 0) return -bessel_j(1, x);
  return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
}

template <class F>
double bisect(F f, double lo, double hi) {
  double flo = f(lo);
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// All positive zeros of f below x_max, scanning with a step well below the
// zero spacing (which approaches pi from above for Bessel functions).
template <class F>
std::vector<double> zeros_below(F f, double x_max) {
  std::vector<double> out;
  const double step = 0.05;
  double x = 1e-6;
  double fx = f(x);
  while (x < x_max) {
    const double next = x + step;
    const double fn = f(next);
    if (fx == 0.0 && x > 1e-6) {
      out.push_back(x);
    } else if ((fx < 0) != (fn < 0) && fn != 0.0) {
      out.push_back(bisect(f, x, next));
    }
    x = next;
    fx = fn;
  }
  return out;
}

double nth_zero(const std::function<double(double)>& f, int s) {
  if (s < 1) throw ParameterError("zero index must be positive");
  double x_max = 4.0 * (s + 1) + 10.0;
  while (true) {
    const auto z = zeros_below(f, x_max);
    if (static_cast<int>(z.size()) >= s) return z[s - 1];
    x_max *= 2;
  }
}

}  // namespace

double bessel_zero(int m, int s) {
  if (m < 0) throw ParameterError("Bessel order must be non-negative");
  return nth_zero([m](double x) { return bessel_j(m, x); }, s);
}

double bessel_derivative_zero(int m, int s) {
  if (m < 0) throw ParameterError("Bessel order must be non-negative");
  return nth_zero([m](double x) { return bessel_jp(m, x); }, s);
}

// ---------------------------------------------------------------- oracles

namespace {

struct Candidate {
  double value;
  std::string label;
};

std::vector<Candidate> rectangle_candidates(double a, double b, bool neumann, double bound) {
  std::vector<Candidate> out;
  const double pi2 = M_PI * M_PI;
  const int lo = neumann ? 0 : 1;
  for (int j = lo; pi2 * j * j / (a * a) <= bound; ++j)
    for (int k = lo; pi2 * (j * j / (a * a) + k * k / (b * b)) <= bound; ++k)
      out.push_back({pi2 * (j * j / (a * a) + k * k / (b * b)), "(" + std::to_string(j) + "," + std::to_string(k) + ")"});
  return out;
}

std::vector<Candidate> cube_candidates(OracleKind kind, double bound) {
  std::vector<Candidate> out;
  const double pi2 = M_PI * M_PI;
  const int lo = kind == OracleKind::Dirichlet ? 1 : 0;
  for (int i = lo; pi2 * i * i <= bound; ++i)
    for (int j = lo; pi2 * (i * i + j * j) <= bound; ++j)
      for (int k = lo; pi2 * (i * i + j * j + k * k) <= bound; ++k) {
        const double value = pi2 * (i * i + j * j + k * k);
        const std::string label = "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
        if (kind != OracleKind::MaxwellCavity) {
          out.push_back({value, label});
          continue;
        }
        const int nonzero = (i > 0) + (j > 0) + (k > 0);
        if (nonzero < 2) continue;
        out.push_back({value, label});
        if (nonzero == 3) out.push_back({value, label});
      }
  return out;
}

std::vector<Candidate> disk_candidates(double radius, bool neumann, double bound) {
  std::vector<Candidate> out;
  const double x_max = std::sqrt(bound) * radius;
  if (neumann) out.push_back({0.0, "(0,0)"});
  for (int m = 0; m <= x_max + 1; ++m) {
    const auto f = [m, neumann](double x) { return neumann ? bessel_jp(m, x) : bessel_j(m, x); };
    auto zeros = zeros_below(f, x_max);
    // J_0' = -J_1 vanishes at 0; zeros_below starts just above it.
    int s = 0;
    for (double z : zeros) {
      ++s;
      const double value = (z / radius) * (z / radius);
      const std::string label = "(" + std::to_string(m) + "," + std::to_string(s) + ")";
      out.push_back({value, label});
      if (m > 0) out.push_back({value, label});
    }
  }
  return out;
}

}  // namespace

OrderedSpectrum closed_form_spectrum(const CanonicalDomain& domain, OracleKind kind, int k) {
  if (k < 1) throw ParameterError("oracle prefix length must be positive");
  domain.validate();
  using Kind = CanonicalDomain::Kind;
  const bool supported = kind == OracleKind::MaxwellCavity
                             ? domain.kind == Kind::UnitCube
                             : (domain.kind == Kind::UnitSquare || domain.kind == Kind::Rectangle ||
                                domain.kind == Kind::Disk || domain.kind == Kind::UnitCube);
  if (!supported) throw ParameterError("no closed-form " + to_string(kind) + " spectrum for " + domain.tag());

  auto enumerate = [&](double bound) {
    switch (domain.kind) {
      case Kind::UnitSquare: return rectangle_candidates(1.0, 1.0, kind == OracleKind::Neumann, bound);
      case Kind::Rectangle: return rectangle_candidates(domain.a, domain.b, kind == OracleKind::Neumann, bound);
      case Kind::Disk: return disk_candidates(domain.outer, kind == OracleKind::Neumann, bound);
      default: return cube_candidates(kind, bound);
    }
  };
  auto by_value = [](const Candidate& x, const Candidate& y) { return x.value < y.value; };

  // Grow the bound until K candidates exist, then re-enumerate up to 4x the
  // K-th value so that nothing below it can be missing.
  double bound = 50.0;
  std::vector<Candidate> c;
  while (true) {
    c = enumerate(bound);
    if (static_cast<int>(c.size()) >= k) break;
    bound *= 2;
  }
  std::sort(c.begin(), c.end(), by_value);
  c = enumerate(4.0 * std::max(c[k - 1].value, 1.0));
  std::stable_sort(c.begin(), c.end(), by_value);

  OrderedSpectrum out;
  out.provenance = Provenance::Oracle;
  for (int i = 0; i < k; ++i) {
    out.values.push_back(c[i].value);
    out.labels.push_back(c[i].label);
  }
  return out;
}

// ---------------------------------------------------------------- checks

VerificationReport match_spectra(const OrderedSpectrum& a, const OrderedSpectrum& b, double rel_tol, int k) {
  if (k < 0 || a.size() < k || b.size() < k) throw ContractError("match_spectra: prefix longer than input");
  VerificationReport r;
  r.name = "match";
  r.params = {{"K", k}, {"rel_tol", rel_tol}};
  if (k == 0) return r;
  const double floor = 1e-9 * std::abs(b.values[k - 1]);
  for (int i = 0; i < k; ++i) {
    const double scale = std::max(std::abs(b.values[i]), floor);
    const double diff = std::abs(a.values[i] - b.values[i]);
    const double dev = scale > 0 ? diff / scale : (diff == 0 ? 0.0 : INFINITY);
    r.deviations.push_back(dev);
    r.worst_dev = std::max(r.worst_dev, dev);
    if (diff > rel_tol * scale && !r.first_violation) {
      r.status = CheckStatus::Fail;
      r.first_violation = Violation{i + 1, a.values[i], b.values[i]};
    }
  }
  return r;
}

DecompositionReferences oracle_references(const CanonicalDomain& domain, int p, int k) {
  using Kind = CanonicalDomain::Kind;
  DecompositionReferences refs;
  const int n = domain.dim();
  const bool separable = domain.kind == Kind::UnitSquare || domain.kind == Kind::Rectangle ||
                         domain.kind == Kind::Disk || domain.kind == Kind::UnitCube;
  if (!separable || p < 0 || p > n) return refs;

  auto dirichlet = [&] { return closed_form_spectrum(domain, OracleKind::Dirichlet, k); };
  auto nonzero_neumann = [&] { return closed_form_spectrum(domain, OracleKind::Neumann, k + 1).drop_front(1); };
  auto maxwell = [&] { return closed_form_spectrum(domain, OracleKind::MaxwellCavity, k); };
  OrderedSpectrum zero;
  zero.provenance = Provenance::Oracle;
  zero.values = {0.0};
  OrderedSpectrum empty;
  empty.provenance = Provenance::Oracle;

  if (p == 0) {
    refs.closed = zero;
    refs.coexact = nonzero_neumann();
  } else if (p == n) {
    refs.closed = dirichlet();
    refs.coexact = empty;
  } else if (n == 2) {  // p = 1
    refs.closed = nonzero_neumann();
    refs.coexact = dirichlet();
  } else if (p == 1) {
    refs.closed = nonzero_neumann();
    refs.coexact = maxwell();
  } else {  // n = 3, p = 2
    refs.closed = maxwell();
    refs.coexact = dirichlet();
  }
  return refs;
}

VerificationReport check_decomposition(const SpectrumResult& full, int k, double rel_tol,
                                       const DecompositionReferences& refs) {
  if (k < 1 || k > full.size()) throw ContractError("decomposition prefix out of range");
  if (static_cast<int>(full.tags.size()) != full.size()) throw ContractError("result is not classified");

  VerificationReport r;
  r.name = "decomposition";
  r.params = {{"K", k}, {"rel_tol", rel_tol}, {"degree", full.degree}, {"h", full.meta.h}};

  OrderedSpectrum closed, coexact, closed_zeroed;
  bool unresolved = false;
  for (int i = 0; i < k; ++i) {
    const double v = full.eigenvalues[i];
    switch (full.tags[i]) {
      case FormTag::Harmonic:
        closed.values.push_back(v);
        closed_zeroed.values.push_back(0.0);
        break;
      case FormTag::Closed:
        closed.values.push_back(v);
        closed_zeroed.values.push_back(v);
        break;
      case FormTag::Coexact: coexact.values.push_back(v); break;
      case FormTag::Unresolved: unresolved = true; break;
    }
  }

  if (unresolved) {
    r.status = CheckStatus::Exploratory;
    r.note = "UNRESOLVED tags inside the prefix";
    return r;  // unresolved values belong to neither part
  }

  // (i) the tag partition reproduces the prefix exactly.
  const auto merged = ordered_disjoint_union(closed, coexact);
  const std::vector<double> prefix(full.eigenvalues.begin(), full.eigenvalues.begin() + k);
  if (merged.values != prefix) {
    r.status = CheckStatus::Fail;
    const auto mismatch = std::mismatch(merged.values.begin(), merged.values.end(), prefix.begin());
    const int idx = static_cast<int>(mismatch.first - merged.values.begin());
    if (idx < merged.size())
      r.first_violation = Violation{idx + 1, merged.values[idx], prefix[idx]};
    else
      r.first_violation = Violation{idx + 1, NAN, prefix[idx]};
    r.note = "tag partition does not reproduce the spectrum";
    return r;
  }
  r.params["closed_count"] = closed.size();
  r.params["coexact_count"] = coexact.size();

  if (!refs.closed || !refs.coexact) {
    r.status = CheckStatus::Exploratory;
    r.note = "partition holds; no independent reference for this domain";
    return r;
  }

  // (ii) each part against its reference.
  auto part = [&](const OrderedSpectrum& got, const OrderedSpectrum& ref, const char* what) {
    if (got.size() > ref.size()) {
      r.status = CheckStatus::Fail;
      r.first_violation = Violation{ref.size() + 1, got.values[ref.size()], NAN};
      r.note = std::string(what) + " part is longer than its reference";
      return;
    }
    const auto m = match_spectra(got, ref, rel_tol, got.size());
    r.worst_dev = std::max(r.worst_dev, m.worst_dev);
    if (!m.passed() && r.status == CheckStatus::Pass) {
      r.status = CheckStatus::Fail;
      r.first_violation = m.first_violation;
      r.note = std::string(what) + " part deviates from its reference";
    }
  };
  part(closed_zeroed, *refs.closed, "closed");
  part(coexact, *refs.coexact, "coexact");
  return r;
}

VerificationReport check_shifted_inequality(const OrderedSpectrum& mu, const OrderedSpectrum& lambda, int shift,
                                            int m_max, double slack) {
  if (m_max < 1 || shift < 0) throw ContractError("inequality range invalid");
  if (lambda.size() < m_max || mu.size() < m_max + shift) throw ContractError("inequality prefix too short");
  VerificationReport r;
  r.name = "inequality";
  r.params = {{"shift", shift}, {"m_max", m_max}, {"slack", slack}};
  r.worst_dev = -INFINITY;
  for (int m = 1; m <= m_max; ++m) {
    const double lhs = mu.values[m + shift - 1];
    const double rhs = lambda.values[m - 1];
    const double used = lhs / rhs - 1.0;  // positive means slack consumed
    r.deviations.push_back(used);
    r.worst_dev = std::max(r.worst_dev, used);
    if (lhs > rhs * (1.0 + slack) && !r.first_violation) {
      r.status = CheckStatus::Fail;
      r.first_violation = Violation{m, lhs, rhs};
    }
  }
  return r;
}

VerificationReport check_inequality(const OrderedSpectrum& theta, const OrderedSpectrum& lambda, int n, int m_max,
                                    double slack) {
  if (n < 2) throw ContractError("inequality needs n >= 2");
  if (m_max < 1) throw ContractError("inequality range invalid");
  if (lambda.size() < m_max || theta.size() < (n - 1) * m_max + 1) throw ContractError("inequality prefix too short");
  VerificationReport r;
  r.name = "inequality";
  r.params = {{"n", n}, {"m_max", m_max}, {"slack", slack}};
  r.worst_dev = -INFINITY;
  for (int m = 1; m <= m_max; ++m) {
    const double lhs = theta.values[(n - 1) * m];
    const double rhs = lambda.values[m - 1];
    const double used = lhs / rhs - 1.0;
    r.deviations.push_back(used);
    r.worst_dev = std::max(r.worst_dev, used);
    if (lhs > rhs * (1.0 + slack) && !r.first_violation) {
      r.status = CheckStatus::Fail;
      r.first_violation = Violation{m, lhs, rhs};
    }
  }
  return r;
}

}  // namespace hodgelab
