#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Eigenvalues>

#include "hodgelab/errors.hpp"
#include "hodgelab/spectrum.hpp"

namespace hodgelab {

namespace {

// Index ranges [first, last) of eigenvalues that agree within `tol`.
std::vector<std::pair<int, int>> clusters(const std::vector<double>& values, double tol, double floor) {
  std::vector<std::pair<int, int>> out;
  int start = 0;
  for (int i = 1; i <= static_cast<int>(values.size()); ++i) {
    const bool split = i == static_cast<int>(values.size()) ||
                       std::abs(values[i] - values[i - 1]) > tol * std::max(std::abs(values[i - 1]), floor);
    if (split) {
      out.emplace_back(start, i);
      start = i;
    }
  }
  return out;
}

}  // namespace

void classify_eigenforms(SpectrumResult& result, const SimplicialComplex& complex, const ClassifyOptions& options) {
  if (result.bc != BCKind::Absolute && result.bc != BCKind::ScalarNeumann)
    throw ContractError("classification needs an absolute or Neumann result");
  const int p = result.degree;
  const int n = complex.dim();
  const int k = result.size();
  if (result.eigenvectors.rows() != complex.num_simplices(p)) throw ContractError("eigenvectors do not match complex");

  const double thr = result.harmonic_threshold;

  // Rotate degenerate clusters so each vector is closed or co-exact.
  if (p >= 1 && p < n) {
    HodgeProjector projector(complex, p);
    for (auto [first, last] : clusters(result.eigenvalues, options.cluster_tol, thr)) {
      const int size = last - first;
      if (size < 2) continue;
      Eigen::MatrixXd closed(result.eigenvectors.rows(), size);
      for (int j = 0; j < size; ++j)
        closed.col(j) = projector.split({p, result.eigenvectors.col(first + j)}).closed.values;
      const Eigen::MatrixXd x = result.eigenvectors.middleCols(first, size);
      Eigen::MatrixXd gram = x.transpose() * (projector.mass() * closed);
      gram = 0.5 * (gram + gram.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
      result.eigenvectors.middleCols(first, size) = x * es.eigenvectors();
    }
  }

  std::optional<SparseMatrix> d, upper_mass;
  if (p < n) {
    d = coboundary_matrix(complex, p).matrix;
    upper_mass = mass_matrix(complex, p + 1).matrix;
  }
  std::optional<DiscreteCodifferential> delta;
  if (p >= 1) delta.emplace(complex, p);

  result.tags.assign(k, FormTag::Unresolved);
  for (int i = 0; i < k; ++i) {
    if (result.eigenvalues[i] < thr) {
      result.tags[i] = FormTag::Harmonic;
      continue;
    }
    const Vector u = result.eigenvectors.col(i);
    double ed = 0.0, edelta = 0.0;
    if (d) {
      const Vector du = *d * u;
      ed = du.dot(*upper_mass * du);
    }
    if (delta) {
      const Vector w = delta->apply(u);
      edelta = w.dot(delta->lower_mass() * w);
    }
    const double total = ed + edelta;
    if (ed <= options.ratio * total)
      result.tags[i] = FormTag::Closed;
    else if (edelta <= options.ratio * total)
      result.tags[i] = FormTag::Coexact;
  }
}

PairingReport pair_across_degrees(const SpectrumResult& result_p, const SimplicialComplex& complex) {
  const int p = result_p.degree;
  if (p >= complex.dim()) throw ContractError("no degree above the top degree");
  if (static_cast<int>(result_p.tags.size()) != result_p.size()) throw ContractError("result is not classified");
  const EigenProblem next = hodge_laplacian_absolute(complex, p + 1);
  const SparseMatrix d = coboundary_matrix(complex, p).matrix;
  const SparseMatrix mass_p = mass_matrix(complex, p).matrix;

  PairingReport report;
  report.degree = p;
  for (int i = 0; i < result_p.size(); ++i) {
    if (result_p.tags[i] == FormTag::Harmonic) {
      ++report.skipped_harmonic;
      continue;
    }
    if (result_p.tags[i] != FormTag::Coexact) continue;
    const double alpha = result_p.eigenvalues[i];
    const Vector xi = result_p.eigenvectors.col(i);
    const Vector v = d * xi;
    const Vector bv = next.mass * v;
    const double vbv = v.dot(bv);
    PairEntry e;
    e.index = i;
    e.eigenvalue = alpha;
    e.rayleigh = v.dot(next.apply_stiffness(v)) / vbv;
    e.relative_gap = std::abs(e.rayleigh - alpha) / alpha;
    const double xnorm = xi.dot(mass_p * xi);
    e.energy_defect = std::abs(vbv - alpha * xnorm) / (alpha * xnorm);
    report.pairs.push_back(e);
  }
  return report;
}

PairCountReport match_pair_counts(const SpectrumResult& result_p, const SpectrumResult& result_p1, int k,
                                  double rel_tol) {
  if (static_cast<int>(result_p.tags.size()) != result_p.size() ||
      static_cast<int>(result_p1.tags.size()) != result_p1.size())
    throw ContractError("results are not classified");
  std::vector<double> coexact, closed;
  for (int i = 0; i < result_p.size() && static_cast<int>(coexact.size()) < k; ++i)
    if (result_p.tags[i] == FormTag::Coexact) coexact.push_back(result_p.eigenvalues[i]);
  for (int i = 0; i < result_p1.size(); ++i)
    if (result_p1.tags[i] == FormTag::Closed) closed.push_back(result_p1.eigenvalues[i]);

  PairCountReport report;
  report.coexact_count = static_cast<int>(coexact.size());
  std::vector<bool> used(closed.size(), false);
  for (double a : coexact) {
    int best = -1;
    double best_dev = rel_tol;
    for (std::size_t j = 0; j < closed.size(); ++j) {
      if (used[j]) continue;
      const double dev = std::abs(closed[j] - a) / a;
      if (dev <= best_dev) {
        best = static_cast<int>(j);
        best_dev = dev;
      }
    }
    if (best < 0) continue;
    used[best] = true;
    ++report.matched_closed;
    report.worst_deviation = std::max(report.worst_deviation, best_dev);
  }
  return report;
}

}  // namespace hodgelab
