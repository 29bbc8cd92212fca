#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hodgelab/mesh.hpp"
#include "hodgelab/spectrum.hpp"

namespace hodgelab {

enum class Provenance { Computed, Oracle, Union };
std::string to_string(Provenance p);

/// Nondecreasing finite prefix of a spectrum.
struct OrderedSpectrum {
  std::vector<double> values;
  Provenance provenance = Provenance::Computed;
  std::vector<std::string> labels;  // empty or one per value

  int size() const { return static_cast<int>(values.size()); }
  bool sorted() const;
  /// First k values (labels kept in step).
  OrderedSpectrum prefix(int k) const;
  /// Drops the first `count` values (e.g. mu_1 = 0).
  OrderedSpectrum drop_front(int count) const;

  static OrderedSpectrum computed(std::vector<double> values, std::string label = {});
};

/// Sorted merge; multiplicities add. Throws ContractError on unsorted input.
OrderedSpectrum ordered_disjoint_union(const OrderedSpectrum& a, const OrderedSpectrum& b);

enum class OracleKind { Dirichlet, Neumann, MaxwellCavity };
std::string to_string(OracleKind kind);

/// First K eigenvalues on separable domains: rectangle/square, disk, cube
/// (Maxwell only on the cube). Throws ParameterError otherwise.
OrderedSpectrum closed_form_spectrum(const CanonicalDomain& domain, OracleKind kind, int k);

/// s-th positive zero of J_m and of J_m' (s >= 1), absolute accuracy 1e-12.
double bessel_zero(int m, int s);
double bessel_derivative_zero(int m, int s);

enum class CheckStatus { Pass, Fail, Exploratory };
std::string to_string(CheckStatus status);

struct Violation {
  int index = 0;  // 1-based position in the checked sequence
  double computed = 0.0;
  double reference = 0.0;
};

struct VerificationReport {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double worst_dev = 0.0;
  std::optional<Violation> first_violation;
  std::vector<double> deviations;
  std::map<std::string, double> params;
  std::string note;

  bool passed() const { return status == CheckStatus::Pass; }
};

/// Index-wise comparison of the first K values:
/// |a_i - b_i| <= rel_tol * max(|b_i|, 1e-9 * b_K).
VerificationReport match_spectra(const OrderedSpectrum& a, const OrderedSpectrum& b, double rel_tol, int k);

/// Independent spectra that the CLOSED and COEXACT parts should reproduce.
struct DecompositionReferences {
  std::optional<OrderedSpectrum> closed;
  std::optional<OrderedSpectrum> coexact;
};

/// Oracle-based references for degree p on `domain`; parts are left empty
/// where no closed form exists (annulus, L-shape, unsupported degree).
DecompositionReferences oracle_references(const CanonicalDomain& domain, int p, int k);

/// Splits the first K classified eigenvalues by tag (harmonic ones count as
/// CLOSED with value 0), checks the partition reproduces the prefix, and
/// matches each part against its reference.
VerificationReport check_decomposition(const SpectrumResult& full, int k, double rel_tol,
                                       const DecompositionReferences& refs);

/// theta_{(n-1)m+1} <= lambda_m (1 + slack) for m = 1..m_max.
VerificationReport check_inequality(const OrderedSpectrum& theta, const OrderedSpectrum& lambda, int n, int m_max,
                                    double slack);

/// mu_{m+shift} <= lambda_m (1 + slack) for m = 1..m_max.
VerificationReport check_shifted_inequality(const OrderedSpectrum& mu, const OrderedSpectrum& lambda, int shift,
                                            int m_max, double slack);

}  // namespace hodgelab
