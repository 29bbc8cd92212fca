#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hodgelab/mesh.hpp"
#include "hodgelab/spectrum.hpp"
#include "hodgelab/verify.hpp"

namespace hodgelab::cli {

inline constexpr int kSchemaVersion = 1;

/// Everything a report file carries. Field order in the JSON is fixed.
struct Report {
  std::string command;
  std::string domain;
  int dim = 0;
  int degree = 0;
  std::string bc;
  double h = 0.0;
  std::uint64_t mesh_hash = 0;
  std::uint64_t seed = 0;
  std::vector<double> eigenvalues;
  std::vector<std::string> tags;
  std::vector<double> residuals;
  int harmonic_count = 0;
  std::vector<VerificationReport> checks;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();

  void set_spectrum(const SpectrumResult& r);
  void set_mesh(const SimplicialComplex& complex);
};

/// Overall status of the checks: fail beats exploratory beats pass.
CheckStatus overall(const std::vector<VerificationReport>& checks);

nlohmann::ordered_json to_json(const Report& report, const std::string& timestamp);
std::string utc_timestamp();

}  // namespace hodgelab::cli
