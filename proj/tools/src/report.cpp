#include "report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

namespace hodgelab::cli {

void Report::set_spectrum(const SpectrumResult& r) {
  degree = r.degree;
  bc = to_string(r.bc);
  h = r.meta.h;
  eigenvalues = r.eigenvalues;
  residuals = r.residuals;
  harmonic_count = r.harmonic_count;
  tags.clear();
  for (auto t : r.tags) tags.push_back(to_string(t));
}

void Report::set_mesh(const SimplicialComplex& complex) {
  domain = complex.domain_tag();
  dim = complex.dim();
  h = complex.max_edge_length();
  mesh_hash = hodgelab::mesh_hash(complex);
}

CheckStatus overall(const std::vector<VerificationReport>& checks) {
  CheckStatus s = CheckStatus::Pass;
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Fail) return CheckStatus::Fail;
    if (c.status == CheckStatus::Exploratory) s = CheckStatus::Exploratory;
  }
  return s;
}

namespace {

nlohmann::ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

nlohmann::ordered_json to_json(const Report& report, const std::string& timestamp) {
  using json = nlohmann::ordered_json;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(report.mesh_hash));

  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = report.command;
  j["domain"] = report.domain;
  j["dim"] = report.dim;
  j["degree"] = report.degree;
  j["bc"] = report.bc;
  j["h"] = report.h;
  j["mesh_hash"] = hash;
  j["seed"] = report.seed;
  j["eigenvalues"] = report.eigenvalues;
  j["tags"] = report.tags;
  j["residuals"] = report.residuals;
  j["harmonic_count"] = report.harmonic_count;
  json checks = json::array();
  for (const auto& c : report.checks) {
    json e;
    e["name"] = c.name;
    e["status"] = to_string(c.status);
    e["worst_dev"] = number(c.worst_dev);
    if (c.first_violation)
      e["first_violation"] = {{"index", c.first_violation->index},
                              {"computed", number(c.first_violation->computed)},
                              {"reference", number(c.first_violation->reference)}};
    else
      e["first_violation"] = nullptr;
    json params = json::object();
    for (const auto& [k, v] : c.params) params[k] = number(v);
    e["params"] = params;
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(e);
  }
  j["checks"] = checks;
  if (!report.params.empty()) j["params"] = report.params;
  j["timestamp"] = timestamp;
  return j;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace hodgelab::cli
