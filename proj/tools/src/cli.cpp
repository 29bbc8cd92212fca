#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "hodgelab/assembly.hpp"
#include "hodgelab/dec.hpp"
#include "hodgelab/errors.hpp"
#include "hodgelab/mesh.hpp"
#include "hodgelab/spectrum.hpp"
#include "hodgelab/verify.hpp"
#include "report.hpp"

namespace hodgelab::cli {

namespace {

struct DomainArgs {
  std::string domain = "square";
  std::string mesh_file;
  double a = 1.0, b = 1.0;
  double radius = 1.0;
  double inner = 0.5, outer = 1.0;
  int res = 0;

  void add(CLI::App* app, bool res_required) {
    app->add_option("--domain", domain, "square|rectangle|disk|annulus|lshape|cube")
        ->check(CLI::IsMember({"square", "rectangle", "disk", "annulus", "lshape", "cube"}));
    app->add_option("--mesh", mesh_file, "read the complex from a mesh file instead");
    app->add_option("--a", a, "rectangle width");
    app->add_option("--b", b, "rectangle height");
    app->add_option("--radius", radius, "disk radius");
    app->add_option("--r", inner, "annulus inner radius");
    app->add_option("--R", outer, "annulus outer radius");
    auto* opt = app->add_option("--res", res, "mesh resolution")->check(CLI::PositiveNumber);
    if (res_required) opt->required();
  }

  CanonicalDomain canonical() const {
    CanonicalDomain d;
    if (domain == "square") d = CanonicalDomain::unit_square();
    else if (domain == "rectangle") d = CanonicalDomain::rectangle(a, b);
    else if (domain == "disk") d = CanonicalDomain::disk(radius);
    else if (domain == "annulus") d = CanonicalDomain::annulus(inner, outer);
    else if (domain == "lshape") d = CanonicalDomain::l_shape();
    else d = CanonicalDomain::unit_cube();
    d.validate();
    return d;
  }

  bool from_file() const { return !mesh_file.empty(); }

  SimplicialComplex complex() const {
    if (from_file()) {
      std::ifstream in(mesh_file);
      if (!in) throw ParameterError("cannot open mesh file " + mesh_file);
      std::stringstream ss;
      ss << in.rdbuf();
      return read_mesh(ss.str());
    }
    if (res < 1) throw ParameterError("--res is required");
    return generate(canonical(), res);
  }

  SimplicialComplex complex_at(int resolution) const {
    if (from_file()) throw ParameterError("--mesh cannot be combined with a resolution sweep");
    return generate(canonical(), resolution);
  }
};

struct SolveArgs {
  int count = 10;
  double tol = 1e-10;
  std::uint64_t seed = 0;

  void add(CLI::App* app, int default_count) {
    count = default_count;
    app->add_option("--count", count, "number of eigenpairs")->check(CLI::PositiveNumber);
    app->add_option("--solver-tol", tol, "eigen residual tolerance")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "seed for the start block");
  }

  SolveOptions options(int k) const {
    SolveOptions o;
    o.count = k;
    o.tol = tol;
    o.seed = seed;
    return o;
  }
};

EigenProblem build_problem(const SimplicialComplex& complex, BCKind bc, int degree) {
  switch (bc) {
    case BCKind::ScalarDirichlet:
    case BCKind::ScalarNeumann:
      if (degree != 0) throw ParameterError("scalar problems have degree 0");
      return scalar_laplacian(complex, bc);
    case BCKind::Absolute: return hodge_laplacian_absolute(complex, degree);
    case BCKind::TrueDirichlet: return true_dirichlet_problem(complex, degree);
    case BCKind::CurlCurlRelative:
      if (degree != 1) throw ParameterError("curl-curl problem is posed for degree 1");
      return curl_curl_problem(complex);
  }
  throw ParameterError("unknown boundary condition");
}

bool classifiable(BCKind bc) { return bc == BCKind::Absolute || bc == BCKind::ScalarNeumann; }

SpectrumResult solve_on(const SimplicialComplex& complex, BCKind bc, int degree, const SolveOptions& options) {
  SpectrumResult r = solve(build_problem(complex, bc, degree), options);
  if (classifiable(bc)) classify_eigenforms(r, complex);
  return r;
}

void write_report(const Report& report, const std::string& path, std::ostream& out) {
  const std::string text = to_json(report, utc_timestamp()).dump(2) + "\n";
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ParameterError("cannot write " + path);
  f << text;
}

int exit_code(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return kPass;
    case CheckStatus::Fail: return kFail;
    case CheckStatus::Exploratory: return kExploratory;
  }
  return kFail;
}

// Known Betti numbers of the generated domains.
std::optional<int> expected_betti(const CanonicalDomain& d, int p) {
  if (p == 0) return 1;
  if (d.kind == CanonicalDomain::Kind::Annulus && p == 1) return 1;
  return 0;
}

// Polygonal corners violate the smoothness hypothesis; passes are downgraded.
void mark_lshape(const DomainArgs& args, std::vector<VerificationReport>& checks) {
  if (args.from_file() || args.domain != "lshape") return;
  for (auto& c : checks)
    if (c.status == CheckStatus::Pass) {
      c.status = CheckStatus::Exploratory;
      c.note = "re-entrant corner: smooth-boundary hypothesis does not hold";
    }
}

void print_summary(std::ostream& out, const Report& report, CheckStatus status) {
  out << report.command << ": " << to_string(status);
  for (const auto& c : report.checks) {
    out << "\n  " << c.name << " " << to_string(c.status) << " worst_dev=" << c.worst_dev;
    if (c.first_violation)
      out << " first_violation=#" << c.first_violation->index << " (" << c.first_violation->computed << " vs "
          << c.first_violation->reference << ")";
    if (!c.note.empty()) out << " [" << c.note << "]";
  }
  out << "\n";
}

// ---------------------------------------------------------------- mesh

int cmd_mesh(const DomainArgs& args, int refinements, const std::string& out_path, std::ostream& out) {
  SimplicialComplex c = args.complex();
  for (int i = 0; i < refinements; ++i) c = refine(c);
  std::ofstream f(out_path);
  if (!f) throw ParameterError("cannot write " + out_path);
  f << write_mesh(c);
  const auto bsub = boundary_submesh(c);
  out << "domain " << c.domain_tag() << "\n"
      << "dim " << c.dim() << "\n";
  for (int p = 0; p <= c.dim(); ++p) out << "simplices[" << p << "] " << c.num_simplices(p) << "\n";
  out << "h " << c.max_edge_length() << "\n"
      << "chi " << c.euler_characteristic() << "\n"
      << "boundary_components " << bsub.components << "\n";
  return kPass;
}

// ---------------------------------------------------------------- solve

int cmd_solve(const DomainArgs& args, const SolveArgs& sargs, const std::string& bc_name, int degree,
              const std::string& export_prefix, const std::string& out_path, std::ostream& out) {
  const BCKind bc = parse_bc(bc_name);
  const SimplicialComplex complex = args.complex();
  const EigenProblem problem = build_problem(complex, bc, degree);
  if (!export_prefix.empty()) export_problem(problem, export_prefix);
  SpectrumResult r = solve(problem, sargs.options(sargs.count));
  if (classifiable(bc)) classify_eigenforms(r, complex);

  Report report;
  report.command = "solve";
  report.set_mesh(complex);
  report.set_spectrum(r);
  report.seed = sargs.seed;
  report.params["count"] = sargs.count;
  report.params["solver_tol"] = sargs.tol;
  report.params["method"] = r.method;
  report.params["harmonic_threshold"] = r.harmonic_threshold;
  write_report(report, out_path, out);
  return kPass;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  int degree = 1;
  int k = 8;
  std::optional<double> tol;
  std::optional<double> slack;
  std::optional<int> shift;
  std::string out_path;
};

int finish_verify(Report& report, const DomainArgs& args, const VerifyArgs& v, std::ostream& out) {
  mark_lshape(args, report.checks);
  const CheckStatus status = overall(report.checks);
  if (!v.out_path.empty()) write_report(report, v.out_path, out);
  print_summary(out, report, status);
  return exit_code(status);
}

int verify_decomposition(const DomainArgs& args, const SolveArgs& sargs, const VerifyArgs& v, std::ostream& out) {
  const SimplicialComplex complex = args.complex();
  const double tol = v.tol.value_or(0.02);
  // Extra pairs so that a degenerate cluster at the cut is rotated whole.
  SpectrumResult r = solve_on(complex, BCKind::Absolute, v.degree, sargs.options(v.k + 4));

  DecompositionReferences refs;
  if (!args.from_file()) {
    const CanonicalDomain d = args.canonical();
    if (d.simply_connected()) refs = oracle_references(d, v.degree, v.k + 1);
  }
  Report report;
  report.command = "verify decomposition";
  report.set_mesh(complex);
  report.set_spectrum(r);
  report.seed = sargs.seed;
  auto check = check_decomposition(r, v.k, tol, refs);
  report.checks.push_back(check);
  return finish_verify(report, args, v, out);
}

int verify_top_degree(const DomainArgs& args, const SolveArgs& sargs, const VerifyArgs& v, std::ostream& out) {
  const SimplicialComplex complex = args.complex();
  const int n = complex.dim();
  const double tol = v.tol.value_or(0.01);
  SpectrumResult top = solve_on(complex, BCKind::Absolute, n, sargs.options(v.k));
  SpectrumResult dir = solve(scalar_laplacian(complex, BCKind::ScalarDirichlet), sargs.options(v.k));

  Report report;
  report.command = "verify top-degree";
  report.set_mesh(complex);
  report.set_spectrum(top);
  report.seed = sargs.seed;
  auto m = match_spectra(OrderedSpectrum::computed(top.eigenvalues), OrderedSpectrum::computed(dir.eigenvalues), tol,
                         v.k);
  m.name = "top-degree-vs-dirichlet";
  report.checks.push_back(m);

  VerificationReport closed;
  closed.name = "top-degree-all-closed";
  for (int i = 0; i < top.size(); ++i)
    if (top.tags[i] != FormTag::Closed && top.tags[i] != FormTag::Harmonic) {
      closed.status = CheckStatus::Fail;
      closed.first_violation = Violation{i + 1, top.eigenvalues[i], NAN};
      closed.note = "non-closed tag " + to_string(top.tags[i]);
      break;
    }
  report.checks.push_back(closed);
  report.params["dirichlet"] = dir.eigenvalues;
  return finish_verify(report, args, v, out);
}

int verify_inequality(const DomainArgs& args, const SolveArgs& sargs, const VerifyArgs& v, std::ostream& out) {
  const bool computed = args.res > 0 || args.from_file();
  const int m_max = v.k;
  Report report;
  report.command = "verify inequality";
  report.seed = sargs.seed;

  int n = 2;
  OrderedSpectrum upper, lambda;
  std::optional<CanonicalDomain> domain;
  if (!args.from_file()) domain = args.canonical();
  if (computed) {
    const SimplicialComplex complex = args.complex();
    report.set_mesh(complex);
    n = complex.dim();
    const int need = n == 2 ? m_max + v.shift.value_or(2) : (n - 1) * m_max + 1;
    lambda = OrderedSpectrum::computed(
        solve(scalar_laplacian(complex, BCKind::ScalarDirichlet), sargs.options(m_max)).eigenvalues, "dirichlet");
    if (n == 2) {
      auto r = solve(scalar_laplacian(complex, BCKind::ScalarNeumann), sargs.options(need));
      upper = OrderedSpectrum::computed(r.eigenvalues, "neumann");
      report.set_spectrum(r);
    } else {
      auto r = solve(curl_curl_problem(complex), sargs.options(need));
      upper = OrderedSpectrum::computed(r.eigenvalues, "curlcurl");
      report.set_spectrum(r);
    }
    report.degree = 0;
  } else {
    n = domain->dim();
    report.domain = domain->tag();
    report.dim = n;
    const int need = n == 2 ? m_max + v.shift.value_or(2) : (n - 1) * m_max + 1;
    lambda = closed_form_spectrum(*domain, OracleKind::Dirichlet, m_max);
    upper = closed_form_spectrum(*domain, n == 2 ? OracleKind::Neumann : OracleKind::MaxwellCavity, need);
    report.eigenvalues = upper.values;
  }
  const double slack = v.slack.value_or(computed ? 0.02 : 0.0);

  VerificationReport check;
  if (n == 2) {
    const int shift = v.shift.value_or(2);
    check = check_shifted_inequality(upper, lambda, shift, m_max, slack);
    check.name = "mu[m+" + std::to_string(shift) + "] <= lambda[m]";
    if (shift > 2 && check.status == CheckStatus::Fail)
      check.note = "shift beyond the proven range; a failure here shows the bound is sharp";
  } else {
    if (v.shift) throw ParameterError("--shift applies to two-dimensional domains");
    check = check_inequality(upper, lambda, n, m_max, slack);
    check.name = "theta[(n-1)m+1] <= lambda[m]";
  }
  check.params["oracle"] = computed ? 0.0 : 1.0;
  if (domain && (!domain->simply_connected() || domain->kind == CanonicalDomain::Kind::LShape) &&
      check.status == CheckStatus::Pass) {
    check.status = CheckStatus::Exploratory;
    check.note = "domain outside the hypotheses of the inequality";
  }
  report.checks.push_back(check);
  report.params["lambda"] = lambda.values;
  return finish_verify(report, args, v, out);
}

int verify_harmonic_count(const DomainArgs& args, const SolveArgs& sargs, const VerifyArgs& v, std::ostream& out) {
  const SimplicialComplex complex = args.complex();
  SpectrumResult r = solve_on(complex, BCKind::Absolute, v.degree, sargs.options(std::max(v.k, 4)));
  Report report;
  report.command = "verify harmonic-count";
  report.set_mesh(complex);
  report.set_spectrum(r);
  report.seed = sargs.seed;

  VerificationReport check;
  check.name = "harmonic-count";
  check.params["harmonic_count"] = r.harmonic_count;
  check.params["threshold"] = r.harmonic_threshold;
  const int hc = r.harmonic_count;
  if (hc > 0 && hc < r.size()) {
    const double gap = r.eigenvalues[hc] / std::max(std::abs(r.eigenvalues[hc - 1]), 1e-300);
    check.params["gap_ratio"] = gap;
    if (gap < 1e3) {
      check.status = CheckStatus::Fail;
      check.note = "harmonic eigenvalues are not separated from the rest by 1e3";
    }
  }
  std::optional<int> expected;
  if (!args.from_file()) expected = expected_betti(args.canonical(), v.degree);
  if (!expected) {
    if (check.status == CheckStatus::Pass) check.status = CheckStatus::Exploratory;
    check.note = "no reference Betti number for a loaded mesh";
  } else {
    check.params["expected"] = *expected;
    check.worst_dev = std::abs(hc - *expected);
    if (hc != *expected) {
      check.status = CheckStatus::Fail;
      check.first_violation = Violation{1, static_cast<double>(hc), static_cast<double>(*expected)};
    }
  }
  report.checks.push_back(check);
  return finish_verify(report, args, v, out);
}

int verify_true_dirichlet(const DomainArgs& args, const SolveArgs& sargs, const VerifyArgs& v, std::ostream& out) {
  const SimplicialComplex complex = args.complex();
  const int n = complex.dim();
  const double tol = v.tol.value_or(0.01);
  const EigenProblem td = true_dirichlet_problem(complex, v.degree);
  const SpectrumResult r = solve(td, sargs.options(v.k));
  int copies = 1;
  for (int i = 0; i < v.degree; ++i) copies = copies * (n - i) / (i + 1);
  const int scalar_count = (v.k + copies - 1) / copies;
  const SpectrumResult dir = solve(scalar_laplacian(complex, BCKind::ScalarDirichlet), sargs.options(scalar_count));
  OrderedSpectrum interleaved;
  for (int c = 0; c < copies; ++c)
    interleaved = ordered_disjoint_union(interleaved, OrderedSpectrum::computed(dir.eigenvalues));

  Report report;
  report.command = "verify true-dirichlet";
  report.set_mesh(complex);
  report.set_spectrum(r);
  report.seed = sargs.seed;
  auto m = match_spectra(OrderedSpectrum::computed(r.eigenvalues), interleaved, tol, v.k);
  m.name = "copies-of-dirichlet";
  m.params["copies"] = copies;
  report.checks.push_back(m);

  // The cross-term matrix against the block-diagonal form on random vectors.
  const SparseMatrix cross = true_dirichlet_cross_term_matrix(complex, v.degree);
  std::mt19937_64 rng(sargs.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  VerificationReport identity;
  identity.name = "cross-term-identity";
  identity.params["vectors"] = 50;
  for (int trial = 0; trial < 50; ++trial) {
    Vector x(td.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = dist(rng);
    const double res = (cross * x - td.stiffness * x).norm() / x.norm();
    identity.worst_dev = std::max(identity.worst_dev, res);
  }
  if (identity.worst_dev > 1e-10) {
    identity.status = CheckStatus::Fail;
    identity.first_violation = Violation{1, identity.worst_dev, 1e-10};
  }
  report.checks.push_back(identity);
  return finish_verify(report, args, v, out);
}

// ---------------------------------------------------------------- convergence

std::optional<OrderedSpectrum> convergence_oracle(const CanonicalDomain& d, BCKind bc, int degree, int k) {
  try {
    switch (bc) {
      case BCKind::ScalarDirichlet: return closed_form_spectrum(d, OracleKind::Dirichlet, k);
      case BCKind::ScalarNeumann: return closed_form_spectrum(d, OracleKind::Neumann, k + 1).drop_front(1);
      case BCKind::CurlCurlRelative: return closed_form_spectrum(d, OracleKind::MaxwellCavity, k);
      case BCKind::TrueDirichlet: {
        int copies = 1;
        for (int i = 0; i < degree; ++i) copies = copies * (d.dim() - i) / (i + 1);
        auto one = closed_form_spectrum(d, OracleKind::Dirichlet, k);
        OrderedSpectrum all;
        for (int c = 0; c < copies; ++c) all = ordered_disjoint_union(all, one);
        return all.prefix(k);
      }
      case BCKind::Absolute: {
        if (!d.simply_connected()) return std::nullopt;
        auto refs = oracle_references(d, degree, k + 1);
        if (!refs.closed || !refs.coexact) return std::nullopt;
        auto all = ordered_disjoint_union(*refs.closed, *refs.coexact);
        // Nonzero values only, matching the computed side.
        int zeros = 0;
        while (zeros < all.size() && all.values[zeros] == 0.0) ++zeros;
        return all.drop_front(zeros).prefix(k);
      }
    }
  } catch (const ParameterError&) {
  }
  return std::nullopt;
}

int cmd_convergence(const DomainArgs& args, const SolveArgs& sargs, const std::string& bc_name, int degree,
                    const std::vector<int>& resolutions, const std::string& out_path, std::ostream& out) {
  const BCKind bc = parse_bc(bc_name);
  if (resolutions.empty()) throw ParameterError("--res-list needs at least one resolution");
  const int k = sargs.count;
  std::optional<OrderedSpectrum> oracle;
  if (!args.from_file()) oracle = convergence_oracle(args.canonical(), bc, degree, k);

  struct Row {
    double h;
    std::vector<double> values;  // nonzero eigenvalues, first k
  };
  std::vector<Row> rows;
  for (int res : resolutions) {
    const SimplicialComplex complex = args.complex_at(res);
    SolveOptions o = sargs.options(k);
    EigenProblem problem = build_problem(complex, bc, degree);
    // Skip the kernel (constants, harmonic fields) so indices count nonzero values.
    int extra = (bc == BCKind::ScalarNeumann || bc == BCKind::Absolute) ? 2 : 0;
    o.count = std::min(k + extra, problem.size());
    SpectrumResult r = solve(problem, o);
    Row row{complex.max_edge_length(), {}};
    for (double v : r.eigenvalues)
      if (v >= r.harmonic_threshold && static_cast<int>(row.values.size()) < k) row.values.push_back(v);
    rows.push_back(std::move(row));
  }

  std::ostringstream csv;
  csv << "h,index,computed,oracle,rel_err,order\n";
  csv << std::setprecision(12);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int idx = 0; idx < static_cast<int>(rows[i].values.size()); ++idx) {
      const double v = rows[i].values[idx];
      csv << rows[i].h << "," << idx + 1 << "," << v << ",";
      std::optional<double> order;
      if (oracle && idx < oracle->size()) {
        const double ref = oracle->values[idx];
        const double err = std::abs(v - ref) / ref;
        csv << ref << "," << err << ",";
        if (i > 0 && idx < static_cast<int>(rows[i - 1].values.size())) {
          const double prev = std::abs(rows[i - 1].values[idx] - ref) / ref;
          if (err > 0 && prev > 0) order = std::log(prev / err) / std::log(rows[i - 1].h / rows[i].h);
        }
      } else {
        csv << ",,";
        // Three-level Richardson without a reference value.
        if (i > 1 && idx < static_cast<int>(rows[i - 1].values.size()) &&
            idx < static_cast<int>(rows[i - 2].values.size())) {
          const double d1 = std::abs(rows[i - 2].values[idx] - rows[i - 1].values[idx]);
          const double d2 = std::abs(rows[i - 1].values[idx] - v);
          if (d1 > 0 && d2 > 0) order = std::log(d1 / d2) / std::log(rows[i - 1].h / rows[i].h);
        }
      }
      if (order) csv << *order;
      csv << "\n";
    }
  }
  if (out_path.empty() || out_path == "-") {
    out << csv.str();
  } else {
    std::ofstream f(out_path);
    if (!f) throw ParameterError("cannot write " + out_path);
    f << csv.str();
  }
  return kPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hodgelab: Hodge-Laplacian spectra on simplicial meshes"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // mesh
  DomainArgs mesh_args;
  int refinements = 0;
  std::string mesh_out;
  auto* mesh = app.add_subcommand("mesh", "generate a mesh file");
  mesh_args.add(mesh, false);
  mesh->add_option("--refine", refinements, "uniform refinements after generation")->check(CLI::NonNegativeNumber);
  mesh->add_option("--out", mesh_out, "output mesh file")->required();

  // solve
  DomainArgs solve_args;
  SolveArgs solve_opts;
  std::string bc_name = "absolute", export_prefix, solve_out;
  int solve_degree = 0;
  auto* solve_cmd = app.add_subcommand("solve", "solve one eigenproblem and write a JSON report");
  solve_args.add(solve_cmd, false);
  solve_opts.add(solve_cmd, 10);
  solve_cmd->add_option("--bc", bc_name, "dirichlet|neumann|absolute|true-dirichlet|curlcurl");
  solve_cmd->add_option("--degree", solve_degree, "form degree p")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--export", export_prefix, "write the pencil as Matrix Market files with this prefix");
  solve_cmd->add_option("--out", solve_out, "report path (stdout if omitted)");

  // verify
  DomainArgs verify_args;
  SolveArgs verify_opts;
  VerifyArgs vargs;
  auto* verify = app.add_subcommand("verify", "run a named verification check");
  verify->require_subcommand(1);
  std::map<std::string, CLI::App*> checks;
  for (const char* name : {"decomposition", "top-degree", "inequality", "harmonic-count", "true-dirichlet"}) {
    auto* c = verify->add_subcommand(name);
    verify_args.add(c, false);
    verify_opts.add(c, 10);
    c->add_option("--degree", vargs.degree, "form degree p")->check(CLI::NonNegativeNumber);
    c->add_option("--K", vargs.k, "prefix length / m_max")->check(CLI::PositiveNumber);
    c->add_option("--tol", vargs.tol, "relative tolerance")->check(CLI::PositiveNumber);
    c->add_option("--slack", vargs.slack, "inequality slack")->check(CLI::NonNegativeNumber);
    c->add_option("--shift", vargs.shift, "index shift for the 2D inequality")->check(CLI::NonNegativeNumber);
    c->add_option("--out", vargs.out_path, "report path");
    checks[name] = c;
  }

  // convergence
  DomainArgs conv_args;
  SolveArgs conv_opts;
  std::string conv_bc = "dirichlet", conv_out;
  int conv_degree = 0;
  std::vector<int> res_list;
  auto* conv = app.add_subcommand("convergence", "eigenvalue convergence table (CSV)");
  conv_args.add(conv, false);
  conv_opts.add(conv, 1);
  conv->add_option("--bc", conv_bc, "boundary problem");
  conv->add_option("--degree", conv_degree, "form degree p")->check(CLI::NonNegativeNumber);
  conv->add_option("--res-list", res_list, "resolutions, e.g. 8,16,32")->delimiter(',')->required();
  conv->add_option("--out", conv_out, "CSV path (stdout if omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* sub = &app;
    for (auto* s : app.get_subcommands()) sub = s;
    err << sub->help();
    return kFail;
  }

  try {
    if (*mesh) return cmd_mesh(mesh_args, refinements, mesh_out, out);
    if (*solve_cmd) return cmd_solve(solve_args, solve_opts, bc_name, solve_degree, export_prefix, solve_out, out);
    if (*conv) return cmd_convergence(conv_args, conv_opts, conv_bc, conv_degree, res_list, conv_out, out);
    if (*checks["decomposition"]) return verify_decomposition(verify_args, verify_opts, vargs, out);
    if (*checks["top-degree"]) return verify_top_degree(verify_args, verify_opts, vargs, out);
    if (*checks["inequality"]) return verify_inequality(verify_args, verify_opts, vargs, out);
    if (*checks["harmonic-count"]) return verify_harmonic_count(verify_args, verify_opts, vargs, out);
    if (*checks["true-dirichlet"]) return verify_true_dirichlet(verify_args, verify_opts, vargs, out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what();
    if (!e.residuals().empty()) {
      err << " (residuals:";
      for (double r : e.residuals()) err << " " << r;
      err << ")";
    }
    err << "\n";
    return kNumerical;
  } catch (const ParseError& e) {
    err << "mesh parse error: " << e.what() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFail;
  }
  return kFail;
}

}  // namespace hodgelab::cli
