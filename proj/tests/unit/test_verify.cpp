#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "hodgelab/assembly.hpp"
#include "hodgelab/errors.hpp"
#include "hodgelab/spectrum.hpp"
#include "hodgelab/verify.hpp"

using namespace hodgelab;

namespace {

constexpr double kPi2 = M_PI * M_PI;

// J_0..J_{order+1} at x by Miller's downward recurrence, normalized with
// J_0 + 2 sum J_{2k} = 1.
std::vector<double> bessel_j_downward(int order, double x) {
  const int start = 2 * (static_cast<int>(x) + order + 30);
  std::vector<double> j(start + 2, 0.0);
  j[start + 1] = 0.0;
  j[start] = 1e-30;
  for (int k = start; k >= 1; --k) {
    j[k - 1] = 2.0 * k / x * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e250)
      for (int i = k - 1; i <= start + 1; ++i) j[i] *= 1e-250;
  }
  double norm = j[0];
  for (int k = 2; k <= start; k += 2) norm += 2.0 * j[k];
  std::vector<double> out(order + 2);
  for (int k = 0; k <= order + 1; ++k) out[k] = j[k] / norm;
  return out;
}

double bessel_j(int m, double x) { return bessel_j_downward(m, x)[m]; }

double bessel_j_prime(int m, double x) {
  auto j = bessel_j_downward(m + 1, x);
  if (m == 0) return -j[1];
  const auto lower = bessel_j_downward(m - 1, x);
  return 0.5 * (lower[m - 1] - j[m + 1]);
}

OrderedSpectrum spec(std::vector<double> v) { return OrderedSpectrum::computed(std::move(v)); }

std::vector<double> random_sorted(std::mt19937_64& rng, int size) {
  std::uniform_int_distribution<int> pick(0, 6);
  std::vector<double> v(size);
  for (auto& x : v) x = pick(rng) * 0.5;
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("ordered disjoint union", "[verify]") {
  CHECK(ordered_disjoint_union(spec({1, 3}), spec({2})).values == std::vector<double>{1, 2, 3});
  CHECK(ordered_disjoint_union(spec({1, 1}), spec({1})).values == std::vector<double>{1, 1, 1});
  CHECK(ordered_disjoint_union(spec({1, 4}), spec({})).values == std::vector<double>{1, 4});
  CHECK(ordered_disjoint_union(spec({1, 4}), spec({})).provenance == Provenance::Union);
  CHECK_THROWS_AS(ordered_disjoint_union(spec({2, 1}), spec({})), ContractError);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = spec(random_sorted(rng, trial % 7));
    const auto b = spec(random_sorted(rng, (trial * 3) % 5));
    const auto c = spec(random_sorted(rng, 4));
    const auto ab = ordered_disjoint_union(a, b);
    CHECK(ab.values == ordered_disjoint_union(b, a).values);
    CHECK(ordered_disjoint_union(ab, c).values == ordered_disjoint_union(a, ordered_disjoint_union(b, c)).values);
    CHECK(ab.size() == a.size() + b.size());
    if (a.size() && b.size()) CHECK(ab.values.front() == std::min(a.values.front(), b.values.front()));
  }
}

TEST_CASE("closed form spectra", "[verify]") {
  const auto sq = CanonicalDomain::unit_square();
  const auto d = closed_form_spectrum(sq, OracleKind::Dirichlet, 4);
  REQUIRE(d.size() == 4);
  const double expected_d[] = {2, 5, 5, 8};
  for (int i = 0; i < 4; ++i) CHECK(d.values[i] == Catch::Approx(expected_d[i] * kPi2).epsilon(1e-14));
  CHECK(d.provenance == Provenance::Oracle);

  const auto nm = closed_form_spectrum(sq, OracleKind::Neumann, 4);
  CHECK(nm.values[0] == 0.0);
  CHECK(nm.values[1] == Catch::Approx(kPi2));
  CHECK(nm.values[2] == Catch::Approx(kPi2));
  CHECK(nm.values[3] == Catch::Approx(2 * kPi2));

  const auto rect = closed_form_spectrum(CanonicalDomain::rectangle(2.0, 1.0), OracleKind::Dirichlet, 2);
  CHECK(rect.values[0] == Catch::Approx(kPi2 * (0.25 + 1)));
  CHECK(rect.values[1] == Catch::Approx(kPi2 * (1 + 1)));

  const auto disk = closed_form_spectrum(CanonicalDomain::disk(1.0), OracleKind::Dirichlet, 3);
  CHECK(disk.values[0] == Catch::Approx(5.783185962947).epsilon(1e-11));
  CHECK(disk.values[1] == Catch::Approx(disk.values[2]));  // j_{1,1} twice

  const auto cube = CanonicalDomain::unit_cube();
  CHECK(closed_form_spectrum(cube, OracleKind::Dirichlet, 1).values[0] == Catch::Approx(3 * kPi2));
  const auto maxwell = closed_form_spectrum(cube, OracleKind::MaxwellCavity, 5);
  for (int i = 0; i < 3; ++i) CHECK(maxwell.values[i] == Catch::Approx(2 * kPi2));
  for (int i = 3; i < 5; ++i) CHECK(maxwell.values[i] == Catch::Approx(3 * kPi2));

  CHECK_THROWS_AS(closed_form_spectrum(CanonicalDomain::annulus(0.5, 1.0), OracleKind::Dirichlet, 3),
                  ParameterError);
  CHECK_THROWS_AS(closed_form_spectrum(CanonicalDomain::l_shape(), OracleKind::Neumann, 3), ParameterError);
  CHECK_THROWS_AS(closed_form_spectrum(sq, OracleKind::MaxwellCavity, 3), ParameterError);
}

TEST_CASE("oracle enumeration is complete", "[verify]") {
  const double t = 500 * kPi2;
  const auto d = closed_form_spectrum(CanonicalDomain::unit_square(), OracleKind::Dirichlet, 800);
  REQUIRE(d.values.back() > t);
  const auto count = std::count_if(d.values.begin(), d.values.end(), [&](double v) { return v <= t; });
  CHECK(count * 4 * M_PI / t == Catch::Approx(1.0).epsilon(0.15));
  // Brute-force lattice count agrees exactly.
  long brute = 0;
  for (int a = 1; a * a <= 500; ++a)
    for (int b = 1; a * a + b * b <= 500; ++b) ++brute;
  CHECK(count == brute);
  CHECK(d.sorted());
}

TEST_CASE("Bessel zeros", "[verify]") {
  const double j01 = bessel_zero(0, 1);
  CHECK(j01 >= 2.404825557);
  CHECK(j01 <= 2.404825558);
  for (int m = 0; m <= 4; ++m)
    for (int s = 1; s <= 3; ++s) {
      const double z = bessel_zero(m, s);
      INFO("m " << m << " s " << s);
      CHECK(std::abs(bessel_j(m, z)) < 1e-11);
      CHECK(bessel_j(m, z - 1e-6) * bessel_j(m, z + 1e-6) < 0);
      const double zp = bessel_derivative_zero(m, s);
      CHECK(std::abs(bessel_j_prime(m, zp)) < 1e-11);
      if (s > 1) CHECK(bessel_zero(m, s - 1) < z);
    }
  CHECK(bessel_derivative_zero(1, 1) == Catch::Approx(1.841183781340659).epsilon(1e-12));
  CHECK(bessel_derivative_zero(2, 1) == Catch::Approx(3.054236928227140).epsilon(1e-12));
}

TEST_CASE("match spectra", "[verify]") {
  const auto a = spec({1, 2, 2, 3, 5});
  auto same = match_spectra(a, a, 1e-12, 5);
  CHECK(same.passed());
  CHECK(same.worst_dev == 0.0);

  std::vector<double> bumped = a.values;
  for (auto& v : bumped) v *= 1.01;
  CHECK(match_spectra(spec(bumped), a, 0.02, 5).passed());
  CHECK(!match_spectra(spec(bumped), a, 0.005, 5).passed());

  const auto shifted = match_spectra(a, spec({1, 2, 3, 5, 6}), 0.01, 5);
  CHECK(!shifted.passed());
  REQUIRE(shifted.first_violation.has_value());
  CHECK(shifted.first_violation->index == 3);

  CHECK_THROWS_AS(match_spectra(a, spec({1, 2}), 0.01, 3), ContractError);
  // Zero entries are compared against a floor scaled by the K-th value.
  CHECK(match_spectra(spec({1e-12, 4}), spec({0, 4}), 0.01, 2).passed());
}

TEST_CASE("inequality checks", "[verify]") {
  const auto sq = CanonicalDomain::unit_square();
  const auto mu = closed_form_spectrum(sq, OracleKind::Neumann, 40);
  const auto lambda = closed_form_spectrum(sq, OracleKind::Dirichlet, 40);
  const auto shifted = check_shifted_inequality(mu, lambda, 2, 5, 0.0);
  CHECK(shifted.passed());
  CHECK(mu.values[2] == Catch::Approx(kPi2));
  // theta_{m+1} <= lambda_m with theta the full Neumann spectrum (mu_1 = 0 included).
  CHECK(check_inequality(mu, lambda, 2, 20, 0.0).passed());

  const auto disk = CanonicalDomain::disk(1.0);
  const auto dmu = closed_form_spectrum(disk, OracleKind::Neumann, 10);
  const auto dlambda = closed_form_spectrum(disk, OracleKind::Dirichlet, 10);
  CHECK(dmu.values[3] == Catch::Approx(9.3281).epsilon(1e-4));
  const auto sharp = check_shifted_inequality(dmu, dlambda, 3, 1, 0.0);
  CHECK(!sharp.passed());
  REQUIRE(sharp.first_violation.has_value());
  CHECK(sharp.first_violation->index == 1);
  CHECK(check_shifted_inequality(dmu, dlambda, 2, 5, 0.0).passed());

  const auto cube = CanonicalDomain::unit_cube();
  const auto theta = closed_form_spectrum(cube, OracleKind::MaxwellCavity, 20);
  const auto clambda = closed_form_spectrum(cube, OracleKind::Dirichlet, 20);
  const auto r = check_inequality(theta, clambda, 3, 1, 0.0);
  CHECK(r.passed());
  CHECK(r.worst_dev == Catch::Approx(2.0 / 3.0 - 1.0));
  CHECK(check_inequality(theta, clambda, 3, 5, 0.0).passed());

  CHECK_THROWS_AS(check_inequality(theta, clambda, 3, 10, 0.0), ContractError);
  CHECK_THROWS_AS(check_shifted_inequality(spec({0, 1}), spec({1, 2}), 2, 1, 0.0), ContractError);
}

TEST_CASE("decomposition status contract", "[verify]") {
  SpectrumResult fake;
  fake.eigenvalues = {1, 2, 3};
  fake.tags = {FormTag::Closed, FormTag::Unresolved, FormTag::Coexact};
  DecompositionReferences refs{spec({1, 5}), spec({3, 7})};
  CHECK(check_decomposition(fake, 3, 0.01, refs).status == CheckStatus::Exploratory);

  fake.tags = {FormTag::Closed, FormTag::Closed, FormTag::Coexact};
  refs.closed = spec({1, 2});
  CHECK(check_decomposition(fake, 3, 0.01, refs).passed());
  refs.closed = spec({1, 2.5});
  CHECK(check_decomposition(fake, 3, 0.01, refs).status == CheckStatus::Fail);
  CHECK(check_decomposition(fake, 3, 0.01, DecompositionReferences{}).status == CheckStatus::Exploratory);
}

TEST_CASE("decomposition on meshes", "[verify]") {
  SolveOptions opt;
  opt.count = 12;
  const auto sq = CanonicalDomain::unit_square();
  const auto mesh = generate(sq, 32);
  auto r1 = solve(hodge_laplacian_absolute(mesh, 1), opt);
  classify_eigenforms(r1, mesh);
  const auto report = check_decomposition(r1, 8, 0.02, oracle_references(sq, 1, 8));
  INFO(report.note);
  CHECK(report.passed());

  auto r2 = solve(hodge_laplacian_absolute(mesh, 2), opt);
  classify_eigenforms(r2, mesh);
  CHECK(std::none_of(r2.tags.begin(), r2.tags.begin() + 8, [](FormTag t) { return t == FormTag::Coexact; }));
  const auto top_refs = oracle_references(sq, 2, 8);
  CHECK((!top_refs.coexact.has_value() || top_refs.coexact->size() == 0));

  const auto ann = CanonicalDomain::annulus(0.5, 1.0);
  const auto amesh = generate(ann, 16);
  auto ra = solve(hodge_laplacian_absolute(amesh, 1), opt);
  classify_eigenforms(ra, amesh);
  const auto ar = check_decomposition(ra, 8, 0.02, oracle_references(ann, 1, 8));
  CHECK(ar.status == CheckStatus::Exploratory);
}
