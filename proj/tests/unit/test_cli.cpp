#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using hodgelab::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "hodgelab_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("mesh subcommand", "[cli]") {
  const auto path = scratch("square8.mesh");
  const auto r = call({"mesh", "--domain", "square", "--res", "8", "--out", path.string()});
  CHECK(r.code == 0);
  const std::string text = slurp(path);
  CHECK(text.rfind("2 81 128\n", 0) == 0);
  CHECK(r.out.find("chi") != std::string::npos);

  const auto ann = call({"mesh", "--domain", "annulus", "--r", "0.5", "--R", "1", "--res", "6", "--out",
                         scratch("ann.mesh").string()});
  CHECK(ann.code == 0);
  CHECK(ann.out.find("boundary_components 2") != std::string::npos);

  CHECK(call({"mesh", "--domain", "square", "--res", "8"}).code == 2);
  CHECK(call({"mesh", "--domain", "annulus", "--r", "2", "--R", "1", "--res", "4", "--out",
              scratch("bad.mesh").string()})
            .code == 2);
  CHECK(call({"mesh", "--domain", "hexagon", "--res", "4", "--out", scratch("bad.mesh").string()}).code == 2);
}

TEST_CASE("solve report", "[cli]") {
  const auto path = scratch("solve.json");
  const auto r = call({"solve", "--domain", "square", "--res", "12", "--bc", "absolute", "--degree", "1", "--count",
                       "6", "--seed", "3", "--out", path.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(path));
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("command") == "solve");
  CHECK(j.at("dim") == 2);
  CHECK(j.at("degree") == 1);
  CHECK(j.at("seed") == 3);
  CHECK(j.at("eigenvalues").size() == 6);
  CHECK(j.at("tags").size() == 6);
  CHECK(j.at("residuals").size() == 6);
  CHECK(j.at("mesh_hash").get<std::string>().size() == 16);
  CHECK(j.contains("timestamp"));

  // Without --out the report goes to stdout; a mesh file is accepted as input.
  const auto mesh_path = scratch("in.mesh");
  REQUIRE(call({"mesh", "--domain", "square", "--res", "12", "--out", mesh_path.string()}).code == 0);
  const auto from_file = call({"solve", "--mesh", mesh_path.string(), "--bc", "absolute", "--degree", "1", "--count",
                               "6", "--seed", "3"});
  REQUIRE(from_file.code == 0);
  const auto jf = nlohmann::json::parse(from_file.out);
  CHECK(jf.at("eigenvalues") == j.at("eigenvalues"));
  CHECK(jf.at("mesh_hash") == j.at("mesh_hash"));

  const auto prefix = scratch("pencil").string();
  CHECK(call({"solve", "--domain", "square", "--res", "6", "--bc", "dirichlet", "--count", "2", "--export", prefix,
              "--out", scratch("x.json").string()})
            .code == 0);
  CHECK(std::filesystem::exists(prefix + "_A.mtx"));
}

TEST_CASE("solve failures", "[cli]") {
  const auto numerical = call({"solve", "--domain", "square", "--res", "40", "--bc", "dirichlet", "--count", "10",
                               "--solver-tol", "1e-18"});
  CHECK(numerical.code == 3);
  CHECK(numerical.err.find("residuals") != std::string::npos);

  const auto bad_mesh = scratch("broken.mesh");
  std::ofstream(bad_mesh) << "2 5 2\n0 0\n1 0\n1 1\n0 1\n0 1 2\n0 2 3\n";
  const auto parse = call({"solve", "--mesh", bad_mesh.string(), "--bc", "dirichlet", "--count", "1"});
  CHECK(parse.code == 2);
  CHECK(parse.err.find("line 6") != std::string::npos);

  CHECK(call({"solve", "--domain", "square", "--res", "4", "--bc", "robin"}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("verify subcommands", "[cli]") {
  const auto dec = call({"verify", "decomposition", "--domain", "square", "--res", "32", "--degree", "1", "--K", "8",
                         "--tol", "0.02", "--out", scratch("dec.json").string()});
  CHECK(dec.code == 0);
  const auto j = nlohmann::json::parse(slurp(scratch("dec.json")));
  REQUIRE(j.at("checks").size() >= 1);
  CHECK(j.at("checks")[0].at("status") == "pass");

  CHECK(call({"verify", "top-degree", "--domain", "square", "--res", "64", "--K", "8", "--tol", "0.01"}).code == 0);
  CHECK(call({"verify", "harmonic-count", "--domain", "annulus", "--res", "24", "--degree", "1"}).code == 0);
  CHECK(call({"verify", "harmonic-count", "--domain", "square", "--res", "16", "--degree", "1"}).code == 0);
  CHECK(call({"verify", "true-dirichlet", "--domain", "square", "--res", "16", "--degree", "1", "--K", "10"}).code ==
        0);
  CHECK(call({"verify", "inequality", "--domain", "square", "--K", "20"}).code == 0);
  CHECK(call({"verify", "inequality", "--domain", "disk", "--res", "32", "--K", "5"}).code == 0);
  CHECK(call({"verify", "inequality", "--domain", "cube", "--K", "5"}).code == 0);

  // The shifted claim fails on the disk: exit 2 with a first violation.
  const auto sharp = call({"verify", "inequality", "--domain", "disk", "--K", "1", "--shift", "3", "--out",
                           scratch("sharp.json").string()});
  CHECK(sharp.code == 2);
  const auto js = nlohmann::json::parse(slurp(scratch("sharp.json")));
  CHECK(js.at("checks")[0].at("first_violation").at("index") == 1);

  CHECK(call({"verify", "inequality", "--domain", "cube", "--K", "2", "--shift", "3"}).code == 2);
  CHECK(call({"verify", "decomposition", "--domain", "annulus", "--res", "16", "--degree", "1", "--K", "8"}).code ==
        4);
  CHECK(call({"verify", "decomposition", "--domain", "lshape", "--res", "8", "--degree", "1", "--K", "6"}).code == 4);
  CHECK(call({"verify"}).code == 2);
}

TEST_CASE("convergence table", "[cli]") {
  const auto r = call({"convergence", "--domain", "square", "--bc", "dirichlet", "--res-list", "8,16,32"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "h,index,computed,oracle,rel_err,order");
  std::vector<std::string> rows;
  for (std::string line; std::getline(lines, line);) rows.push_back(line);
  REQUIRE(rows.size() == 3);
  const double order = std::stod(rows.back().substr(rows.back().rfind(',') + 1));
  CHECK(order >= 1.7);
  CHECK(order <= 2.3);
  CHECK(call({"convergence", "--domain", "square"}).code == 2);
}
