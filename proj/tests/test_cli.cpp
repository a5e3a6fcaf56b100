#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "secmeas/error.hpp"
#include "secmeas/types.hpp"

using secmeas::kPi;
namespace cli = secmeas::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json run_json(const std::vector<std::string>& args) {
  const auto r = run(args);
  REQUIRE(r.code == 0);
  return nlohmann::json::parse(r.out);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("secmeas_test_" + name);
}

}  // namespace

TEST_CASE("density examples") {
  const auto j = run_json({"density", "--family", "lebesgue01", "--n", "1", "--grid", "0.1:0.9:9"});
  CHECK(j["schema_version"] == cli::kCliSchemaVersion);
  CHECK(j["command"] == "density");
  CHECK(j["config"]["family"] == "lebesgue01");
  CHECK(j["meta"]["s_n"].get<double>() == doctest::Approx(0.5));
  REQUIRE(j["rows"].size() == 9);
  CHECK(j["rows"][4]["x"] == 0.5);
  CHECK(j["rows"][4]["rho_n"].get<double>() == doctest::Approx(12 / (kPi * kPi)).epsilon(1e-12));

  const auto base = run_json({"density", "--family", "gaussian", "--n", "0", "--points", "0,1"});
  CHECK(base["rows"][0]["rho_n"].get<double>() == doctest::Approx(1 / std::sqrt(2 * kPi)).epsilon(1e-14));

  const auto cheb = run_json({"density", "--family", "chebyshev2", "--n", "3", "--grid", "-1:1:21"});
  for (const auto& row : cheb["rows"]) {
    const double x = row["x"];
    CHECK(std::abs(row["rho_n"].get<double>() - 2 / kPi * std::sqrt(std::max(0.0, 1 - x * x))) < 1e-8);
  }
  // Endpoints have no reducer.
  CHECK(cheb["rows"][0]["phi_n"].is_null());
}

TEST_CASE("reducer and stieltjes subcommands") {
  const auto red = run_json({"reducer", "--family", "lebesgue01", "--points", "0.75"});
  CHECK(red["rows"][0]["phi_n"].get<double>() == doctest::Approx(2 * std::log(3.0)).epsilon(1e-13));
  const auto st = run_json({"stieltjes", "--family", "lebesgue01", "--z", "2,0", "--z", "0.5,1"});
  REQUIRE(st["rows"].size() == 2);
  CHECK(st["rows"][0]["S_re"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(run({"stieltjes", "--family", "lebesgue01", "--z", "0.5,0"}).code == cli::kComputeError);
  CHECK(run({"stieltjes", "--family", "lebesgue01", "--z", "abc"}).code == cli::kConfigError);
}

TEST_CASE("verify examples") {
  const auto one = run({"verify", "--family", "chebyshev2", "--check", "fixed_point"});
  CHECK(one.code == cli::kOk);
  const auto ls = lines_of(one.out);
  REQUIRE(ls.size() == 3);
  const auto header = nlohmann::json::parse(ls[0]);
  CHECK(header["schema_version"] == 1);
  const auto result = nlohmann::json::parse(ls[1]);
  CHECK(result["check_id"] == "fixed_point");
  CHECK(result["passed"] == true);
  CHECK(nlohmann::json::parse(ls[2])["summary"]["total"] == 1);

  const auto unknown = run({"verify", "--check", "no_such"});
  CHECK(unknown.code == cli::kConfigError);
  CHECK(unknown.out.empty());
  CHECK(unknown.err.find("UnknownCheck") != std::string::npos);

  const auto failing = run({"verify", "--family", "exponential", "--check", "identity_43", "--param", "n=3", "--param",
                            "tolerance=1e-300"});
  CHECK(failing.code == cli::kCheckFailed);

  CHECK(run({"verify", "--family", "lebesgue01", "--check", "identity_43", "--param", "n"}).code == cli::kConfigError);
  CHECK(run({"verify", "--family", "nope"}).code == cli::kConfigError);

  // isometry needs a compact support
  const auto inapplicable = run({"verify", "--family", "gaussian", "--check", "isometry"});
  CHECK(inapplicable.code == cli::kConfigError);
  CHECK(inapplicable.err.find("does not apply") != std::string::npos);
  CHECK(run({"verify", "--family", "all", "--check", "isometry"}).code == cli::kOk);
}

TEST_CASE("verify sweep on all families passes") {
  const auto r = run({"verify", "--family", "all", "--max-n", "4", "--threads", "4"});
  CHECK(r.code == cli::kOk);
  const auto ls = lines_of(r.out);
  const auto summary = nlohmann::json::parse(ls.back());
  CHECK(summary["summary"]["failed"] == 0);
  CHECK(summary["summary"]["total"].get<int>() == static_cast<int>(ls.size()) - 2);
}

TEST_CASE("fourier examples") {
  const auto poly = run_json({"fourier", "--family", "lebesgue01", "--f", "1,0,0,1", "--max-n", "2"});
  REQUIRE(poly["rows"].size() == 3);
  for (const auto& row : poly["rows"]) CHECK(row["discrepancy"].get<double>() < 1e-8);

  const auto rat = run_json({"fourier", "--family", "chebyshev2_01", "--f", "rational:1", "--max-n", "4"});
  REQUIRE(rat["rows"].size() == 5);
  for (const auto& row : rat["rows"]) {
    REQUIRE(row["product_form"].is_number());
    CHECK(std::abs(row["product_form"].get<double>() - row["direct"].get<double>()) < 1e-7);
  }
  CHECK(rat["rows"][4]["multiint"].is_null());

  const auto one = run_json({"fourier", "--family", "gaussian", "--f", "1", "--max-n", "2"});
  CHECK(one["rows"][0]["direct"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(one["rows"][1]["direct"].get<double>()) < 1e-8);
  CHECK(std::abs(one["rows"][2]["direct"].get<double>()) < 1e-8);

  CHECK(run({"fourier", "--family", "lebesgue01", "--f", "1,x"}).code == cli::kConfigError);
  CHECK(run({"fourier", "--family", "lebesgue01", "--f", "rational:-0.5"}).code == cli::kConfigError);
  CHECK(run({"fourier", "--family", "lebesgue01", "--f", "rational:"}).code == cli::kConfigError);
}

TEST_CASE("assoc subcommand") {
  const auto j = run_json({"assoc", "--family", "chebyshev2", "--level", "2", "--max-n", "2"});
  // U_2 = 4x^2 - 1.
  double c0 = 0, c2 = 0;
  for (const auto& row : j["rows"])
    if (row["n"] == 2 && row["poly"] == "P") {
      if (row["power"] == 0) c0 = row["coefficient"];
      if (row["power"] == 2) c2 = row["coefficient"];
    }
  CHECK(c0 == doctest::Approx(-1.0));
  CHECK(c2 == doctest::Approx(4.0));
}

TEST_CASE("csv output") {
  const auto r = run({"density", "--family", "lebesgue01", "--n", "1", "--grid", "0.1:0.9:3", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# schema_version=1 command=density", 0) == 0);
  CHECK(r.out.find("\r\n") != std::string::npos);
  const auto ls = lines_of(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[1] == "x,rho_n,phi_n\r");
  CHECK(ls[3].rfind("0.5,1.21585420371,0", 0) == 0);

  CHECK(cli::csv_field("plain") == "plain");
  CHECK(cli::csv_field("a,b") == "\"a,b\"");
  CHECK(cli::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(cli::csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("parse_coefficients") {
  CHECK(cli::parse_coefficients("1,0,0,1") == std::vector<double>{1, 0, 0, 1});
  CHECK(cli::parse_coefficients(" 2.5 , -1e-3") == std::vector<double>{2.5, -1e-3});
  CHECK_THROWS_AS(cli::parse_coefficients(""), secmeas::Error);
  CHECK_THROWS_AS(cli::parse_coefficients("1,,2"), secmeas::Error);
  CHECK_THROWS_AS(cli::parse_coefficients("1,nan"), secmeas::Error);
}

TEST_CASE("output is byte-deterministic") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"density", "--family", "exponential", "--n", "2", "--grid", "0:5:11"},
           {"fourier", "--family", "lebesgue01", "--f", "rational:1", "--max-n", "3", "--format", "csv"},
           {"verify", "--family", "gaussian", "--max-n", "3"}}) {
    CHECK(run(args).out == run(args).out);
  }
}

TEST_CASE("--output writes a file and nothing on failure") {
  const auto path = temp_path("density.json");
  std::filesystem::remove(path);
  const auto r = run({"density", "--family", "lebesgue01", "--n", "1", "--points", "0.5", "--output", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(nlohmann::json::parse(buf.str())["rows"][0]["x"] == 0.5);
  std::filesystem::remove(path);

  const auto bad = temp_path("bad.json");
  std::filesystem::remove(bad);
  CHECK(run({"stieltjes", "--family", "lebesgue01", "--z", "0.5,0", "--output", bad.string()}).code == cli::kComputeError);
  CHECK_FALSE(std::filesystem::exists(bad));
}

TEST_CASE("configuration errors") {
  CHECK(run({}).code == cli::kConfigError);
  CHECK(run({"density", "--family", "lebesgue01", "--grid", "0:1:1"}).code == cli::kConfigError);
  CHECK(run({"density", "--family", "lebesgue01", "--grid", "0:1"}).code == cli::kConfigError);
  CHECK(run({"density", "--family", "lebesgue01", "--points", "0.5", "--format", "xml"}).code == cli::kConfigError);
  CHECK(run({"density", "--family", "lebesgue01", "--points", "0.5", "--tol", "2"}).code == cli::kConfigError);
  CHECK(run({"density", "--family", "lebesgue01", "--bogus"}).code == cli::kConfigError);
  CHECK(run({"density", "--family", "lebesgue01", "--family-file", "/nonexistent"}).code == cli::kConfigError);
}

TEST_CASE("custom family files") {
  const auto path = temp_path("family.txt");
  {
    std::ofstream f(path);
    f << "name = shifted_legendre\nsupport = compact 0 1\nrecurrence\n";
    for (int n = 0; n < 6; ++n) f << "0.5 " << (n + 1) / (2 * std::sqrt((2.0 * n + 1) * (2 * n + 3))) << "\n";
  }
  const auto j = run_json({"assoc", "--family-file", path.string(), "--family", "shifted_legendre", "--max-n", "1"});
  CHECK_FALSE(j["rows"].empty());
  // Closed-form operations need a density.
  CHECK(run({"density", "--family-file", path.string(), "--family", "shifted_legendre", "--points", "0.5"}).code ==
        cli::kConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("SECMEAS_TOL") {
  ::setenv("SECMEAS_TOL", "garbage", 1);
  CHECK(run({"density", "--family", "lebesgue01", "--points", "0.5"}).code == cli::kConfigError);
  ::setenv("SECMEAS_TOL", "1e-9", 1);
  const auto j = run_json({"density", "--family", "lebesgue01", "--points", "0.5"});
  CHECK(j["config"]["tol"] == 1e-9);
  ::unsetenv("SECMEAS_TOL");
}
