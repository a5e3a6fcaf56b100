#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "secmeas/error.hpp"
#include "secmeas/verify.hpp"

using namespace secmeas;

namespace {

// Closed forms of the level integral, keyed by the index j of the integrand
// polynomial P_j (so the check parameter is n = j + 1).
double integral_closed_form(const std::string& family, int j) {
  if (family == "lebesgue01") return (j + 1.0) * (j + 1.0) / (4.0 * (2 * j + 1) * (2 * j + 3));
  if (family == "exponential") return (j + 1.0) * (j + 1.0);
  if (family == "gaussian") return j + 1.0;
  return 0.25;
}

}  // namespace

TEST_CASE("identity_43 examples") {
  const auto leb = run_check("identity_43", "lebesgue01", {{"n", 1}});
  CHECK(leb.passed);
  CHECK(leb.expected.real() == doctest::Approx(1.0 / 12).epsilon(1e-14));
  CHECK(leb.actual.real() == doctest::Approx(1.0 / 12).epsilon(1e-6));
  const auto ex = run_check("identity_43", "exponential", {{"n", 1}});
  CHECK(ex.passed);
  CHECK(ex.expected.real() == doctest::Approx(1.0));
  const auto g = run_check("identity_43", "gaussian", {{"n", 3}});
  CHECK(g.passed);
  CHECK(g.expected.real() == doctest::Approx(3.0));
}

TEST_CASE("property: identity_43 matches the closed forms") {
  for (const std::string name : {"lebesgue01", "exponential", "gaussian", "chebyshev2"}) {
    for (int n = 1; n <= 5; ++n) {
      const auto r = run_check("identity_43", name, {{"n", n}});
      CAPTURE(name);
      CAPTURE(n);
      CHECK(r.passed);
      CHECK(r.expected.real() == doctest::Approx(integral_closed_form(name, n - 1)).epsilon(1e-12));
      CHECK(r.diagnostic.find("match") != std::string::npos);
    }
  }
}

TEST_CASE("run_check errors and inapplicable checks") {
  CHECK_THROWS_AS(run_check("no_such_check", "lebesgue01"), Error);
  try {
    run_check("no_such_check", "lebesgue01");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownCheck);
  }
  try {
    run_check("identity_43", "nonexistent");
    FAIL("expected UnknownFamily");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownFamily);
  }
  const auto r = run_check("fixed_point", "lebesgue01");
  CHECK_FALSE(r.passed);
  CHECK(r.diagnostic.find("does not apply") != std::string::npos);

  // Computational failures are data, not exceptions.
  const auto bad = run_check("identity_43", "lebesgue01", {{"n", 0}});
  CHECK_FALSE(bad.passed);
  CHECK(bad.diagnostic.find("InvalidArgument") != std::string::npos);
  const auto far = run_check("identity_43", "lebesgue01", {{"n", 40}});
  CHECK_FALSE(far.passed);
}

TEST_CASE("registry is sorted, complete and covered") {
  const std::vector<std::string> documented = {"identity_43", "identity_61", "wronskian",  "pade_asym",
                                               "chain_moments", "fixed_point", "genfun", "multiint_vs_direct",
                                               "isometry",    "eigenproduct", "assoc_orthogonality"};
  const auto& reg = check_registry();
  for (const auto& id : documented) CHECK(is_registered_check(id));
  CHECK_FALSE(is_registered_check("identity_44"));
  CHECK(std::is_sorted(reg.begin(), reg.end(), [](const auto& a, const auto& b) { return a.id < b.id; }));
  std::set<std::string> ids;
  for (const auto& c : reg) {
    CHECK_FALSE(c.description.empty());
    ids.insert(c.id);
  }
  CHECK(ids.size() == reg.size());

  std::set<std::string> covered;
  for (const auto& cov : identity_coverage()) {
    CHECK_FALSE(cov.check_ids.empty());
    for (const auto& id : cov.check_ids) {
      CHECK(is_registered_check(id));
      covered.insert(id);
    }
  }
  // Every registered check exercises at least one identity.
  for (const auto& c : reg) {
    CAPTURE(c.id);
    CHECK(covered.count(c.id) == 1);
  }
}

TEST_CASE("run_suite examples") {
  CHECK(run_suite({}, {}).empty());
  CHECK(summarize({}).total == 0);

  SuiteOptions opt;
  opt.max_n = 4;
  const auto cheb = run_suite({get_family("chebyshev2")}, opt);
  CHECK_FALSE(cheb.empty());
  for (const auto& r : cheb) {
    CAPTURE(r.check_id);
    CAPTURE(r.diagnostic);
    CHECK(r.passed);
  }

  opt.max_n = 5;
  const auto leb = run_suite({get_family("lebesgue01")}, opt);
  for (const auto& r : leb) {
    CAPTURE(r.check_id);
    CAPTURE(r.diagnostic);
    CHECK(r.passed);
  }
  const auto s = summarize(leb);
  CHECK(s.total == static_cast<int>(leb.size()));
  CHECK(s.failed == 0);

  SuiteOptions bad;
  bad.checks = {"nope"};
  CHECK_THROWS_AS(run_suite({get_family("lebesgue01")}, bad), Error);
}

TEST_CASE("run_suite is deterministic, sorted and thread-count independent") {
  SuiteOptions opt;
  opt.max_n = 3;
  opt.checks = {"identity_43", "chain_moments", "wronskian", "genfun"};
  const std::vector<MeasureFamily> fams = {get_family("gaussian"), get_family("lebesgue01"), get_family("chebyshev2_01")};
  const auto a = run_suite(fams, opt);
  opt.threads = 4;
  const auto b = run_suite(fams, opt);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(to_json_line(a[i]) == to_json_line(b[i]));
  CHECK(std::is_sorted(a.begin(), a.end(), [](const CheckResult& x, const CheckResult& y) {
    return std::tie(x.check_id, x.family, x.params) < std::tie(y.check_id, y.family, y.params);
  }));
  // genfun applies to chebyshev2_01 only.
  CHECK(std::count_if(a.begin(), a.end(), [](const auto& r) { return r.check_id == "genfun"; }) == 3);
}

TEST_CASE("JSON lines") {
  const auto r = run_check("identity_43", "lebesgue01", {{"n", 2}});
  const auto j = nlohmann::json::parse(to_json_line(r));
  CHECK(j["schema_version"] == kReportSchemaVersion);
  CHECK(j["check_id"] == "identity_43");
  CHECK(j["family"] == "lebesgue01");
  CHECK(j["params"]["n"] == 2);
  CHECK(j["params"]["n"].is_number_integer());
  CHECK(j["expected"].get<double>() == r.expected.real());
  CHECK(j["actual"].get<double>() == r.actual.real());
  CHECK(j["passed"] == true);
  CHECK(to_json_line(r).find('\n') == std::string::npos);

  const auto p = run_check("pade_asym", "gaussian", {{"n", 1}});
  const auto jp = nlohmann::json::parse(to_json_line(p));
  CHECK(jp["actual"].is_array());
  CHECK(jp["actual"].size() == 2);

  const auto na = run_check("fixed_point", "gaussian");
  CHECK(nlohmann::json::parse(to_json_line(na))["rel_error"].is_null());

  const auto js = nlohmann::json::parse(to_json_line(SuiteSummary{3, 2, 1}));
  CHECK(js["summary"]["total"] == 3);
  CHECK(js["summary"]["failed"] == 1);
}

TEST_CASE("tolerance override") {
  const auto tight = run_check("identity_43", "exponential", {{"n", 3}, {"tolerance", 1e-300}});
  CHECK_FALSE(tight.passed);
  CHECK(tight.tolerance == 1e-300);
  const auto loose = run_check("identity_43", "exponential", {{"n", 3}});
  CHECK(loose.passed);
  CHECK(loose.tolerance == 1e-4);
}
