#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <variant>

#include "secmeas/error.hpp"
#include "secmeas/fourier.hpp"
#include "secmeas/measures.hpp"
#include "secmeas/secondary_chain.hpp"
#include "secmeas/verify.hpp"

namespace secmeas::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kDefaultTol = 1e-10;
constexpr const char* kTolEnv = "SECMEAS_TOL";

struct Config {
  std::string family = "lebesgue01";
  std::string family_file;
  int n = 0;
  std::string grid;
  std::string points;
  std::vector<std::string> z;
  double tol = kDefaultTol;
  std::string format = "json";
  std::string output;
  int max_n = 4;
  std::vector<std::string> checks;
  std::vector<std::string> params;
  std::string f = "1";
  int m = 6;
  int level = 1;
  int threads = 1;
};

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
  std::string command;
  Json config;
  Json meta = Json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

Cell maybe(const std::optional<double>& v) { return v ? Cell(*v) : Cell(); }

std::string format_csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json cell_json(const Cell& c) {
  if (std::holds_alternative<double>(c)) return json_number(std::get<double>(c));
  if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return nullptr;
}

std::string cell_csv(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_csv_number(std::get<double>(c));
  if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
  if (std::holds_alternative<std::string>(c)) return csv_field(std::get<std::string>(c));
  return "";
}

std::string meta_text(const Json& j) {
  if (j.is_number_float()) return format_csv_number(j.get<double>());
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

// "# schema_version=1 command=... key=value ..." ahead of the header row.
std::string csv_metadata(const Table& t) {
  std::ostringstream os;
  os << "# schema_version=" << kCliSchemaVersion << " command=" << t.command;
  for (const auto& [k, v] : t.config.items()) os << ' ' << k << '=' << meta_text(v);
  for (const auto& [k, v] : t.meta.items()) os << ' ' << k << '=' << meta_text(v);
  return os.str();
}

void write_table(const Table& t, const std::string& format, std::ostream& out) {
  if (format == "csv") {
    out << csv_metadata(t) << "\r\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_field(t.columns[i]);
    out << "\r\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_csv(row[i]);
      out << "\r\n";
    }
    return;
  }
  Json j;
  j["schema_version"] = kCliSchemaVersion;
  j["command"] = t.command;
  j["config"] = t.config;
  j["meta"] = t.meta;
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json r = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  out << j.dump(2) << '\n';
}

double parse_double(const std::string& raw, const std::string& what) {
  const auto first = raw.find_first_not_of(" \t");
  const std::string text = first == std::string::npos ? "" : raw.substr(first, raw.find_last_not_of(" \t") - first + 1);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) throw Error(ErrorKind::ParseError, what + ": cannot parse '" + raw + "'");
  if (!std::isfinite(v)) throw Error(ErrorKind::ParseError, what + ": '" + raw + "' is not finite");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::vector<double> grid_points(const Config& c) {
  if (!c.points.empty()) {
    std::vector<double> xs;
    for (const auto& s : split(c.points, ',')) xs.push_back(parse_double(s, "--points"));
    return xs;
  }
  if (c.grid.empty()) throw Error(ErrorKind::InvalidArgument, "one of --grid or --points is required");
  const auto parts = split(c.grid, ':');
  if (parts.size() != 3) throw Error(ErrorKind::ParseError, "--grid expects start:stop:count");
  const double lo = parse_double(parts[0], "--grid start"), hi = parse_double(parts[1], "--grid stop");
  const double count = parse_double(parts[2], "--grid count");
  if (count < 2 || count != std::floor(count) || count > 1e7)
    throw Error(ErrorKind::InvalidArgument, "--grid count must be an integer >= 2");
  const int k = static_cast<int>(count);
  std::vector<double> xs;
  for (int i = 0; i < k; ++i) xs.push_back((lo * (k - 1 - i) + hi * i) / (k - 1));
  return xs;
}

Complex parse_point(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw Error(ErrorKind::ParseError, "--z expects re,im");
  return {parse_double(parts[0], "--z real part"), parse_double(parts[1], "--z imaginary part")};
}

MeasureFamily resolve_family(const Config& c) {
  if (!c.family_file.empty()) return load_custom_family(c.family_file);
  return get_family(c.family);
}

SecondaryChain make_chain(const MeasureFamily& fam, int level) {
  // Custom tables can be short; keep the chain within the rows they provide.
  return SecondaryChain(fam, std::min(std::max(10, level + 1), std::max(fam.max_index() - 1, level)));
}

Json base_config(const Config& c, const MeasureFamily& fam) {
  Json j;
  j["family"] = fam.name();
  if (!c.family_file.empty()) j["family_file"] = c.family_file;
  j["tol"] = c.tol;
  j["format"] = c.format;
  return j;
}

void add_level_meta(Table& t, const SecondaryChain& chain, int n) {
  const auto r = chain.level_coeffs(n);
  t.meta["s_n"] = r.s;
  t.meta["t_n"] = r.t;
  t.meta["d0_n"] = r.t * r.t;
}

Table cmd_density(const Config& c, bool with_density) {
  const auto fam = resolve_family(c);
  const auto chain = make_chain(fam, c.n);
  const auto xs = grid_points(c);
  Table t;
  t.command = with_density ? "density" : "reducer";
  t.config = base_config(c, fam);
  t.config["n"] = c.n;
  if (!c.grid.empty() && c.points.empty()) t.config["grid"] = c.grid;
  if (!c.points.empty()) t.config["points"] = c.points;
  add_level_meta(t, chain, c.n);
  t.columns = with_density ? std::vector<std::string>{"x", "rho_n", "phi_n"} : std::vector<std::string>{"x", "phi_n"};
  for (double x : xs) {
    // The reducer is defined on the open support only.
    const Cell phi = fam.support().interior(x) ? Cell(chain.reducer(c.n, x)) : Cell();
    if (with_density)
      t.rows.push_back({x, chain.density(c.n, x), phi});
    else
      t.rows.push_back({x, phi});
  }
  return t;
}

Table cmd_stieltjes(const Config& c) {
  if (c.z.empty()) throw Error(ErrorKind::InvalidArgument, "stieltjes needs at least one --z re,im");
  const auto fam = resolve_family(c);
  const auto chain = make_chain(fam, c.n);
  Table t;
  t.command = "stieltjes";
  t.config = base_config(c, fam);
  t.config["n"] = c.n;
  add_level_meta(t, chain, c.n);
  t.columns = {"z_re", "z_im", "S_re", "S_im"};
  for (const auto& text : c.z) {
    const Complex z = parse_point(text);
    const Complex s = chain.stieltjes(c.n, z);
    t.rows.push_back({z.real(), z.imag(), s.real(), s.imag()});
  }
  return t;
}

FourierTarget parse_target(const std::string& spec) {
  static const std::string prefix = "rational:";
  if (spec.rfind(prefix, 0) == 0) return FourierTarget::rational(parse_double(spec.substr(prefix.size()), "--f rational shift"));
  return FourierTarget::polynomial(Polynomial(parse_coefficients(spec)));
}

Table cmd_fourier(const Config& c) {
  const auto fam = resolve_family(c);
  const auto target = parse_target(c.f);
  if (auto a = target.rational_shift()) {
    if (fam.support().distance(Complex(-*a, 0.0)) < 1e-12 || !std::isfinite(*a))
      throw Error(ErrorKind::InvalidArgument, "--f " + c.f + " puts -a on the support of " + fam.name());
  }
  if (c.m < 1) throw Error(ErrorKind::InvalidArgument, "--m must be positive");
  const auto chain = make_chain(fam, c.max_n + 1);
  Table t;
  t.command = "fourier";
  t.config = base_config(c, fam);
  t.config["f"] = c.f;
  t.config["max_n"] = c.max_n;
  t.config["m"] = c.m;
  t.meta["multiint_max_n"] = kMaxMultiintOrder;
  t.columns = {"n", "direct", "multiint", "product_form", "refinement_delta", "discrepancy"};
  for (int n = 0; n <= c.max_n; ++n) {
    const auto r = fourier_report(chain, target, n, c.m, c.tol);
    t.rows.push_back({static_cast<long long>(n), r.direct, maybe(r.multiint), maybe(r.product_form),
                      maybe(r.refinement_delta), maybe(r.discrepancy)});
  }
  return t;
}

Table cmd_assoc(const Config& c) {
  const auto fam = resolve_family(c);
  const auto chain = make_chain(fam, c.level);
  const int N = c.max_n;
  const auto sys = chain.level_system(c.level, N);
  Table t;
  t.command = "assoc";
  t.config = base_config(c, fam);
  t.config["level"] = c.level;
  t.config["max_n"] = N;
  add_level_meta(t, chain, c.level);
  t.columns = {"n", "poly", "power", "coefficient"};
  for (int n = 0; n <= N; ++n) {
    const auto i = static_cast<std::size_t>(n);
    for (const auto* which : {"P", "Q"}) {
      const auto& p = which[0] == 'P' ? sys.P[i] : sys.Q[i];
      for (int k = 0; k <= std::max(p.degree(), 0); ++k)
        t.rows.push_back({static_cast<long long>(n), std::string(which), static_cast<long long>(k), p[k]});
    }
  }
  return t;
}

CheckParams parse_params(const std::vector<std::string>& items) {
  CheckParams out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::ParseError, "--param expects key=value, got '" + item + "'");
    out[item.substr(0, eq)] = parse_double(item.substr(eq + 1), "--param " + item.substr(0, eq));
  }
  return out;
}

std::string params_text(const CheckParams& p) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : p) {
    os << (first ? "" : ";") << k << '=' << format_csv_number(v);
    first = false;
  }
  return os.str();
}

int cmd_verify(const Config& c, bool sweep, std::ostream& out) {
  for (const auto& id : c.checks)
    if (!is_registered_check(id)) throw Error(ErrorKind::UnknownCheck, "unknown check '" + id + "'");
  std::vector<MeasureFamily> families;
  if (!c.family_file.empty())
    families.push_back(load_custom_family(c.family_file));
  else if (c.family == "all")
    for (const auto& name : builtin_family_names()) families.push_back(get_family(name));
  else
    families.push_back(get_family(c.family));
  // An explicitly requested check on a single family must produce a record.
  if (families.size() == 1)
    for (const auto& id : c.checks)
      if (!check_applies(id, families.front()))
        throw Error(ErrorKind::CapabilityMissing,
                    "check '" + id + "' does not apply to family " + families.front().name());

  std::vector<CheckResult> results;
  if (c.checks.empty() || sweep) {
    SuiteOptions opt;
    opt.max_n = c.max_n;
    opt.checks = c.checks;
    opt.threads = c.threads;
    results = run_suite(families, opt);
  } else {
    const auto params = parse_params(c.params);
    for (const auto& id : c.checks)
      for (const auto& fam : families)
        if (check_applies(id, fam)) results.push_back(run_check(id, make_chain(fam, 12), params));
  }
  const auto summary = summarize(results);

  Json config;
  config["family"] = c.family_file.empty() ? c.family : families.front().name();
  config["max_n"] = c.max_n;
  config["checks"] = c.checks;
  config["params"] = c.params;
  if (c.format == "csv") {
    Table t;
    t.command = "verify";
    t.config = config;
    t.meta["total"] = summary.total;
    t.meta["passed"] = summary.passed;
    t.meta["failed"] = summary.failed;
    t.columns = {"check_id", "family", "params", "expected_re", "expected_im", "actual_re", "actual_im",
                 "rel_error", "tolerance", "passed", "diagnostic"};
    for (const auto& r : results)
      t.rows.push_back({r.check_id, r.family, params_text(r.params), r.expected.real(), r.expected.imag(),
                        r.actual.real(), r.actual.imag(), r.rel_error, r.tolerance,
                        std::string(r.passed ? "true" : "false"), r.diagnostic});
    write_table(t, "csv", out);
  } else {
    Json header;
    header["schema_version"] = kCliSchemaVersion;
    header["command"] = "verify";
    header["config"] = config;
    out << header.dump() << '\n';
    for (const auto& r : results) out << to_json_line(r) << '\n';
    out << to_json_line(summary) << '\n';
  }
  return summary.failed > 0 ? kCheckFailed : kOk;
}

bool is_config_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::UnknownFamily:
    case ErrorKind::UnknownCheck:
    case ErrorKind::ParseError:
    case ErrorKind::IndexOutOfRange:
    case ErrorKind::CapabilityMissing:
      return true;
    default:
      return false;
  }
}

double default_tolerance() {
  const char* env = std::getenv(kTolEnv);
  if (env == nullptr || *env == '\0') return kDefaultTol;
  return parse_double(env, kTolEnv);
}

}  // namespace

std::vector<double> parse_coefficients(const std::string& text) {
  if (text.empty()) throw Error(ErrorKind::ParseError, "empty coefficient list");
  std::vector<double> out;
  for (const auto& s : split(text, ',')) out.push_back(parse_double(s, "coefficient"));
  return out;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  try {
    c.tol = default_tolerance();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  CLI::App app{"Secondary measures: densities, transforms, identity checks and Fourier coefficients."};
  app.name("secmeas");
  app.require_subcommand(1);
  app.footer(
      "Families: lebesgue01, exponential, gaussian, chebyshev2, chebyshev2_01 (verify also accepts 'all').\n"
      "Polynomial --f: comma-separated ascending coefficients, e.g. 1,0,0,1 for 1 + x^3.\n"
      "Rational --f: rational:<a> for 1/(x + a).\n"
      "Default tolerance from SECMEAS_TOL when set.\n"
      "Exit codes: 0 ok, 1 failed checks, 2 configuration error, 3 computational error.");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--family", c.family, "Family name")->capture_default_str();
    sub->add_option("--family-file", c.family_file, "Custom family definition file");
    sub->add_option("--tol", c.tol, "Quadrature tolerance in (0, 1)");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--output", c.output, "Write to this file instead of standard output");
  };
  auto tabulate = [&](CLI::App* sub) {
    common(sub);
    sub->add_option("--n", c.n, "Chain level")->check(CLI::Range(0, 30))->capture_default_str();
    sub->add_option("--grid", c.grid, "start:stop:count");
    sub->add_option("--points", c.points, "Comma-separated x values");
  };

  auto* density = app.add_subcommand("density", "Tabulate rho_n and phi_n on a grid");
  tabulate(density);
  auto* reducer = app.add_subcommand("reducer", "Tabulate phi_n on a grid");
  tabulate(reducer);
  auto* stieltjes = app.add_subcommand("stieltjes", "Evaluate S_n at complex points");
  common(stieltjes);
  stieltjes->add_option("--n", c.n, "Chain level")->check(CLI::Range(0, 30))->capture_default_str();
  stieltjes->add_option("--z", c.z, "Point re,im (repeatable)");

  auto* verify = app.add_subcommand("verify", "Run identity checks; JSON lines by default");
  common(verify);
  auto* max_n_opt = verify->add_option("--max-n", c.max_n, "Largest index swept")->check(CLI::Range(0, 10))->capture_default_str();
  verify->add_option("--check", c.checks, "Check id (repeatable); runs once with default parameters unless --max-n is given");
  verify->add_option("--param", c.params, "key=value override for a single --check run (repeatable)");
  verify->add_option("--threads", c.threads, "Worker threads for the sweep")->check(CLI::Range(1, 256));

  auto* fourier = app.add_subcommand("fourier", "Fourier coefficients by direct quadrature, multiple integral and product form");
  common(fourier);
  fourier->add_option("--f", c.f, "Target: coefficients c0,c1,... or rational:<a>")->capture_default_str();
  fourier->add_option("--max-n", c.max_n, "Largest n")->check(CLI::Range(0, 20))->capture_default_str();
  fourier->add_option("--m", c.m, "Gauss rule size of the first axis")->check(CLI::Range(1, 24))->capture_default_str();

  auto* assoc = app.add_subcommand("assoc", "Dump coefficients of the orthonormal system of rho_level");
  common(assoc);
  assoc->add_option("--level", c.level, "Chain level")->check(CLI::Range(0, 12))->capture_default_str();
  assoc->add_option("--max-n", c.max_n, "Largest degree")->check(CLI::Range(0, 16))->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  if (!(c.tol > 0.0 && c.tol < 1.0)) {
    err << "error: InvalidArgument: tolerance must lie in (0, 1)\n";
    return kConfigError;
  }

  try {
    // Render everything before touching the destination so a failure leaves
    // neither partial output nor an empty --output file.
    std::ostringstream buffer;
    int code = kOk;
    if (*density)
      write_table(cmd_density(c, true), c.format, buffer);
    else if (*reducer)
      write_table(cmd_density(c, false), c.format, buffer);
    else if (*stieltjes)
      write_table(cmd_stieltjes(c), c.format, buffer);
    else if (*fourier)
      write_table(cmd_fourier(c), c.format, buffer);
    else if (*assoc)
      write_table(cmd_assoc(c), c.format, buffer);
    else if (*verify)
      code = cmd_verify(c, max_n_opt->count() > 0, buffer);
    if (c.output.empty()) {
      out << buffer.str();
      return code;
    }
    std::ofstream file(c.output, std::ios::binary);
    if (!(file << buffer.str())) {
      err << "error: cannot write output file " << c.output << '\n';
      return kConfigError;
    }
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_config_error(e.kind()) ? kConfigError : kComputeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputeError;
  }
}

}  // namespace secmeas::cli
