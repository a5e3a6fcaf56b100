#include "secmeas/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "secmeas/error.hpp"
#include "secmeas/quad.hpp"
#include "secmeas/special.hpp"

namespace secmeas {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnknownFamily: return "UnknownFamily";
    case ErrorKind::CapabilityMissing: return "CapabilityMissing";
    case ErrorKind::OnSupport: return "OnSupport";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::NodeCollision: return "NodeCollision";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::EigenFailure: return "EigenFailure";
    case ErrorKind::GridTooLarge: return "GridTooLarge";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::ZeroDivision: return "ZeroDivision";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::UnknownCheck: return "UnknownCheck";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string_view to_string(SupportKind kind) noexcept {
  switch (kind) {
    case SupportKind::Compact: return "compact";
    case SupportKind::HalfLine: return "halfline";
    case SupportKind::RealLine: return "realline";
  }
  return "unknown";
}

double Interval::distance(Complex z) const noexcept {
  const double x = z.real();
  const double dx = x < lower ? lower - x : (x > upper ? x - upper : 0.0);
  return std::hypot(dx, z.imag());
}

MeasureFamily::MeasureFamily(FamilyDefinition def) : def_(std::move(def)) {
  if (def_.name.empty()) throw Error(ErrorKind::InvalidArgument, "family needs a name");
  if (!def_.recurrence) throw Error(ErrorKind::InvalidArgument, "family " + def_.name + " has no recurrence");
  if (def_.max_index < 1) throw Error(ErrorKind::InvalidArgument, "family needs at least two recurrence rows");
}

RecurrenceCoeffs MeasureFamily::recurrence(int n) const {
  if (n < 0 || n > def_.max_index) {
    std::ostringstream msg;
    msg << def_.name << ": recurrence index " << n << " outside [0, " << def_.max_index << "]";
    throw Error(ErrorKind::IndexOutOfRange, msg.str());
  }
  return def_.recurrence(n);
}

RecurrenceTable MeasureFamily::recurrence_table(int count, int offset) const {
  RecurrenceTable out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) out.push_back(recurrence(offset + k));
  return out;
}

double MeasureFamily::density(double x) const {
  if (!def_.density) throw Error(ErrorKind::CapabilityMissing, def_.name + " has no density");
  if (!def_.support.contains(x)) return 0.0;
  return def_.density(x);
}

double MeasureFamily::reducer(double x) const {
  if (!def_.reducer) throw Error(ErrorKind::CapabilityMissing, def_.name + " has no reducer");
  if (!def_.support.interior(x)) {
    std::ostringstream msg;
    msg << def_.name << ": reducer requested at x = " << x << " outside the open support";
    throw Error(ErrorKind::OutOfDomain, msg.str());
  }
  return def_.reducer(x);
}

Complex MeasureFamily::stieltjes(Complex z) const {
  if (!def_.stieltjes) throw Error(ErrorKind::CapabilityMissing, def_.name + " has no Stieltjes transform");
  if (def_.support.distance(z) < 1e-12) {
    std::ostringstream msg;
    msg << def_.name << ": z = " << z << " lies on the support";
    throw Error(ErrorKind::OnSupport, msg.str());
  }
  return def_.stieltjes(z);
}

namespace {

Complex log1p_complex(Complex w) {
  if (std::abs(w) < 0.5) {
    Complex term = w, sum = w;
    for (int k = 2; k < 200; ++k) {
      term *= -w;
      const Complex add = term / static_cast<double>(k);
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::log(1.0 + w);
}

// 2 (z - sqrt(z^2 - 1)) written as 2 / (z + sqrt(z - 1) sqrt(z + 1)); the
// product of principal roots has its cut on [-1, 1] and grows like z.
Complex chebyshev2_stieltjes(Complex z) {
  return 2.0 / (z + std::sqrt(z - 1.0) * std::sqrt(z + 1.0));
}

FamilyDefinition lebesgue01() {
  FamilyDefinition d;
  d.name = "lebesgue01";
  d.support = Interval::compact(0.0, 1.0);
  d.recurrence = [](int n) {
    const double m = n;
    return RecurrenceCoeffs{0.5, (m + 1.0) / (2.0 * std::sqrt((2.0 * m + 1.0) * (2.0 * m + 3.0)))};
  };
  d.density = [](double) { return 1.0; };
  d.reducer = [](double x) { return 2.0 * std::log(x / (1.0 - x)); };
  d.stieltjes = [](Complex z) {
    if (std::abs(z) > 2.0) return -log1p_complex(-1.0 / z);
    return std::log(z) - std::log(z - 1.0);
  };
  return d;
}

FamilyDefinition exponential() {
  FamilyDefinition d;
  d.name = "exponential";
  d.support = Interval::half_line(0.0);
  d.recurrence = [](int n) { return RecurrenceCoeffs{2.0 * n + 1.0, n + 1.0}; };
  d.density = [](double x) { return std::exp(-x); };
  d.reducer = [](double x) { return 2.0 * special::exp_ei(x); };
  // S(z) = -e^{-z} E1(-z).
  d.stieltjes = [](Complex z) { return -special::exp_e1(-z); };
  return d;
}

FamilyDefinition gaussian() {
  FamilyDefinition d;
  d.name = "gaussian";
  d.support = Interval::real_line();
  d.recurrence = [](int n) { return RecurrenceCoeffs{0.0, std::sqrt(n + 1.0)}; };
  d.density = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); };
  // phi/2 = sqrt(pi/2) e^{-x^2/2} erfi(x/sqrt 2) = sqrt(2) F(x/sqrt 2).
  d.reducer = [](double x) { return 2.0 * std::sqrt(2.0) * special::dawson(x / std::sqrt(2.0)); };
  // S(z) = -i sqrt(pi/2) w(z / sqrt 2) in the upper half plane.
  d.stieltjes = [](Complex z) {
    const bool lower = z.imag() < 0.0;
    const Complex zu = lower ? std::conj(z) : z;
    const Complex s = Complex(0.0, -std::sqrt(0.5 * kPi)) * special::faddeeva(zu / std::sqrt(2.0));
    return lower ? std::conj(s) : s;
  };
  return d;
}

FamilyDefinition chebyshev2() {
  FamilyDefinition d;
  d.name = "chebyshev2";
  d.support = Interval::compact(-1.0, 1.0);
  d.recurrence = [](int) { return RecurrenceCoeffs{0.0, 0.5}; };
  d.density = [](double x) { return 2.0 / kPi * std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x))); };
  d.reducer = [](double x) { return 4.0 * x; };
  d.stieltjes = chebyshev2_stieltjes;
  return d;
}

// Image of chebyshev2 under x -> (1 + x) / 2: P_n(x) = U_n(2x - 1), a_n = 4^n.
FamilyDefinition chebyshev2_01() {
  FamilyDefinition d;
  d.name = "chebyshev2_01";
  d.support = Interval::compact(0.0, 1.0);
  d.recurrence = [](int) { return RecurrenceCoeffs{0.5, 0.25}; };
  d.density = [](double x) { return 8.0 / kPi * std::sqrt(std::max(0.0, x * (1.0 - x))); };
  d.reducer = [](double x) { return 8.0 * (2.0 * x - 1.0); };
  d.stieltjes = [](Complex z) { return 2.0 * chebyshev2_stieltjes(2.0 * z - 1.0); };
  return d;
}

Complex far_point(const Interval& s) {
  switch (s.kind) {
    case SupportKind::Compact: return {0.5 * (s.lower + s.upper) + 1e6, 0.0};
    case SupportKind::HalfLine: return {s.lower - 1e6, 0.0};
    case SupportKind::RealLine: return {0.0, 1e6};
  }
  return {0.0, 1e6};
}

Complex near_point(const Interval& s) {
  const double centre = s.kind == SupportKind::Compact ? 0.5 * (s.lower + s.upper)
                        : s.kind == SupportKind::HalfLine ? s.lower + 1.0
                                                          : 0.0;
  return {centre + 0.3, 0.7};
}

}  // namespace

std::vector<std::string> builtin_family_names() {
  return {"lebesgue01", "exponential", "gaussian", "chebyshev2", "chebyshev2_01"};
}

MeasureFamily get_family(const std::string& name, int max_index) {
  FamilyDefinition def;
  if (name == "lebesgue01") def = lebesgue01();
  else if (name == "exponential") def = exponential();
  else if (name == "gaussian") def = gaussian();
  else if (name == "chebyshev2") def = chebyshev2();
  else if (name == "chebyshev2_01") def = chebyshev2_01();
  else throw Error(ErrorKind::UnknownFamily, "no built-in family named '" + name + "'");
  def.max_index = max_index;
  MeasureFamily family(std::move(def));
  verify_family_invariants(family);
  return family;
}

void verify_family_invariants(const MeasureFamily& family) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::InvalidArgument, family.name() + ": " + what);
  };
  for (int n = 0; n <= family.max_index(); ++n)
    if (!(family.recurrence(n).t > 0.0)) fail("t_" + std::to_string(n) + " is not positive");

  if (family.has_density()) {
    const auto mass = integrate([&](double x) { return family.density(x); }, family.support(), 1e-13);
    const double tol = family.support().bounded() ? 1e-10 : 1e-8;
    if (std::abs(mass.value - 1.0) > tol) {
      std::ostringstream msg;
      msg << "density integrates to " << mass.value;
      fail(msg.str());
    }
  }
  if (family.has_stieltjes()) {
    const Complex z = near_point(family.support());
    const Complex a = family.stieltjes(z), b = family.stieltjes(std::conj(z));
    if (std::abs(a - std::conj(b)) > 1e-12 * (1.0 + std::abs(a))) fail("S(conj z) != conj S(z)");
    const Complex far = far_point(family.support());
    if (std::abs(far * family.stieltjes(far) - 1.0) > 1e-5) fail("z S(z) does not tend to 1");
  }
}

MeasureFamily parse_custom_family(std::istream& in) {
  auto parse_error = [](int line, const std::string& what) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
  };
  std::string name;
  std::optional<Interval> support;
  RecurrenceTable table;
  bool in_table = false;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = raw.substr(0, hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (in_table) {
      RecurrenceCoeffs row;
      std::istringstream rs(line);
      std::string extra;
      if (!(rs >> row.s >> row.t) || (rs >> extra)) parse_error(line_no, "expected two numbers 's t'");
      table.push_back(row);
      continue;
    }
    if (first == "recurrence") {
      in_table = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_error(line_no, "expected 'key = value'");
    std::istringstream ks(line.substr(0, eq));
    std::string key;
    ks >> key;
    std::istringstream vs(line.substr(eq + 1));
    if (key == "name") {
      if (!(vs >> name)) parse_error(line_no, "empty name");
    } else if (key == "support") {
      std::string kind;
      vs >> kind;
      double a = 0, b = 0;
      if (kind == "compact") {
        if (!(vs >> a >> b) || !(a < b)) parse_error(line_no, "compact support needs a < b");
        support = Interval::compact(a, b);
      } else if (kind == "halfline") {
        if (!(vs >> a)) parse_error(line_no, "halfline support needs a lower endpoint");
        support = Interval::half_line(a);
      } else if (kind == "realline") {
        support = Interval::real_line();
      } else {
        parse_error(line_no, "unknown support kind '" + kind + "'");
      }
    } else {
      parse_error(line_no, "unknown key '" + key + "'");
    }
  }
  if (name.empty()) parse_error(line_no, "missing 'name'");
  if (!support) parse_error(line_no, "missing 'support'");
  if (table.size() < 2) parse_error(line_no, "recurrence table needs at least two rows");

  FamilyDefinition def;
  def.name = name;
  def.support = *support;
  def.max_index = static_cast<int>(table.size()) - 1;
  def.recurrence = [table](int n) { return table[static_cast<std::size_t>(n)]; };
  MeasureFamily family(std::move(def));
  verify_family_invariants(family);
  return family;
}

MeasureFamily load_custom_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open family file '" + path + "'");
  return parse_custom_family(in);
}

void FamilyCatalog::add(MeasureFamily family) {
  const auto builtins = builtin_family_names();
  if (std::find(builtins.begin(), builtins.end(), family.name()) != builtins.end())
    throw Error(ErrorKind::InvalidArgument, "custom family may not shadow built-in '" + family.name() + "'");
  const std::string key = family.name();
  custom_.insert_or_assign(key, std::move(family));
}

MeasureFamily FamilyCatalog::get(const std::string& name) const {
  if (auto it = custom_.find(name); it != custom_.end()) return it->second;
  return get_family(name);
}

std::vector<std::string> FamilyCatalog::names() const {
  auto out = builtin_family_names();
  for (const auto& [name, family] : custom_) out.push_back(name);
  return out;
}

std::vector<double> jacobi_moments(std::span<const RecurrenceCoeffs> recurrence, int count) {
  if (count <= 0) return {};
  const int dim = count / 2 + 1;
  if (static_cast<int>(recurrence.size()) < dim)
    throw Error(ErrorKind::IndexOutOfRange, "jacobi_moments needs " + std::to_string(dim) + " recurrence rows");
  // powers[j] = J^j e_0, truncated to `dim` entries (exact for j < dim).
  std::vector<std::vector<double>> powers;
  std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
  v[0] = 1.0;
  powers.push_back(v);
  const int needed = count / 2;  // ceil((count - 1) / 2)
  for (int j = 1; j <= needed; ++j) {
    std::vector<double> w(static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < dim; ++i) {
      double acc = recurrence[i].s * v[i];
      if (i > 0) acc += recurrence[i - 1].t * v[i - 1];
      if (i + 1 < dim) acc += recurrence[i].t * v[i + 1];
      w[i] = acc;
    }
    v = w;
    powers.push_back(v);
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const auto& a = powers[static_cast<std::size_t>(k / 2)];
    const auto& b = powers[static_cast<std::size_t>(k - k / 2)];
    double acc = 0.0;
    for (int i = 0; i < dim; ++i) acc += a[i] * b[i];
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

double moment(const MeasureFamily& family, int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "moment order must be nonnegative");
  const auto table = family.recurrence_table((k + 1) / 2 + 1);
  return jacobi_moments(table, k + 1).back();
}

double d0(const MeasureFamily& family) {
  const auto table = family.recurrence_table(2);
  const auto m = jacobi_moments(table, 3);
  return m[2] - m[1] * m[1];
}

double eval_reducer(const MeasureFamily& family, double x) { return family.reducer(x); }

Complex eval_stieltjes(const MeasureFamily& family, Complex z) { return family.stieltjes(z); }

}  // namespace secmeas
