#include "weylab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "weylab/csv.hpp"

namespace weylab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw PreconditionError(what + ": bad number '" + s + "'");
  }
  if (used != s.size()) throw PreconditionError(what + ": bad number '" + s + "'");
  return v;
}

std::vector<double> numbers(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(number(p, what));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_number(v[i]);
  return out;
}

}  // namespace

GeometryModel parse_geometry(const std::string& raw) {
  const auto text = trim(raw);
  if (text == "line") return GeometryModel::line();
  if (text == "cylinder") return GeometryModel::cylinder();
  if (text == "h3" || text == "hyperbolic3") return GeometryModel::hyperbolic3();
  if (text.rfind("euclidean:", 0) == 0) {
    const double n = number(text.substr(10), "geometry");
    if (n != std::floor(n) || n < 1) throw PreconditionError("geometry: dimension must be a positive integer");
    return GeometryModel::euclidean(int(n));
  }
  throw PreconditionError("geometry: unknown model '" + text + "'");
}

PotentialModel parse_potential(const std::string& raw, double floor) {
  const auto text = trim(raw);
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw PreconditionError("potential: expected family:args");
  const auto family = text.substr(0, colon);
  const auto args = text.substr(colon + 1);
  if (family == "power") {
    const auto v = numbers(args, "potential");
    if (v.size() != 1) throw PreconditionError("power needs one exponent");
    return PotentialModel::power(v[0], floor);
  }
  if (family == "logpower" || family == "logpow") {
    std::string list = args;
    std::replace(list.begin(), list.end(), ':', ',');
    const auto v = numbers(list, "potential");
    if (v.size() != 2) throw PreconditionError("logpower needs c,alpha");
    return PotentialModel::log_power(v[0], v[1], floor);
  }
  if (family == "iterlog") {
    const double d = number(args, "potential");
    if (d != std::floor(d) || d < 1) throw PreconditionError("iterlog depth must be a positive integer");
    return PotentialModel::iterated_log(int(d), floor);
  }
  if (family == "piecewise") return PotentialModel::piecewise_from_file(args, floor);
  throw PreconditionError("potential: unknown family '" + family + "'");
}

std::vector<double> parse_grid(const std::string& raw) {
  const auto text = trim(raw);
  auto ranged = [&](bool geometric) {
    const auto v = numbers(text.substr(text.find(':') + 1), "grid");
    if (v.size() != 3 || v[2] < 2 || v[2] != std::floor(v[2]))
      throw PreconditionError("grid: need lo,hi,n with integer n >= 2");
    if (geometric && !(v[0] > 0.0)) throw PreconditionError("grid: geometric grid needs lo > 0");
    const int n = int(v[2]);
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
      const double f = double(i) / (n - 1);
      out.push_back(geometric ? v[0] * std::pow(v[1] / v[0], f) : v[0] + f * (v[1] - v[0]));
    }
    out.back() = v[1];
    return out;
  };
  if (text.rfind("arith:", 0) == 0) return ranged(false);
  if (text.rfind("geom:", 0) == 0) return ranged(true);
  if (text.find(':') != std::string::npos) {
    // lo:hi:step
    std::string list = text;
    std::replace(list.begin(), list.end(), ':', ',');
    const auto v = numbers(list, "grid");
    if (v.size() != 3 || !(v[2] > 0.0) || !(v[1] >= v[0]))
      throw PreconditionError("grid: need lo:hi:step with step > 0");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((v[1] - v[0]) / v[2] + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(v[0] + double(i) * v[2]);
    return out;
  }
  return numbers(text, "grid");
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw PreconditionError("config line " + std::to_string(lineno) + ": expected key=value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "geometry") {
      c.geometry = value;
    } else if (key == "potential") {
      c.potential = value;
    } else if (key == "potential_floor") {
      c.potential_floor = number(value, key);
    } else if (key == "delta") {
      c.delta = number(value, key);
    } else if (key == "lambda_grid") {
      c.lambda_grid = parse_grid(value);
    } else if (key == "criterion_grid") {
      c.criterion_grid = parse_grid(value);
    } else if (key == "mesh") {
      const auto v = numbers(value, key);
      if (v.size() < 2 || v.size() > 3) throw PreconditionError("mesh: need h_initial,rounds[,rel_tol]");
      c.mesh.h_initial = v[0];
      c.mesh.refinement_rounds = int(v[1]);
      if (v.size() == 3) c.mesh.rel_tol = v[2];
    } else if (key == "expect") {
      if (value == "satisfied") c.expect = Expectation::Satisfied;
      else if (value == "fails") c.expect = Expectation::Fails;
      else if (value == "none") c.expect = Expectation::None;
      else throw PreconditionError("expect: satisfied, fails or none");
    } else if (key == "output") {
      c.output = value;
    } else {
      throw PreconditionError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ExperimentConfig::validate() const {
  auto increasing = [](const std::vector<double>& g, const char* what) {
    if (g.empty()) throw PreconditionError(std::string(what) + ": empty grid");
    for (std::size_t i = 1; i < g.size(); ++i)
      if (!(g[i] > g[i - 1])) throw PreconditionError(std::string(what) + ": grid must be strictly increasing");
  };
  increasing(lambda_grid, "lambda_grid");
  increasing(criterion_grid, "criterion_grid");
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("delta must lie in (0, 1)");
  if (!(mesh.h_initial > 0.0)) throw PreconditionError("mesh: h_initial must be positive");
  mesh.validate();
  (void)geometry_model();
  (void)potential_model();
}

GeometryModel ExperimentConfig::geometry_model() const { return parse_geometry(geometry); }
PotentialModel ExperimentConfig::potential_model() const {
  return parse_potential(potential, potential_floor);
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "geometry=" << trim(geometry) << '\n'
     << "potential=" << trim(potential) << '\n'
     << "potential_floor=" << format_number(potential_floor) << '\n'
     << "delta=" << format_number(delta) << '\n'
     << "lambda_grid=" << join(lambda_grid) << '\n'
     << "criterion_grid=" << join(criterion_grid) << '\n'
     << "mesh=" << format_number(mesh.h_initial) << ',' << mesh.refinement_rounds << ','
     << format_number(mesh.rel_tol) << '\n'
     << "expect="
     << (expect == Expectation::Satisfied ? "satisfied" : expect == Expectation::Fails ? "fails" : "none")
     << '\n';
  return os.str();
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(canonical()); }

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace weylab
