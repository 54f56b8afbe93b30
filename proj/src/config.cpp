#include "hessquot/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace hessquot {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_real(const std::string& v, const std::string& key, int line) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) {
    std::ostringstream msg;
    msg << "line " << line << ": key '" << key << "' expects a real number, got '"
        << v << "'";
    throw ConfigError(msg.str());
  }
  return x;
}

long parse_int(const std::string& v, const std::string& key, int line) {
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) {
    std::ostringstream msg;
    msg << "line " << line << ": key '" << key << "' expects an integer, got '"
        << v << "'";
    throw ConfigError(msg.str());
  }
  return x;
}

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_reals(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt_real(v[i]);
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

const char* profile_name(RHSSpec::Profile p) {
  switch (p) {
    case RHSSpec::Profile::Constant: return "constant";
    case RHSSpec::Profile::RadialGaussian: return "radial_gaussian";
    case RHSSpec::Profile::CosineProduct: return "cosine_product";
    case RHSSpec::Profile::Tabulated: return "tabulated";
  }
  return "constant";
}

const char* norm_name(ProbeConfig::HessNorm n) {
  switch (n) {
    case ProbeConfig::HessNorm::Spectral: return "spectral";
    case ProbeConfig::HessNorm::LambdaMax: return "lambda_max";
    case ProbeConfig::HessNorm::Frobenius: return "frobenius";
  }
  return "spectral";
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::map<std::string, int> seen;  // key -> first line

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash_pos = raw.find('#');
    if (hash_pos != std::string::npos) raw = raw.substr(0, hash_pos);
    const std::string s = trim(raw);
    if (s.empty()) continue;

    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << origin << " line " << line << ": expected 'section.key = value'";
      throw ConfigError(msg.str());
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (auto it = seen.find(key); it != seen.end()) {
      std::ostringstream msg;
      msg << origin << " line " << line << ": key '" << key
          << "' already set on line " << it->second;
      throw ConfigError(msg.str());
    }
    seen[key] = line;

    auto reals = [&]() {
      std::vector<double> out;
      for (const auto& tok : split_list(val)) out.push_back(parse_real(tok, key, line));
      return out;
    };
    auto ints = [&]() {
      std::vector<int> out;
      for (const auto& tok : split_list(val))
        out.push_back(static_cast<int>(parse_int(tok, key, line)));
      return out;
    };

    if (key == "quotient.n") cfg.quotient.n = static_cast<int>(parse_int(val, key, line));
    else if (key == "quotient.k") cfg.quotient.k = static_cast<int>(parse_int(val, key, line));
    else if (key == "quotient.l") cfg.quotient.l = static_cast<int>(parse_int(val, key, line));
    else if (key == "quotient.tau") cfg.quotient.tau = parse_real(val, key, line);
    else if (key == "domain.angle_min") cfg.angle_min = reals();
    else if (key == "domain.angle_max") cfg.angle_max = reals();
    else if (key == "domain.r_min") cfg.r_min = parse_real(val, key, line);
    else if (key == "domain.r_max") cfg.r_max = parse_real(val, key, line);
    else if (key == "grid.nodes") cfg.grid_nodes = ints();
    else if (key == "rhs.amplitude") cfg.rhs.amplitude = parse_real(val, key, line);
    else if (key == "rhs.profile") {
      if (val == "constant") cfg.rhs.profile = RHSSpec::Profile::Constant;
      else if (val == "radial_gaussian") cfg.rhs.profile = RHSSpec::Profile::RadialGaussian;
      else if (val == "cosine_product") cfg.rhs.profile = RHSSpec::Profile::CosineProduct;
      else {
        std::ostringstream msg;
        msg << origin << " line " << line << ": rhs.profile must be one of "
            << "constant, radial_gaussian, cosine_product";
        throw ConfigError(msg.str());
      }
    }
    else if (key == "rhs.mu") cfg.rhs.mu = parse_real(val, key, line);
    else if (key == "rhs.s") cfg.rhs.s = parse_real(val, key, line);
    else if (key == "rhs.center") cfg.rhs.center = parse_real(val, key, line);
    else if (key == "rhs.width") cfg.rhs.width = parse_real(val, key, line);
    else if (key == "rhs.eps") cfg.rhs.eps = parse_real(val, key, line);
    else if (key == "rhs.freq") cfg.rhs.freq = parse_real(val, key, line);
    else if (key == "solve.continuation_steps")
      cfg.continuation_steps = static_cast<int>(parse_int(val, key, line));
    else if (key == "solve.newton_tol") cfg.newton_tol = parse_real(val, key, line);
    else if (key == "solve.max_iterations")
      cfg.max_iterations = static_cast<int>(parse_int(val, key, line));
    else if (key == "solve.backtrack_factor")
      cfg.backtrack_factor = parse_real(val, key, line);
    else if (key == "solve.cone_margin") cfg.cone_margin = parse_real(val, key, line);
    else if (key == "solve.linear_tol") cfg.linear_tol = parse_real(val, key, line);
    else if (key == "probe.beta") cfg.probe.beta = parse_real(val, key, line);
    else if (key == "probe.a") cfg.probe.a = parse_real(val, key, line);
    else if (key == "probe.A") cfg.probe.A = parse_real(val, key, line);
    else if (key == "probe.norm") {
      if (val == "spectral") cfg.probe.norm = ProbeConfig::HessNorm::Spectral;
      else if (val == "lambda_max") cfg.probe.norm = ProbeConfig::HessNorm::LambdaMax;
      else if (val == "frobenius") cfg.probe.norm = ProbeConfig::HessNorm::Frobenius;
      else {
        std::ostringstream msg;
        msg << origin << " line " << line
            << ": probe.norm must be one of spectral, lambda_max, frobenius";
        throw ConfigError(msg.str());
      }
    }
    else if (key == "sweep.betas") cfg.sweep_betas = reals();
    else if (key == "sweep.amplitudes") cfg.sweep_amplitudes = reals();
    else if (key == "sweep.refinements") cfg.sweep_refinements = ints();
    else {
      std::ostringstream msg;
      msg << origin << " line " << line << ": unknown key '" << key << "'";
      throw ConfigError(msg.str());
    }
  }

  cfg.validate();
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

void RunConfig::validate() {
  notices.clear();
  quotient.validate();
  if (!quotient.theorem_regime()) {
    std::ostringstream note;
    note << "notice: k = " << quotient.k << ", l = " << quotient.l
         << " is a valid elliptic operator but the interior-estimate regime "
            "needs k >= l+2";
    notices.push_back(note.str());
  }

  const int n = quotient.n;
  auto broadcast_reals = [&](std::vector<double>& v, int len, const char* key) {
    if (static_cast<int>(v.size()) == 1 && len > 1) v.assign(len, v[0]);
    if (static_cast<int>(v.size()) != len) {
      std::ostringstream msg;
      msg << key << " needs " << len << " entries for n = " << n << ", got "
          << v.size();
      throw ConfigError(msg.str());
    }
  };
  broadcast_reals(angle_min, n - 1, "domain.angle_min");
  broadcast_reals(angle_max, n - 1, "domain.angle_max");
  for (int a = 0; a < n - 1; ++a)
    if (!(angle_min[a] < angle_max[a]))
      throw ConfigError("domain.angle_min must be below domain.angle_max");
  if (!(r_min > 0.0)) throw ConfigError("domain.r_min must be > 0 (pole excluded)");
  if (!(r_max > r_min)) throw ConfigError("domain.r_max must exceed domain.r_min");

  if (static_cast<int>(grid_nodes.size()) == 1 && n > 1)
    grid_nodes.assign(n, grid_nodes[0]);
  if (static_cast<int>(grid_nodes.size()) != n)
    throw ConfigError("grid.nodes needs one entry per axis (or a single count)");
  for (int v : grid_nodes)
    if (v < 5) throw ConfigError("grid.nodes entries must be >= 5");

  if (rhs.profile == RHSSpec::Profile::Tabulated)
    throw ConfigError("rhs.profile 'tabulated' is not a config-level profile");
  rhs.validate();

  if (continuation_steps < 1) throw ConfigError("solve.continuation_steps must be >= 1");
  if (!(newton_tol > 0.0)) throw ConfigError("solve.newton_tol must be > 0");
  if (max_iterations < 1) throw ConfigError("solve.max_iterations must be >= 1");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw ConfigError("solve.backtrack_factor must lie in (0,1)");
  if (!(cone_margin > 0.0)) throw ConfigError("solve.cone_margin must be > 0");
  if (!(linear_tol > 0.0)) throw ConfigError("solve.linear_tol must be > 0");

  probe.validate();

  if (sweep_betas.empty() || sweep_amplitudes.empty() || sweep_refinements.empty())
    throw ConfigError("sweep lists must not be empty");
  for (double b : sweep_betas)
    if (!(b > 0.0)) throw ConfigError("sweep.betas must be positive");
  for (double a : sweep_amplitudes)
    if (!(a > 0.0)) throw ConfigError("sweep.amplitudes must be positive");
  for (int r : sweep_refinements)
    if (r < 5) throw ConfigError("sweep.refinements entries must be >= 5");

  make_grid();  // box admissibility (chart degeneracy, pole exclusion)
}

std::shared_ptr<const Grid> RunConfig::make_grid() const {
  std::array<int, kMaxChartDim> nn{};
  for (int a = 0; a < quotient.n; ++a) nn[a] = grid_nodes[a];
  PolarChart chart{quotient.n, r_min};
  std::array<double, kMaxChartDim> lo{}, hi{};
  for (int a = 0; a < quotient.n - 1; ++a) {
    lo[a] = angle_min[a];
    hi[a] = angle_max[a];
  }
  lo[quotient.n - 1] = r_min;
  hi[quotient.n - 1] = r_max;
  return std::make_shared<const Grid>(Grid::make(chart, lo, hi, nn));
}

std::shared_ptr<const Grid> RunConfig::make_grid(int nodes_per_axis) const {
  RunConfig c = *this;
  c.grid_nodes.assign(quotient.n, nodes_per_axis);
  return c.make_grid();
}

SolveConfig RunConfig::make_solve_config() const {
  SolveConfig sc;
  sc.spec = quotient;
  sc.grid = make_grid();
  sc.rhs = rhs;
  sc.continuation_steps = continuation_steps;
  sc.newton_tol = newton_tol;
  sc.max_iterations = max_iterations;
  sc.backtrack_factor = backtrack_factor;
  sc.cone_margin = cone_margin;
  sc.linear_tol = linear_tol;
  return sc;
}

std::string RunConfig::canonical_text() const {
  std::ostringstream os;
  os << "quotient.n = " << quotient.n << "\n";
  os << "quotient.k = " << quotient.k << "\n";
  os << "quotient.l = " << quotient.l << "\n";
  os << "quotient.tau = " << fmt_real(quotient.tau) << "\n";
  os << "domain.angle_min = " << join_reals(angle_min) << "\n";
  os << "domain.angle_max = " << join_reals(angle_max) << "\n";
  os << "domain.r_min = " << fmt_real(r_min) << "\n";
  os << "domain.r_max = " << fmt_real(r_max) << "\n";
  os << "grid.nodes = " << join_ints(grid_nodes) << "\n";
  os << "rhs.amplitude = " << fmt_real(rhs.amplitude) << "\n";
  os << "rhs.profile = " << profile_name(rhs.profile) << "\n";
  os << "rhs.mu = " << fmt_real(rhs.mu) << "\n";
  os << "rhs.s = " << fmt_real(rhs.s) << "\n";
  os << "rhs.center = " << fmt_real(rhs.center) << "\n";
  os << "rhs.width = " << fmt_real(rhs.width) << "\n";
  os << "rhs.eps = " << fmt_real(rhs.eps) << "\n";
  os << "rhs.freq = " << fmt_real(rhs.freq) << "\n";
  os << "solve.continuation_steps = " << continuation_steps << "\n";
  os << "solve.newton_tol = " << fmt_real(newton_tol) << "\n";
  os << "solve.max_iterations = " << max_iterations << "\n";
  os << "solve.backtrack_factor = " << fmt_real(backtrack_factor) << "\n";
  os << "solve.cone_margin = " << fmt_real(cone_margin) << "\n";
  os << "solve.linear_tol = " << fmt_real(linear_tol) << "\n";
  os << "probe.beta = " << fmt_real(probe.beta) << "\n";
  os << "probe.a = " << fmt_real(probe.a) << "\n";
  os << "probe.A = " << fmt_real(probe.A) << "\n";
  os << "probe.norm = " << norm_name(probe.norm) << "\n";
  os << "sweep.betas = " << join_reals(sweep_betas) << "\n";
  os << "sweep.amplitudes = " << join_reals(sweep_amplitudes) << "\n";
  os << "sweep.refinements = " << join_ints(sweep_refinements) << "\n";
  return os.str();
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string config_hash_hex(const RunConfig& config) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(config.canonical_text())));
  return buf;
}

}  // namespace hessquot
