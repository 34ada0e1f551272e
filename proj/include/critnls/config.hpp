#ifndef CRITNLS_CONFIG_HPP
#define CRITNLS_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "critnls/errors.hpp"
#include "critnls/field.hpp"
#include "critnls/nonlinearity.hpp"

namespace critnls {

// One run configuration covers every subcommand; unused keys are ignored by
// the operations that do not need them. File syntax is one `key = value`
// per line, `#` comments, and `terms = [[mu, p], ...]` for the perturbation.
struct RunConfig {
  // problem
  int dimension = 5;
  double omega = 1.0;
  std::vector<MonomialTerm> terms = {{1.0, 2.0}};
  // variational grid
  int grid_n = 12288;
  double grid_rmax = 200.0;
  double grid_stretch = 3.0;  // 0 = uniform
  // evolution grid
  int evol_n = 8192;
  double evol_rmax = 100.0;
  // evolution run
  double dt = 1e-3;
  double t_end = 2.0;
  int sample_every = 10;
  bool include_critical = true;
  std::string psi0 = "gaussian";  // gaussian | ground_state | file
  double psi0_amplitude = 1e-3;
  double psi0_width = 1.0;
  double psi0_lambda = 0.8;  // for psi0 = ground_state: T_lambda Q
  std::string psi0_path;
  // solver tolerances
  double shoot_rmax = 0.0;  // 0 = auto (50/sqrt(omega))
  int shoot_max_bisect = 60;
  double tol_fixed_point = 1e-12;
  double cfl_bound = 1.0;
  // lambda scans; nonpositive bounds mean "center the window on lambda(u)"
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int n_lambda = 241;
  // trial families (bound-sweep)
  int trials = 16;
  // misc
  std::uint64_t seed = 12345;
  std::string out;

  NonlinearitySpec nonlinearity() const { return {dimension, terms}; }

  GridPtr variational_grid() const {
    return RadialGrid::graded(dimension, grid_n, grid_rmax, grid_stretch);
  }
  GridPtr evolution_grid() const {
    return RadialGrid::uniform(dimension, evol_n, evol_rmax);
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<MonomialTerm> parse_terms(const std::string& raw,
                                             const std::string& where) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s == "[]" || s.empty()) return {};
  if (s.size() < 4 || s.front() != '[' || s.back() != ']')
    throw Error(ErrorCode::ConfigParse, where + ": terms must be [[mu, p], ...]");
  std::vector<MonomialTerm> terms;
  std::size_t i = 1;
  while (i < s.size() - 1) {
    if (s[i] == ',') {
      ++i;
      continue;
    }
    if (s[i] != '[')
      throw Error(ErrorCode::ConfigParse, where + ": expected '[' in terms");
    const auto close = s.find(']', i);
    if (close == std::string::npos)
      throw Error(ErrorCode::ConfigParse, where + ": unclosed term");
    const std::string pair = s.substr(i + 1, close - i - 1);
    const auto comma = pair.find(',');
    if (comma == std::string::npos)
      throw Error(ErrorCode::ConfigParse, where + ": term needs two entries");
    try {
      terms.push_back({std::stod(pair.substr(0, comma)),
                       std::stod(pair.substr(comma + 1))});
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigParse, where + ": bad number in terms");
    }
    i = close + 1;
  }
  return terms;
}

}  // namespace detail

// Applies `key = value` assignments from the stream; unknown keys are errors
// so config typos surface immediately.
inline void apply_config_line(RunConfig& cfg, const std::string& key,
                              const std::string& value,
                              const std::string& where) {
  auto as_double = [&](const std::string& v) {
    try {
      return std::stod(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigParse,
                  where + ": bad number '" + v + "' for " + key);
    }
  };
  auto as_int = [&](const std::string& v) {
    return static_cast<int>(as_double(v));
  };
  auto as_bool = [&](const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw Error(ErrorCode::ConfigParse, where + ": bad bool for " + key);
  };

  if (key == "dimension") cfg.dimension = as_int(value);
  else if (key == "omega") cfg.omega = as_double(value);
  else if (key == "terms") cfg.terms = detail::parse_terms(value, where);
  else if (key == "grid_n") cfg.grid_n = as_int(value);
  else if (key == "grid_rmax") cfg.grid_rmax = as_double(value);
  else if (key == "grid_stretch") cfg.grid_stretch = as_double(value);
  else if (key == "evol_n") cfg.evol_n = as_int(value);
  else if (key == "evol_rmax") cfg.evol_rmax = as_double(value);
  else if (key == "dt") cfg.dt = as_double(value);
  else if (key == "t_end") cfg.t_end = as_double(value);
  else if (key == "sample_every") cfg.sample_every = as_int(value);
  else if (key == "include_critical") cfg.include_critical = as_bool(value);
  else if (key == "psi0") cfg.psi0 = value;
  else if (key == "psi0_amplitude") cfg.psi0_amplitude = as_double(value);
  else if (key == "psi0_width") cfg.psi0_width = as_double(value);
  else if (key == "psi0_lambda") cfg.psi0_lambda = as_double(value);
  else if (key == "psi0_path") cfg.psi0_path = value;
  else if (key == "shoot_rmax") cfg.shoot_rmax = as_double(value);
  else if (key == "shoot_max_bisect") cfg.shoot_max_bisect = as_int(value);
  else if (key == "tol_fixed_point") cfg.tol_fixed_point = as_double(value);
  else if (key == "cfl_bound") cfg.cfl_bound = as_double(value);
  else if (key == "lambda_min") cfg.lambda_min = as_double(value);
  else if (key == "lambda_max") cfg.lambda_max = as_double(value);
  else if (key == "n_lambda") cfg.n_lambda = as_int(value);
  else if (key == "trials") cfg.trials = as_int(value);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(as_double(value));
  else if (key == "out") cfg.out = value;
  else
    throw Error(ErrorCode::ConfigParse, where + ": unknown key '" + key + "'");
}

inline RunConfig parse_config(std::istream& in, const std::string& where) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigParse,
                  where + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    apply_config_line(cfg, key, value,
                      where + ":" + std::to_string(lineno));
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IOFailure, "cannot open config " + path);
  return parse_config(in, path);
}

// Full echo of a resolved config, for manifests and reproduction.
inline std::string config_echo(const RunConfig& cfg) {
  std::ostringstream os;
  os << "dimension = " << cfg.dimension << "\n";
  os << "omega = " << cfg.omega << "\n";
  os << "terms = [";
  for (std::size_t k = 0; k < cfg.terms.size(); ++k) {
    os << (k ? ", " : "") << "[" << cfg.terms[k].mu << ", " << cfg.terms[k].p
       << "]";
  }
  os << "]\n";
  os << "grid_n = " << cfg.grid_n << "\n";
  os << "grid_rmax = " << cfg.grid_rmax << "\n";
  os << "grid_stretch = " << cfg.grid_stretch << "\n";
  os << "evol_n = " << cfg.evol_n << "\n";
  os << "evol_rmax = " << cfg.evol_rmax << "\n";
  os << "dt = " << cfg.dt << "\n";
  os << "t_end = " << cfg.t_end << "\n";
  os << "sample_every = " << cfg.sample_every << "\n";
  os << "include_critical = " << (cfg.include_critical ? "true" : "false")
     << "\n";
  os << "psi0 = " << cfg.psi0 << "\n";
  os << "psi0_amplitude = " << cfg.psi0_amplitude << "\n";
  os << "psi0_width = " << cfg.psi0_width << "\n";
  os << "psi0_lambda = " << cfg.psi0_lambda << "\n";
  os << "psi0_path = " << cfg.psi0_path << "\n";
  os << "shoot_rmax = " << cfg.shoot_rmax << "\n";
  os << "shoot_max_bisect = " << cfg.shoot_max_bisect << "\n";
  os << "tol_fixed_point = " << cfg.tol_fixed_point << "\n";
  os << "cfl_bound = " << cfg.cfl_bound << "\n";
  os << "lambda_min = " << cfg.lambda_min << "\n";
  os << "lambda_max = " << cfg.lambda_max << "\n";
  os << "n_lambda = " << cfg.n_lambda << "\n";
  os << "trials = " << cfg.trials << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "out = " << cfg.out << "\n";
  return os.str();
}

}  // namespace critnls

#endif  // CRITNLS_CONFIG_HPP
