#include "bcslab/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "bcslab/error.hpp"

namespace bcslab {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail_line(int line_no, const std::string& what) {
  std::ostringstream ss;
  ss << "config line " << line_no << ": " << what;
  fail(ErrorKind::config, ss.str());
}

double parse_double(const std::string& key, const std::string& value, int line_no) {
  errno = 0;
  const char* c = value.c_str();
  char* end = nullptr;
  const double v = std::strtod(c, &end);
  if (end == c || *end != '\0')
    fail_line(line_no, "value '" + value + "' for key '" + key + "' is not a number");
  if (!std::isfinite(v))
    fail_line(line_no, "value for key '" + key + "' is not finite");
  return v;
}

int parse_int(const std::string& key, const std::string& value, int line_no) {
  errno = 0;
  const char* c = value.c_str();
  char* end = nullptr;
  const long v = std::strtol(c, &end, 10);
  if (end == c || *end != '\0' || errno == ERANGE)
    fail_line(line_no, "value '" + value + "' for key '" + key + "' is not an integer");
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& value, int line_no) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(value);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail_line(line_no, "empty entry in list for key '" + key + "'");
    out.push_back(parse_double(key, item, line_no));
  }
  if (out.empty()) fail_line(line_no, "empty list for key '" + key + "'");
  return out;
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

[[noreturn]] void fail_key(const std::string& key, const std::string& what) {
  fail(ErrorKind::config, "config key '" + key + "': " + what);
}

void validate(const RunConfig& c) {
  const std::string& k = c.potential_kind;
  if (k != "square_well" && k != "gaussian" && k != "exponential" && k != "tabulated")
    fail_key("kind", "'" + k + "' is not one of square_well, gaussian, exponential, tabulated");
  if (k == "tabulated" && c.potential_file.empty())
    fail_key("file", "kind = tabulated requires a potential file path");
  if (!(c.depth > 0.0)) fail_key("depth", "must be positive (wells are attractive)");
  if (!(c.radius > 0.0)) fail_key("radius", "must be positive");
  if (!(c.width > 0.0)) fail_key("width", "must be positive");
  if (!(c.range > 0.0)) fail_key("range", "must be positive");

  if (c.n < 16) {
    std::ostringstream ss;
    ss << "n = " << c.n << " is not a valid grid size (need an integer >= 16)";
    fail(ErrorKind::config, "config key 'n': " + ss.str());
  }
  if (!(c.r_max >= 0.0)) fail_key("r_max", "must be >= 0 (0 selects the automatic extent)");
  if (!(c.p_max > 0.0)) fail_key("p_max", "must be positive");
  if (!(c.window_factor > 0.0)) fail_key("window_factor", "must be positive");
  if (!(c.quality >= 1.0)) fail_key("quality", "must be >= 1");

  if (!(c.mu > 0.0)) fail_key("mu", "must be positive");
  if (!(c.T > 0.0)) fail_key("T", "must be positive");
  for (size_t i = 0; i < c.mu_list.size(); ++i) {
    if (!(c.mu_list[i] > 0.0)) fail_key("mu_list", "every entry must be positive");
    if (i > 0 && !(c.mu_list[i] < c.mu_list[i - 1]))
      fail_key("mu_list", "entries must be strictly decreasing");
  }
  for (double t : c.t_list)
    if (!(t > 0.0)) fail_key("t_list", "every entry must be positive");

  if (!(c.tail > 0.0)) fail_key("tail", "must be positive");
  if (!(c.t_floor_rel > 0.0 && c.t_floor_rel < 1.0)) fail_key("t_floor_rel", "must lie in (0, 1)");
}

} // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  cfg.config_hash = fnv1a_hex(text);

  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::set<std::pair<std::string, std::string>> seen;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail_line(line_no, "unterminated section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "potential" && section != "grid" && section != "run" &&
          section != "tolerances" && section != "output")
        fail_line(line_no, "unknown section [" + section + "]");
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail_line(line_no, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail_line(line_no, "missing key before '='");
    if (value.empty()) fail_line(line_no, "missing value for key '" + key + "'");
    if (section.empty()) fail_line(line_no, "key '" + key + "' appears before any [section]");
    if (!seen.insert({section, key}).second)
      fail_line(line_no, "duplicate key '" + key + "' in [" + section + "]");

    bool known = true;
    if (section == "potential") {
      if (key == "kind") cfg.potential_kind = value;
      else if (key == "depth") cfg.depth = parse_double(key, value, line_no);
      else if (key == "radius") cfg.radius = parse_double(key, value, line_no);
      else if (key == "width") cfg.width = parse_double(key, value, line_no);
      else if (key == "range") cfg.range = parse_double(key, value, line_no);
      else if (key == "file") cfg.potential_file = value;
      else known = false;
    } else if (section == "grid") {
      if (key == "n") cfg.n = parse_int(key, value, line_no);
      else if (key == "r_max") cfg.r_max = parse_double(key, value, line_no);
      else if (key == "p_max") cfg.p_max = parse_double(key, value, line_no);
      else if (key == "window_factor") cfg.window_factor = parse_double(key, value, line_no);
      else if (key == "quality") cfg.quality = parse_double(key, value, line_no);
      else known = false;
    } else if (section == "run") {
      if (key == "mu") cfg.mu = parse_double(key, value, line_no);
      else if (key == "T") cfg.T = parse_double(key, value, line_no);
      else if (key == "mu_list") cfg.mu_list = parse_list(key, value, line_no);
      else if (key == "t_list") cfg.t_list = parse_list(key, value, line_no);
      else if (key == "delta0") cfg.delta0 = parse_double(key, value, line_no);
      else known = false;
    } else if (section == "tolerances") {
      if (key == "tail") cfg.tail = parse_double(key, value, line_no);
      else if (key == "t_floor_rel") cfg.t_floor_rel = parse_double(key, value, line_no);
      else known = false;
    } else { // output
      if (key == "path") cfg.out_path = value;
      else known = false;
    }
    if (!known) fail_line(line_no, "unknown key '" + key + "' in [" + section + "]");
  }

  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorKind::io, "error while reading config file '" + path + "'");
  return parse_config(ss.str());
}

GridSpec RunConfig::grid_spec() const {
  GridSpec s;
  s.n_radial = n;
  s.r_max_override = r_max;
  s.tail_tol = tail;
  const double xi = 25.0 * window_factor;
  s.bt.p_max = p_max;
  s.bt.xi_inner = xi;
  s.bt.quality = quality;
  s.a_kernel.p_max = p_max * 7.0 / 6.0;
  s.a_kernel.xi_inner = xi;
  s.a_kernel.quality = 1.5 * quality;
  s.op.p_max = p_max * 5.0 / 6.0;
  s.op.xi_inner = xi;
  s.op.quality = quality;
  return s;
}

Potential RunConfig::make_potential() const {
  if (potential_kind == "square_well") return Potential::square_well(depth, radius);
  if (potential_kind == "gaussian") return Potential::gaussian(depth, width);
  if (potential_kind == "exponential") return Potential::exponential(depth, range);
  return Potential::tabulated_from_file(potential_file);
}

} // namespace bcslab
