#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "xxtsi/analysis.hpp"
#include "xxtsi/error.hpp"
#include "xxtsi/observables.hpp"
#include "xxtsi/oracle.hpp"

namespace xxtsi::cli {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(trim(tok));
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  double v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty())
    throw InvalidArgument(what + ": cannot parse '" + s + "' as a number");
  if (!std::isfinite(v)) throw InvalidArgument(what + ": non-finite value");
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  int v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty())
    throw InvalidArgument(what + ": cannot parse '" + s + "' as an integer");
  return v;
}

bool known_key(const std::string& k) {
  return std::find(std::begin(kConfigKeys), std::end(kConfigKeys), k) != std::end(kConfigKeys);
}

std::map<std::string, std::string> defaults_for(const std::string& cmd) {
  if (cmd == "sweep") return {{"alpha", "0:3:31"}, {"h", "0:2:21"}, {"n", "200"}, {"metrics", "c_l1,ssp,ee"}};
  if (cmd == "line") return {{"alpha", "0"}, {"h", "0"}, {"n", "200"}, {"metrics", "all"}};
  if (cmd == "scaling")
    return {{"alpha", "1"}, {"h", "0"}, {"n", "64,96,128,192,256"}, {"metrics", "c_l1,ssp,ee"}};
  if (cmd == "oracle") return {{"alpha", "0,0.5,2"}, {"h", "0,0.3,0.8"}, {"n", "12"}, {"metrics", "all"}};
  if (cmd == "critical") return {{"alpha", "0:3:301"}, {"h", "0"}, {"n", "100"}, {"metrics", "all"}};
  throw InvalidArgument("unknown subcommand '" + cmd + "'");
}

}  // namespace

std::string ValueSpec::describe() const {
  std::ostringstream os;
  if (is_range) {
    os << lo << ':' << hi << ':' << steps;
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
  }
  return os.str();
}

ValueSpec parse_value_spec(const std::string& text, const std::string& what) {
  ValueSpec v;
  const std::string t = trim(text);
  if (t.empty()) throw InvalidArgument(what + ": empty value");
  if (t.find(':') != std::string::npos) {
    auto parts = split(t, ':');
    if (parts.size() != 3) throw InvalidArgument(what + ": range must be lo:hi:steps");
    v.is_range = true;
    v.lo = to_double(parts[0], what);
    v.hi = to_double(parts[1], what);
    v.steps = to_int(parts[2], what);
    if (v.lo > v.hi) throw InvalidArgument(what + ": range needs min <= max");
    if (v.steps < 2) throw InvalidArgument(what + ": range needs steps >= 2");
    if (v.lo == v.hi) throw InvalidArgument(what + ": range with min == max; give a scalar instead");
    v.values = linspace(v.lo, v.hi, v.steps);
  } else {
    for (const auto& p : split(t, ',')) v.values.push_back(to_double(p, what));
    if (v.values.empty()) throw InvalidArgument(what + ": no values");
    v.lo = *std::min_element(v.values.begin(), v.values.end());
    v.hi = *std::max_element(v.values.begin(), v.values.end());
    v.steps = static_cast<int>(v.values.size());
  }
  return v;
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& p : split(trim(text), ',')) out.push_back(to_int(p, "n"));
  if (out.empty()) throw InvalidArgument("n: no values");
  for (int n : out)
    if (n < 3) throw InvalidArgument("n: every chain length must be >= 3");
  return out;
}

unsigned parse_formats(const std::string& text) {
  unsigned f = 0;
  for (const auto& p : split(text, ',')) {
    if (p.empty()) continue;
    if (p == "csv") f |= kFormatCsv;
    else if (p == "json") f |= kFormatJson;
    else if (p == "svg") f |= kFormatSvg;
    else throw InvalidArgument("formats: unknown format '" + p + "' (csv,json,svg)");
  }
  if (!f) throw InvalidArgument("formats: empty selection");
  return f;
}

std::string formats_to_string(unsigned f) {
  std::string s;
  for (auto [bit, name] : {std::pair{kFormatCsv, "csv"}, {kFormatJson, "json"}, {kFormatSvg, "svg"}})
    if (f & bit) s += (s.empty() ? "" : ",") + std::string(name);
  return s;
}

std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& origin) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument(origin + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key == "ssp_radius") key = "ssp-radius";
    if (!known_key(key)) throw InvalidArgument(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    out[key] = val;
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

RunConfig make_config(const std::string& subcommand, const std::map<std::string, std::string>& file_values,
                      const std::map<std::string, std::string>& flag_values) {
  std::map<std::string, std::string> kv = defaults_for(subcommand);
  for (const auto& [k, v] : file_values) kv[k] = v;
  for (const auto& [k, v] : flag_values) kv[k] = v;

  RunConfig c;
  c.subcommand = subcommand;
  c.alpha = parse_value_spec(kv.at("alpha"), "alpha");
  c.h = parse_value_spec(kv.at("h"), "h");
  c.n_sites = parse_n_list(kv.at("n"));
  c.metrics = parse_metrics(kv.at("metrics"));
  if (auto it = kv.find("ssp-radius"); it != kv.end() && !it->second.empty())
    c.ssp_radius = to_int(it->second, "ssp-radius");
  if (auto it = kv.find("out"); it != kv.end()) c.out_dir = it->second;
  if (auto it = kv.find("formats"); it != kv.end()) c.formats = parse_formats(it->second);
  if (auto it = kv.find("workers"); it != kv.end()) c.workers = to_int(it->second, "workers");
  if (auto it = kv.find("boundary"); it != kv.end()) c.boundary = boundary_from_string(it->second);
  c.raw = kv;
  c.validate();
  return c;
}

void RunConfig::validate() const {
  for (double a : alpha.values)
    if (a < 0) throw InvalidArgument("alpha must be >= 0");
  for (int n : n_sites)
    if (n < 3) throw InvalidArgument("n: every chain length must be >= 3");
  if (workers < 0) throw InvalidArgument("workers must be >= 0 (0 = all cores)");
  if (ssp_radius && *ssp_radius < 2) throw InvalidArgument("ssp-radius must be >= 2");
  if (out_dir.empty()) throw InvalidArgument("out: empty directory");

  const bool single_n = n_sites.size() == 1;
  if (subcommand == "sweep") {
    if (alpha.values.size() < 2 || h.values.size() < 2)
      throw InvalidArgument("sweep needs a 2-D grid: give alpha and h as ranges or lists");
    if (!single_n) throw InvalidArgument("sweep takes a single n");
  } else if (subcommand == "line") {
    const bool ra = alpha.values.size() > 1, rh = h.values.size() > 1;
    if (ra == rh) throw InvalidArgument("line needs exactly one of alpha/h as a range");
    if (!single_n) throw InvalidArgument("line takes a single n");
    const auto& v = ra ? alpha.values : h.values;
    if (!std::is_sorted(v.begin(), v.end()) || std::adjacent_find(v.begin(), v.end()) != v.end())
      throw InvalidArgument("line: sweep values must be strictly increasing");
  } else if (subcommand == "scaling") {
    if (n_sites.size() < 5) throw InvalidArgument("scaling needs at least 5 chain lengths");
    if (!alpha.scalar() || !h.scalar()) throw InvalidArgument("scaling takes scalar alpha and h");
    if (!std::is_sorted(n_sites.begin(), n_sites.end()) ||
        std::adjacent_find(n_sites.begin(), n_sites.end()) != n_sites.end())
      throw InvalidArgument("scaling: n must be strictly increasing");
  } else if (subcommand == "oracle") {
    for (int n : n_sites)
      if (n > kOracleMaxSites)
        throw InvalidArgument("oracle: n=" + std::to_string(n) + " exceeds the exact-diagonalization limit of " + std::to_string(kOracleMaxSites));
  } else if (subcommand != "critical") {
    throw InvalidArgument("unknown subcommand '" + subcommand + "'");
  }
}

}  // namespace xxtsi::cli
