#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xxtsi/model.hpp"

namespace xxtsi::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitOracleMismatch = 4,
};

// "lo:hi:steps" or a comma list; a single value is a scalar
struct ValueSpec {
  std::vector<double> values;
  bool is_range = false;
  double lo = 0, hi = 0;
  int steps = 1;

  bool scalar() const { return values.size() == 1; }
  std::string describe() const;
};

ValueSpec parse_value_spec(const std::string& text, const std::string& what);
std::vector<int> parse_n_list(const std::string& text);

enum Format : unsigned { kFormatCsv = 1u, kFormatJson = 2u, kFormatSvg = 4u };
unsigned parse_formats(const std::string& text);
std::string formats_to_string(unsigned f);

struct RunConfig {
  std::string subcommand;
  ValueSpec alpha, h;
  std::vector<int> n_sites;
  unsigned metrics = 0;
  std::optional<int> ssp_radius;
  std::string out_dir = ".";
  unsigned formats = kFormatCsv | kFormatJson | kFormatSvg;
  int workers = 1;
  Boundary boundary = Boundary::parity_exact;
  // raw key=value pairs after merging, echoed into the manifest
  std::map<std::string, std::string> raw;

  void validate() const;
};

inline const char* const kConfigKeys[] = {"alpha", "h",       "n",       "metrics", "ssp-radius",
                                          "out",   "formats", "workers", "boundary"};

// '#' starts a comment; blank lines ignored; unknown keys rejected
std::map<std::string, std::string> read_config_file(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& origin);

// subcommand defaults < file < flags
RunConfig make_config(const std::string& subcommand, const std::map<std::string, std::string>& file_values,
                      const std::map<std::string, std::string>& flag_values);

}  // namespace xxtsi::cli
