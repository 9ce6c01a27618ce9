#pragma once

#include <ostream>

#include "cli/config.hpp"

namespace xxtsi::cli {

// each returns an ExitCode; files land in cfg.out_dir
int cmd_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_line(const RunConfig& cfg, std::ostream& log);
int cmd_scaling(const RunConfig& cfg, std::ostream& log);
int cmd_oracle(const RunConfig& cfg, std::ostream& log);
int cmd_critical(const RunConfig& cfg, std::ostream& log);

// full argv handling, exceptions mapped to exit codes
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xxtsi::cli
