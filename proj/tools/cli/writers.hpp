#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "xxtsi/analysis.hpp"
#include "xxtsi/oracle.hpp"

namespace xxtsi::cli {

// shortest decimal that parses back to the same double
std::string format_double(double v);
std::string format_optional(const std::optional<double>& v);

inline constexpr const char* kGridHeader = "alpha,h,n_sites,phase,mz,c_l1_scaled,ssp,ee_half,conc_nn,conc_nnn";

void write_grid_csv(std::ostream& os, const std::vector<MetricsRecord>& rows);
// grid columns plus the unscaled c_l1 the fits use
void write_scaling_csv(std::ostream& os, const std::vector<MetricsRecord>& rows);
void write_compare_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);
// alpha,count,h_lower,h_saturation; h_lower empty with a single field
void write_critical_csv(std::ostream& os, const std::vector<double>& alphas);

struct Heatmap {
  std::string title;
  std::vector<double> xs, ys;  // alpha, h
  // row-major over ys then xs; nullopt renders grey
  std::vector<std::optional<double>> values;
  bool categorical = false;  // values are phase indices 0,1,2
};

void write_svg(std::ostream& os, const Heatmap& map);

// throws InvalidArgument when the directory cannot be created or written
void ensure_output_dir(const std::string& dir);
void write_file(const std::string& path, const std::string& contents);

}  // namespace xxtsi::cli
