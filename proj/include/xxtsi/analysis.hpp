#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xxtsi/model.hpp"
#include "xxtsi/observables.hpp"

namespace xxtsi {

// Evenly spaced grid including both ends.
std::vector<double> linspace(double lo, double hi, int steps);

struct SweepAxis {
  enum Kind { alpha, h, n_sites, grid } kind = alpha;
  std::vector<double> alphas;  // alpha / grid
  std::vector<double> hs;      // h / grid
  std::vector<int> ns;         // n_sites

  static SweepAxis over_alpha(std::vector<double> v);
  static SweepAxis over_h(std::vector<double> v);
  static SweepAxis over_n(std::vector<int> v);
  static SweepAxis over_grid(std::vector<double> a, std::vector<double> h);

  std::size_t size() const;
  // x coordinate of point i for 1-D axes
  double coordinate(std::size_t i) const;
  const char* name() const;
};

struct SweepResult {
  SweepAxis axis;
  std::vector<MetricsRecord> records;
  ModelParams base;
  MetricOptions options;
  std::string timestamp;
  std::string version;
  int memo_hits = 0;
};

// Deterministic parallel map over the axis; per-point failures land in
// MetricsRecord::error. Points sharing a Fermi sea share the expensive
// metrics.
SweepResult sweep(const ModelParams& base, const SweepAxis& axis, const MetricOptions& opt,
                  int workers = 1);

// "mz", "c_l1"/"c_l1_scaled", "ssp", "ee"/"ee_half", "conc_nn", "conc_nnn"
std::optional<double> metric_value(const MetricsRecord& r, const std::string& metric);

struct CriticalPoint {
  double location = 0;
  double uncertainty = 0;
  double strength = 0;  // |derivative| over the threshold
};

std::vector<CriticalPoint> detect_transitions(const SweepResult& result, const std::string& metric);
std::vector<CriticalPoint> detect_transitions(const std::vector<double>& xs, const std::vector<double>& ys);

enum class FitModel { linear, sqrt, log };
const char* to_string(FitModel m);

struct ScalingFit {
  FitModel model = FitModel::linear;
  double a = 0, b = 0, rms_residual = 0;
  std::optional<double> derived_constant;  // central charge, natural log
  std::optional<double> c_bits;
  // rms of every candidate, in FitModel order
  double candidate_rms[3] = {0, 0, 0};
};

ScalingFit fit_model(FitModel m, const std::vector<double>& xs, const std::vector<double>& ys);
ScalingFit scaling_fit(const std::vector<double>& xs, const std::vector<double>& ys);

inline constexpr int kCentralChargeMinBlock = 25;

// S(l) against ln of the chord length (N/pi) sin(pi l / N); blocks below
// 25 are dropped. Refuses PM points and fewer than 5 usable blocks.
ScalingFit central_charge(const ModelParams& p, const std::vector<int>& ls);

}  // namespace xxtsi
