#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "xxtsi/correlators.hpp"
#include "xxtsi/model.hpp"

namespace xxtsi {

struct SpinCorrelators {
  int max_range = 0;
  int n_sites = 0;
  // index n-1 holds distance n
  std::vector<double> gxx, gyy, gxy, gyx, gzz;
  double mz = 0.0;

  double xx(int n) const { return gxx.at(n - 1); }
  double yy(int n) const { return gyy.at(n - 1); }
  double xy(int n) const { return gxy.at(n - 1); }
  double yx(int n) const { return gyx.at(n - 1); }
  double zz(int n) const { return gzz.at(n - 1); }
};

// Pfaffian strings for n = 1..max_range plus the Wick zz correlator.
SpinCorrelators compute_spin_correlators(const ContractionTable& t, int max_range);

struct ReducedTwoSite {
  double x_plus = 0, x_minus = 0, y_plus = 0, y_minus = 0;
  std::complex<double> z;
};

double l1_coherence_scaled(const ContractionTable& t);

// Tail allowance for truncated sums: (N-1-R) * 4 max(|Gxx_R|, |Gyy_R|).
double ssp_tail_bound(const SpinCorrelators& c, int n_sites);
inline constexpr double kSspTailTolerance = 1e-6;

// throws TailBoundViolation if the correlators stop short of N-1 and the
// tail can't be certified
double spin_squeezing(const SpinCorrelators& c, int n_sites);

double entanglement_entropy(const ContractionTable& t, int block_len);

ReducedTwoSite two_site_rdm(const SpinCorrelators& c, double mz, int r);
double concurrence(const ReducedTwoSite& rho);

// Wineland ratio with the squared mean spin in the denominator
double wineland_ssp(const SpinCorrelators& c, double mz, int n_sites);

enum Metric : unsigned {
  kMetricMz = 1u << 0,
  kMetricCl1 = 1u << 1,
  kMetricSsp = 1u << 2,
  kMetricEe = 1u << 3,
  kMetricConc = 1u << 4,
  kMetricAll = 0x1fu,
};

unsigned parse_metrics(const std::string& csv);  // "c_l1,ssp,..." or "all"
std::string metrics_to_string(unsigned sel);

struct MetricOptions {
  unsigned selection = kMetricAll;
  // empty: exact sum to N-1. Otherwise the SSP stops at this distance and
  // has to pass the tail bound.
  std::optional<int> ssp_radius;
};

struct MetricsRecord {
  double alpha = 0, h = 0;
  int n_sites = 0;
  // empty when the point is on a critical line
  std::optional<PhaseLabel> phase;
  std::optional<double> mz, c_l1_scaled, ssp, ee_half, conc_nn, conc_nnn;
  std::string error;  // set when a metric failed at this point
};

MetricsRecord compute_metrics(const ModelParams& p, const MetricOptions& opt = {});

// the expensive part, shared between points with the same Fermi sea
struct SeaMetrics {
  std::optional<double> c_l1_scaled, ssp, ee_half, conc_nn, conc_nnn;
};
SeaMetrics compute_sea_metrics(const FermiSea& sea, const MetricOptions& opt);

}  // namespace xxtsi
