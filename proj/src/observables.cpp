#include "xxtsi/observables.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "xxtsi/error.hpp"
#include "xxtsi/pfaffian.hpp"

namespace xxtsi {

SpinCorrelators compute_spin_correlators(const ContractionTable& t, int max_range) {
  TransverseCorrelators tc = transverse_correlators(t, max_range);
  SpinCorrelators c;
  c.max_range = max_range;
  c.n_sites = t.n_sites();
  c.mz = t.mz();
  c.gxx = std::move(tc.gxx);
  c.gyy = std::move(tc.gyy);
  c.gxy = std::move(tc.gxy);
  c.gyx = std::move(tc.gyx);
  c.gzz.resize(max_range);
  for (int n = 1; n <= max_range; ++n) c.gzz[n - 1] = zz_correlator(t, n);
  for (int n = 1; n <= max_range; ++n)
    for (double g : {c.xx(n), c.yy(n), c.xy(n), c.yx(n), c.zz(n)})
      if (!std::isfinite(g) || std::abs(g) > 0.25 + 1e-9)
        throw NumericalFailure("spin correlator out of range at distance " + std::to_string(n));
  return c;
}

double l1_coherence_scaled(const ContractionTable& t) {
  const int n = t.n_sites();
  double s = 0.0;
  for (int d = 1; d < n; ++d) s += static_cast<double>(n - d) * std::abs(t.f(d));
  return 2.0 * s / n;
}

double ssp_tail_bound(const SpinCorrelators& c, int n_sites) {
  const int r = c.max_range;
  if (r >= n_sites - 1) return 0.0;
  return (n_sites - 1 - r) * 4.0 * std::max(std::abs(c.xx(r)), std::abs(c.yy(r)));
}

double spin_squeezing(const SpinCorrelators& c, int n_sites) {
  if (c.max_range < 1) throw InvalidArgument("spin_squeezing: no correlators");
  if (c.max_range > n_sites - 1) throw InvalidArgument("spin_squeezing: range exceeds N-1");
  const double tail = ssp_tail_bound(c, n_sites);
  if (tail >= kSspTailTolerance)
    throw TailBoundViolation("spin_squeezing: tail bound " + std::to_string(tail) + " at R=" +
                                 std::to_string(c.max_range) + " exceeds 1e-6; increase the radius",
                             tail, c.max_range);
  double sum_p = 0, sum_m = 0, sum_x = 0;
  for (int n = 1; n <= c.max_range; ++n) {
    sum_p += c.xx(n) + c.yy(n);
    sum_m += c.xx(n) - c.yy(n);
    sum_x += c.xy(n) + c.yx(n);
  }
  const double xi2 = 1.0 + 2.0 * sum_p - 2.0 * std::sqrt(sum_m * sum_m + sum_x * sum_x);
  if (!std::isfinite(xi2)) throw NumericalFailure("spin_squeezing: non-finite result");
  return xi2;
}

double entanglement_entropy(const ContractionTable& t, int l) {
  const int n = t.n_sites();
  if (l < 1 || l > n - 1) throw InvalidArgument("entanglement_entropy: block length out of range");
  Eigen::MatrixXcd c(l, l);
  for (int a = 0; a < l; ++a)
    for (int b = 0; b < l; ++b) c(a, b) = t.f(b - a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalFailure("entanglement_entropy: eigensolve failed");
  double s = 0.0;
  for (int i = 0; i < l; ++i) {
    double nu = es.eigenvalues()[i];
    if (nu < -1e-8 || nu > 1 + 1e-8)
      throw NumericalFailure("entanglement_entropy: eigenvalue " + std::to_string(nu) + " outside [0,1]");
    nu = std::clamp(nu, 0.0, 1.0);
    if (nu > 0 && nu < 1) s -= nu * std::log(nu) + (1 - nu) * std::log1p(-nu);
  }
  return s;
}

ReducedTwoSite two_site_rdm(const SpinCorrelators& c, double mz, int r) {
  if (r < 1 || r > c.max_range) throw InvalidArgument("two_site_rdm: distance out of range");
  ReducedTwoSite rho;
  const double gzz = c.zz(r);
  rho.x_plus = 0.25 + mz + gzz;
  rho.x_minus = 0.25 - mz + gzz;
  rho.y_plus = rho.y_minus = 0.25 - gzz;
  rho.z = {c.xx(r) + c.yy(r), c.yx(r) - c.xy(r)};
  const double tr = rho.x_plus + rho.x_minus + rho.y_plus + rho.y_minus;
  if (std::abs(tr - 1.0) > 1e-9) throw NumericalFailure("two_site_rdm: trace != 1");
  for (double* d : {&rho.x_plus, &rho.x_minus, &rho.y_plus, &rho.y_minus}) {
    if (*d < -1e-12) throw NumericalFailure("two_site_rdm: negative population");
    *d = std::max(*d, 0.0);
  }
  return rho;
}

double concurrence(const ReducedTwoSite& rho) {
  const double c = 2.0 * (std::abs(rho.z) - std::sqrt(rho.x_plus * rho.x_minus));
  return std::clamp(c, 0.0, 1.0);
}

double wineland_ssp(const SpinCorrelators& c, double mz, int n_sites) {
  if (std::abs(mz) <= 1e-9) throw InvalidArgument("wineland_ssp: mean spin vanishes");
  return spin_squeezing(c, n_sites) / (4.0 * mz * mz);
}

unsigned parse_metrics(const std::string& csv) {
  unsigned sel = 0;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok.empty()) continue;
    if (tok == "all") sel |= kMetricAll;
    else if (tok == "mz") sel |= kMetricMz;
    else if (tok == "c_l1" || tok == "c_l1_scaled") sel |= kMetricCl1;
    else if (tok == "ssp") sel |= kMetricSsp;
    else if (tok == "ee" || tok == "ee_half") sel |= kMetricEe;
    else if (tok == "conc" || tok == "conc_nn" || tok == "conc_nnn") sel |= kMetricConc;
    else throw InvalidArgument("unknown metric '" + tok + "' (mz,c_l1,ssp,ee,conc,all)");
  }
  if (sel == 0) throw InvalidArgument("empty metric selection");
  return sel;
}

std::string metrics_to_string(unsigned sel) {
  std::string out;
  auto add = [&](unsigned bit, const char* name) {
    if (sel & bit) {
      if (!out.empty()) out += ',';
      out += name;
    }
  };
  add(kMetricMz, "mz");
  add(kMetricCl1, "c_l1");
  add(kMetricSsp, "ssp");
  add(kMetricEe, "ee");
  add(kMetricConc, "conc");
  return out;
}

SeaMetrics compute_sea_metrics(const FermiSea& sea, const MetricOptions& opt) {
  SeaMetrics m;
  if (!(opt.selection & (kMetricCl1 | kMetricEe | kMetricSsp | kMetricConc))) return m;
  const ContractionTable t = build_table(sea);
  const int n = t.n_sites();
  if (opt.selection & kMetricCl1) m.c_l1_scaled = l1_coherence_scaled(t);
  if (opt.selection & kMetricEe) m.ee_half = entanglement_entropy(t, n / 2);
  if (opt.selection & (kMetricSsp | kMetricConc)) {
    int range = 2;
    if (opt.selection & kMetricSsp) {
      range = n - 1;
      if (opt.ssp_radius) {
        if (*opt.ssp_radius < 2) throw InvalidArgument("ssp radius must be >= 2");
        range = std::min(*opt.ssp_radius, n - 1);
      }
    }
    range = std::min(range, n - 1);
    SpinCorrelators c = compute_spin_correlators(t, range);
    if (opt.selection & kMetricSsp) m.ssp = spin_squeezing(c, n);
    if (opt.selection & kMetricConc) {
      m.conc_nn = concurrence(two_site_rdm(c, c.mz, 1));
      m.conc_nnn = range >= 2 ? concurrence(two_site_rdm(c, c.mz, 2)) : 0.0;
    }
  }
  return m;
}

MetricsRecord compute_metrics(const ModelParams& p, const MetricOptions& opt) {
  p.validate();
  MetricsRecord rec;
  rec.alpha = p.alpha;
  rec.h = p.h;
  rec.n_sites = p.n_sites;
  try {
    rec.phase = classify_phase(p);
  } catch (const DegenerateClassification&) {
    rec.phase.reset();
  }
  const FermiSea sea = fermi_sea(p);
  if (opt.selection & kMetricMz) rec.mz = sea.filling - 0.5;
  SeaMetrics m = compute_sea_metrics(sea, opt);
  rec.c_l1_scaled = m.c_l1_scaled;
  rec.ssp = m.ssp;
  rec.ee_half = m.ee_half;
  rec.conc_nn = m.conc_nn;
  rec.conc_nnn = m.conc_nnn;
  return rec;
}

}  // namespace xxtsi
