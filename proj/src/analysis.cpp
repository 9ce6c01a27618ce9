#include "xxtsi/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

#include "xxtsi/correlators.hpp"
#include "xxtsi/error.hpp"

namespace xxtsi {

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 2 || !(lo <= hi)) throw InvalidArgument("linspace: need lo <= hi and steps >= 2");
  std::vector<double> v(steps);
  for (int i = 0; i < steps; ++i) v[i] = lo + (hi - lo) * i / (steps - 1);
  v.back() = hi;
  return v;
}

SweepAxis SweepAxis::over_alpha(std::vector<double> v) {
  SweepAxis a;
  a.kind = alpha;
  a.alphas = std::move(v);
  return a;
}
SweepAxis SweepAxis::over_h(std::vector<double> v) {
  SweepAxis a;
  a.kind = h;
  a.hs = std::move(v);
  return a;
}
SweepAxis SweepAxis::over_n(std::vector<int> v) {
  SweepAxis a;
  a.kind = n_sites;
  a.ns = std::move(v);
  return a;
}
SweepAxis SweepAxis::over_grid(std::vector<double> al, std::vector<double> hv) {
  SweepAxis a;
  a.kind = grid;
  a.alphas = std::move(al);
  a.hs = std::move(hv);
  return a;
}

std::size_t SweepAxis::size() const {
  switch (kind) {
    case alpha: return alphas.size();
    case h: return hs.size();
    case n_sites: return ns.size();
    case grid: return alphas.size() * hs.size();
  }
  return 0;
}

double SweepAxis::coordinate(std::size_t i) const {
  switch (kind) {
    case alpha: return alphas.at(i);
    case h: return hs.at(i);
    case n_sites: return ns.at(i);
    case grid: break;
  }
  throw InvalidArgument("SweepAxis: 2-D grid has no scalar coordinate");
}

const char* SweepAxis::name() const {
  switch (kind) {
    case alpha: return "alpha";
    case h: return "h";
    case n_sites: return "n_sites";
    case grid: return "grid";
  }
  return "?";
}

namespace {

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ModelParams point_params(const ModelParams& base, const SweepAxis& axis, std::size_t i) {
  ModelParams p = base;
  switch (axis.kind) {
    case SweepAxis::alpha: p.alpha = axis.alphas[i]; break;
    case SweepAxis::h: p.h = axis.hs[i]; break;
    case SweepAxis::n_sites: p.n_sites = axis.ns[i]; break;
    case SweepAxis::grid:
      p.alpha = axis.alphas[i / axis.hs.size()];
      p.h = axis.hs[i % axis.hs.size()];
      break;
  }
  return p;
}

std::string sea_key(const FermiSea& sea) {
  std::string k = std::to_string(sea.grid.n_sites) + (sea.grid.twist == Twist::periodic ? "p" : "a");
  k.append(reinterpret_cast<const char*>(sea.occupied_mask.data()), sea.occupied_mask.size());
  return k;
}

}  // namespace

SweepResult sweep(const ModelParams& base, const SweepAxis& axis, const MetricOptions& opt, int workers) {
  const std::size_t n = axis.size();
  if (n == 0) throw InvalidArgument("sweep: empty axis");
  SweepResult res;
  res.axis = axis;
  res.base = base;
  res.options = opt;
  res.timestamp = utc_timestamp();
  res.version = XXTSI_VERSION;
  res.records.resize(n);

  std::mutex mu;
  std::map<std::string, SeaMetrics> memo;
  std::atomic<std::size_t> next{0};
  std::atomic<int> hits{0};

  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const ModelParams p = point_params(base, axis, i);
      MetricsRecord& rec = res.records[i];
      rec.alpha = p.alpha;
      rec.h = p.h;
      rec.n_sites = p.n_sites;
      try {
        p.validate();
        try {
          rec.phase = classify_phase(p);
        } catch (const DegenerateClassification&) {
          rec.phase.reset();
        }
        const FermiSea sea = fermi_sea(p);
        if (opt.selection & kMetricMz) rec.mz = sea.filling - 0.5;
        const std::string key = sea_key(sea);
        std::optional<SeaMetrics> cached;
        {
          std::lock_guard lk(mu);
          auto it = memo.find(key);
          if (it != memo.end()) cached = it->second;
        }
        SeaMetrics m;
        if (cached) {
          m = *cached;
          ++hits;
        } else {
          m = compute_sea_metrics(sea, opt);
          std::lock_guard lk(mu);
          memo.emplace(key, m);
        }
        rec.c_l1_scaled = m.c_l1_scaled;
        rec.ssp = m.ssp;
        rec.ee_half = m.ee_half;
        rec.conc_nn = m.conc_nn;
        rec.conc_nnn = m.conc_nnn;
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
    }
  };

  const int nw = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (nw == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  res.memo_hits = hits;
  return res;
}

std::optional<double> metric_value(const MetricsRecord& r, const std::string& m) {
  if (m == "mz") return r.mz;
  if (m == "c_l1" || m == "c_l1_scaled") return r.c_l1_scaled;
  if (m == "ssp") return r.ssp;
  if (m == "ee" || m == "ee_half") return r.ee_half;
  if (m == "conc_nn" || m == "conc") return r.conc_nn;
  if (m == "conc_nnn") return r.conc_nnn;
  throw InvalidArgument("unknown metric '" + m + "'");
}

std::vector<CriticalPoint> detect_transitions(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n != ys.size()) throw InvalidArgument("detect_transitions: size mismatch");
  if (n < 10) throw InvalidArgument("detect_transitions: need at least 10 points");
  for (std::size_t i = 1; i < n; ++i)
    if (!(xs[i] > xs[i - 1])) throw InvalidArgument("detect_transitions: x must increase");
  for (double y : ys)
    if (!std::isfinite(y)) throw InvalidArgument("detect_transitions: non-finite metric value");

  // centred differences on interior points
  std::vector<double> d(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i - 1] = std::abs((ys[i + 1] - ys[i - 1]) / (xs[i + 1] - xs[i - 1]));
  // flat stretches (saturated m_z) would pin the median at zero
  const double dmax = *std::max_element(d.begin(), d.end());
  std::vector<double> sorted;
  for (double v : d)
    if (v > 1e-12 * dmax) sorted.push_back(v);
  if (sorted.empty()) return {};
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  double med = sorted[sorted.size() / 2];
  if (sorted.size() % 2 == 0) {
    const double lo = *std::max_element(sorted.begin(), sorted.begin() + sorted.size() / 2);
    med = 0.5 * (med + lo);
  }
  const double thresh = 5.0 * med;

  std::vector<CriticalPoint> out;
  const std::size_t m = d.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (!(d[k] > thresh)) continue;
    // strict on the left so a flat top is reported once
    const bool left = k == 0 || d[k] > d[k - 1];
    const bool right = k + 1 == m || d[k] >= d[k + 1];
    if (!left || !right) continue;
    const std::size_t i = k + 1;
    CriticalPoint c;
    c.location = xs[i];
    if (k > 0 && k + 1 < m) {
      // vertex of the parabola through the three |d| values
      const double den = d[k - 1] - 2.0 * d[k] + d[k + 1];
      if (den < 0) {
        const double shift = std::clamp(0.5 * (d[k - 1] - d[k + 1]) / den, -0.5, 0.5);
        c.location += shift * (shift > 0 ? xs[i + 1] - xs[i] : xs[i] - xs[i - 1]);
      }
    }
    c.uncertainty = 0.25 * (xs[i + 1] - xs[i - 1]);
    c.strength = thresh > 0 ? d[k] / thresh : std::numeric_limits<double>::infinity();
    out.push_back(c);
  }
  return out;
}

std::vector<CriticalPoint> detect_transitions(const SweepResult& r, const std::string& metric) {
  if (r.axis.kind == SweepAxis::grid) throw InvalidArgument("detect_transitions: needs a 1-D sweep");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    auto v = metric_value(r.records[i], metric);
    if (!v) throw InvalidArgument("detect_transitions: metric '" + metric + "' missing at point " + std::to_string(i));
    xs.push_back(r.axis.coordinate(i));
    ys.push_back(*v);
  }
  return detect_transitions(xs, ys);
}

const char* to_string(FitModel m) {
  switch (m) {
    case FitModel::linear: return "linear";
    case FitModel::sqrt: return "sqrt";
    case FitModel::log: return "log";
  }
  return "?";
}

ScalingFit fit_model(FitModel model, const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n != ys.size() || n < 2) throw InvalidArgument("fit_model: bad input");
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    switch (model) {
      case FitModel::linear: u[i] = xs[i]; break;
      case FitModel::sqrt:
        if (xs[i] < 0) throw InvalidArgument("fit_model: sqrt of negative x");
        u[i] = std::sqrt(xs[i]);
        break;
      case FitModel::log:
        if (xs[i] <= 0) throw InvalidArgument("fit_model: log of non-positive x");
        u[i] = std::log(xs[i]);
        break;
    }
  }
  double mu = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mu += u[i], my += ys[i];
  mu /= n;
  my /= n;
  double suu = 0, suy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suy += (u[i] - mu) * (ys[i] - my);
  }
  if (!(suu > 0)) throw InvalidArgument("fit_model: degenerate x values");
  ScalingFit f;
  f.model = model;
  f.a = suy / suu;
  f.b = my - f.a * mu;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (f.a * u[i] + f.b);
    ss += r * r;
  }
  f.rms_residual = std::sqrt(ss / n);
  return f;
}

ScalingFit scaling_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() < 5) throw InvalidArgument("scaling_fit: need at least 5 points");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw InvalidArgument("scaling_fit: xs must be strictly increasing");
  if (!(xs.front() > 0)) throw InvalidArgument("scaling_fit: xs must be positive");
  const FitModel models[3] = {FitModel::linear, FitModel::sqrt, FitModel::log};
  ScalingFit best;
  double rms[3];
  for (int m = 0; m < 3; ++m) {
    ScalingFit f = fit_model(models[m], xs, ys);
    rms[m] = f.rms_residual;
    if (m == 0 || f.rms_residual < best.rms_residual) best = f;
  }
  std::copy(rms, rms + 3, best.candidate_rms);
  return best;
}

ScalingFit central_charge(const ModelParams& p, const std::vector<int>& ls) {
  p.validate();
  bool pm = false;
  try {
    pm = classify_phase(p).phase == Phase::PM;
  } catch (const DegenerateClassification&) {
  }
  if (pm) throw InvalidArgument("central_charge: PM point has no conformal entropy scaling");
  const int n = p.n_sites;
  std::vector<int> use;
  for (int l : ls) {
    if (l < 1 || l > n / 2) throw InvalidArgument("central_charge: block length out of [1, N/2]");
    if (l >= kCentralChargeMinBlock) use.push_back(l);
  }
  std::sort(use.begin(), use.end());
  use.erase(std::unique(use.begin(), use.end()), use.end());
  if (use.size() < 5) throw InvalidArgument("central_charge: need >= 5 block lengths >= 25");
  const ContractionTable t = build_table(fermi_sea(p));
  std::vector<double> chord, s;
  for (int l : use) {
    chord.push_back(n / std::numbers::pi * std::sin(std::numbers::pi * l / n));
    s.push_back(entanglement_entropy(t, l));
  }
  ScalingFit f = fit_model(FitModel::log, chord, s);
  f.derived_constant = 3.0 * f.a;
  f.c_bits = 3.0 * f.a / std::numbers::ln2;
  return f;
}

}  // namespace xxtsi
