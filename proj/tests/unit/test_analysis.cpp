#include <doctest.h>

#include <random>

#include "support.hpp"
#include "xxtsi/analysis.hpp"
#include "xxtsi/error.hpp"

using namespace xxtsi;

namespace {

ModelParams mp(double alpha, double h, int n) {
  ModelParams p;
  p.alpha = alpha;
  p.h = h;
  p.n_sites = n;
  return p;
}

MetricOptions only(unsigned sel) {
  MetricOptions o;
  o.selection = sel;
  return o;
}

bool same(const std::optional<double>& a, const std::optional<double>& b) {
  return a.has_value() == b.has_value() && (!a || *a == *b);
}

const CriticalPoint& strongest(const std::vector<CriticalPoint>& v) {
  return *std::max_element(v.begin(), v.end(),
                           [](const CriticalPoint& a, const CriticalPoint& b) { return a.strength < b.strength; });
}

}  // namespace

TEST_CASE("linspace") {
  auto v = linspace(0, 3, 301);
  REQUIRE(v.size() == 301);
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 3.0);
  CHECK(v[100] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(linspace(0, 1, 1), InvalidArgument);
}

TEST_CASE("grid sweep bookkeeping") {
  const auto r = sweep(mp(0, 0, 200), SweepAxis::over_grid(linspace(0, 3, 50), linspace(0, 2, 50)),
                       only(kMetricMz | kMetricCl1), 2);
  REQUIRE(r.records.size() == 2500);
  CHECK(r.records[0].alpha == 0.0);
  CHECK(r.records[49].h == 2.0);
  CHECK(r.records[50].alpha == doctest::Approx(3.0 / 49));
  CHECK(r.memo_hits > 0);
  for (const auto& rec : r.records) CHECK(rec.error.empty());
}

TEST_CASE("sweep results do not depend on workers or memo") {
  const auto axis = SweepAxis::over_grid(linspace(0, 3, 7), linspace(0, 2, 5));
  const auto a = sweep(mp(0, 0, 60), axis, {}, 1);
  const auto b = sweep(mp(0, 0, 60), axis, {}, 4);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto &x = a.records[i], &y = b.records[i];
    CHECK(same(x.mz, y.mz));
    CHECK(same(x.c_l1_scaled, y.c_l1_scaled));
    CHECK(same(x.ssp, y.ssp));
    CHECK(same(x.ee_half, y.ee_half));
    CHECK(same(x.conc_nn, y.conc_nn));
    CHECK(same(x.conc_nnn, y.conc_nnn));
    const auto direct = compute_metrics(mp(x.alpha, x.h, 60));
    CHECK(same(direct.c_l1_scaled, x.c_l1_scaled));
    CHECK(same(direct.ssp, x.ssp));
  }
}

TEST_CASE("per-point failures are isolated") {
  MetricOptions o = only(kMetricSsp);
  o.ssp_radius = 3;
  const auto r = sweep(mp(0.5, 0, 100), SweepAxis::over_h({0.2, 3.0}), o, 1);
  CHECK_FALSE(r.records[0].error.empty());
  CHECK_FALSE(r.records[0].ssp.has_value());
  CHECK(r.records[1].error.empty());
  CHECK(*r.records[1].ssp == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("transition detector on synthetic curves") {
  std::vector<double> xs = linspace(0, 1, 101), ys;
  for (double x : xs) ys.push_back(0.2 * x + std::tanh((x - 0.5) / 0.02));
  auto d = detect_transitions(xs, ys);
  REQUIRE(d.size() == 1);
  CHECK(std::abs(d[0].location - 0.5) <= 0.01);
  CHECK(d[0].uncertainty == doctest::Approx(0.005));

  // relative threshold: rescaling does nothing
  std::mt19937_64 rng(53);
  std::normal_distribution<double> nd;
  std::vector<double> noisy;
  for (double x : xs) noisy.push_back(std::sqrt(std::abs(x - 0.3)) + 0.01 * nd(rng));
  const auto base = detect_transitions(xs, noisy);
  for (double s : {1e-6, 7.3, 1e8}) {
    std::vector<double> scaled;
    for (double y : noisy) scaled.push_back(s * y);
    const auto got = detect_transitions(xs, scaled);
    REQUIRE(got.size() == base.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].location == doctest::Approx(base[i].location));
  }

  CHECK(detect_transitions(xs, std::vector<double>(xs.size(), 2.0)).empty());
  CHECK_THROWS_AS(detect_transitions({0, 1, 2}, {0, 1, 2}), InvalidArgument);
  std::vector<double> back = xs;
  std::swap(back[3], back[4]);
  CHECK_THROWS_AS(detect_transitions(back, ys), InvalidArgument);
}

TEST_CASE("transitions in model sweeps") {
  // alpha sweep at zero field: the SL-I/SL-II transition dominates
  const auto ra = sweep(mp(0, 0, 1000), SweepAxis::over_alpha(linspace(0.5, 1.5, 101)), only(kMetricCl1), 1);
  const auto da = detect_transitions(ra, "c_l1");
  REQUIRE_FALSE(da.empty());
  CHECK(std::abs(strongest(da).location - 1.0) <= 0.01);

  // saturation at alpha = 0
  const auto rh = sweep(mp(0, 0, 1000), SweepAxis::over_h(linspace(0, 2.5, 251)), only(kMetricMz), 1);
  const auto dh = detect_transitions(rh, "mz");
  REQUIRE(dh.size() == 1);
  CHECK(std::abs(dh[0].location - 1.0) <= 0.01);

  // both fields at alpha = 2 from the half-chain entropy
  const auto re = sweep(mp(2, 0, 600), SweepAxis::over_h(linspace(0, 2.5, 251)), only(kMetricEe), 1);
  const auto de = detect_transitions(re, "ee_half");
  const auto hc = critical_fields(2);
  REQUIRE(de.size() == 2);
  for (int i = 0; i < 2; ++i) CHECK(std::abs(de[i].location - hc[i]) <= 0.01);

  CHECK_THROWS_AS(detect_transitions(ra, "ssp"), InvalidArgument);
}

TEST_CASE("coherence along field sweeps") {
  // alpha = 0.5: zero from the saturation field on, positive below it
  const double hc = critical_fields(0.5).back();
  const auto r = sweep(mp(0.5, 0, 1000), SweepAxis::over_h(linspace(0, 1.3, 131)), only(kMetricCl1), 1);
  for (const auto& rec : r.records) {
    if (rec.h > hc + 1e-9) CHECK(*rec.c_l1_scaled < 1e-9);
    else if (rec.h < hc - 0.01) CHECK(*rec.c_l1_scaled > 0.5);
  }

  // alpha = 2: drops across both fields
  const auto h2 = critical_fields(2);
  auto c = [](double h) { return *compute_metrics(mp(2, h, 1000), only(kMetricCl1)).c_l1_scaled; };
  CHECK(c(h2[0] - 0.01) - c(h2[0] + 0.01) > 0.3);
  CHECK(c(h2[1] - 0.01) - c(h2[1] + 0.01) > 1.0);
  CHECK(c(h2[1] + 0.01) < 1e-9);

  // curves stack bottom to top with N
  for (double h : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    double prev = -1;
    for (int n = 600; n <= 1000; n += 100) {
      const double v = *compute_metrics(mp(0.5, h, n), only(kMetricCl1)).c_l1_scaled;
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("model fits") {
  std::vector<double> xs = {10, 20, 40, 80, 160, 320}, ys;
  for (double x : xs) ys.push_back(2 * std::log(x) + 1);
  auto f = scaling_fit(xs, ys);
  CHECK(f.model == FitModel::log);
  CHECK(f.a == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.b == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.rms_residual < 1e-12);

  ys.clear();
  for (double x : xs) ys.push_back(0.5 * std::sqrt(x) - 3);
  CHECK(scaling_fit(xs, ys).model == FitModel::sqrt);
  ys.clear();
  for (double x : xs) ys.push_back(-4 * x + 2);
  CHECK(scaling_fit(xs, ys).model == FitModel::linear);

  CHECK_THROWS_AS(scaling_fit({1, 2, 3, 4}, {1, 2, 3, 4}), InvalidArgument);
  CHECK_THROWS_AS(scaling_fit({0, 1, 2, 3, 4}, {1, 2, 3, 4, 5}), InvalidArgument);
}

TEST_CASE("scaling of coherence and squeezing with N") {
  const std::vector<int> ns = {64, 96, 128, 192, 256};
  auto run = [&](double a, double h, unsigned sel) {
    return sweep(mp(a, h, 64), SweepAxis::over_n(ns), only(sel), 1);
  };
  auto fit = [&](const SweepResult& r, bool ssp) {
    std::vector<double> x, y;
    for (const auto& rec : r.records) {
      x.push_back(rec.n_sites);
      y.push_back(ssp ? *rec.ssp : *rec.c_l1_scaled * rec.n_sites);
    }
    return scaling_fit(x, y).model;
  };
  CHECK(fit(run(1, 0, kMetricSsp), true) == FitModel::sqrt);
  CHECK(fit(run(2, 0, kMetricSsp), true) == FitModel::log);
  for (auto [a, h] : {std::pair{1.0, 0.0}, {2.0, 0.0}, {0.5, 0.0}, {0.5, 0.6}, {2.0, 0.8}})
    CHECK(fit(run(a, h, kMetricCl1), false) == FitModel::linear);
}

TEST_CASE("central charge") {
  std::vector<int> ls;
  for (int l = 25; l <= 200; ++l) ls.push_back(l);
  const auto c1 = central_charge(mp(0.5, 0, 400), ls);
  CHECK(std::abs(*c1.derived_constant - 1.0) < 0.1);
  CHECK(std::abs(*c1.c_bits - 1.44) < 0.15);
  const auto c2 = central_charge(mp(2.0, 0, 400), ls);
  CHECK(std::abs(*c2.derived_constant / *c1.derived_constant - 2.0) < 0.15);

  CHECK_THROWS_AS(central_charge(mp(0, 2, 400), ls), InvalidArgument);
  CHECK_THROWS_AS(central_charge(mp(0.5, 0, 400), {1, 2, 3, 4, 5, 6}), InvalidArgument);
  CHECK_THROWS_AS(central_charge(mp(0.5, 0, 400), {25, 300}), InvalidArgument);
}
