#include <doctest.h>

#include <random>

#include "support.hpp"
#include "xxtsi/error.hpp"
#include "xxtsi/observables.hpp"
#include "xxtsi/oracle.hpp"

using namespace xxtsi;
using testsupport::kPi;

namespace {

ModelParams mp(double alpha, double h, int n) {
  ModelParams p;
  p.alpha = alpha;
  p.h = h;
  p.n_sites = n;
  return p;
}

ContractionTable table(double alpha, double h, int n) { return build_table(fermi_sea(mp(alpha, h, n))); }

Eigen::VectorXcd ed_state(const ModelParams& p) { return full_state(ground_state(p)); }

}  // namespace

TEST_CASE("l1 coherence") {
  CHECK(l1_coherence_scaled(table(0.4, 2.5, 100)) < 1e-12);

  // O(N^2) double sum over site pairs
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ua(0, 3), uh(0, 2);
  for (int it = 0; it < 5; ++it) {
    const int n = 80 + 17 * it;
    const FermiSea sea = fermi_sea(mp(ua(rng), uh(rng), n));
    double s = 0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b) s += std::abs(testsupport::naive_f(sea, b - a));
    CHECK(l1_coherence_scaled(build_table(sea)) == doctest::Approx(s / n).epsilon(1e-11));
  }

  // flat across SL-I at zero field
  CHECK(std::abs(l1_coherence_scaled(table(0.3, 0, 500)) - l1_coherence_scaled(table(0.7, 0, 500))) < 1e-6);

  // alpha = 2: dip at h about 0.59
  double best = 1e300, at = 0;
  for (int i = 0; i <= 30; ++i) {
    const double h = 0.45 + 0.01 * i;
    const double v = l1_coherence_scaled(table(2, h, 1000));
    if (v < best) best = v, at = h;
  }
  CHECK(std::abs(at - 0.59) <= 0.03 + 1e-12);
}

TEST_CASE("spin squeezing") {
  const ContractionTable pm = table(1.2, 3, 80);
  CHECK(spin_squeezing(compute_spin_correlators(pm, 79), 80) == doctest::Approx(1.0).epsilon(1e-12));

  // ED by direct minimisation over the in-plane direction
  const ModelParams p = mp(0.5, 0.3, 10);
  const ContractionTable t = build_table(fermi_sea(p));
  const double xi = spin_squeezing(compute_spin_correlators(t, 9), 10);
  CHECK(std::abs(xi - testsupport::ssp_by_angle_scan(ed_state(p), 10)) < 0.05);

  // truncated mode: certified in PM, refused in a gapless phase
  CHECK(spin_squeezing(compute_spin_correlators(pm, 5), 80) == doctest::Approx(1.0).epsilon(1e-12));
  const ContractionTable sl = table(0.5, 0, 200);
  CHECK_THROWS_AS(spin_squeezing(compute_spin_correlators(sl, 5), 200), TailBoundViolation);
  CHECK(ssp_tail_bound(compute_spin_correlators(sl, 5), 200) > kSspTailTolerance);
  CHECK_THROWS_AS(spin_squeezing(compute_spin_correlators(sl, 199), 150), InvalidArgument);
}

TEST_CASE("squeezing at alpha=2 stays above 1 at h=0.59") {
  // coherence dip and xi^2 = 1 do not coincide in this model; see README
  const ContractionTable t = table(2, 0.59, 1000);
  CHECK(spin_squeezing(compute_spin_correlators(t, 999), 1000) > 1.05);
}

TEST_CASE("entanglement entropy") {
  CHECK(entanglement_entropy(table(0, 2, 100), 50) < 1e-10);
  CHECK(entanglement_entropy(table(0, 0, 100), 1) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(entanglement_entropy(table(0, 0, 100), 0), InvalidArgument);

  // c = 1: slope 1/3 against ln of the chord length
  const ContractionTable t = table(0, 0, 400);
  std::vector<double> x, y;
  for (int l = 25; l <= 200; ++l) {
    x.push_back(std::log(400 / kPi * std::sin(kPi * l / 400)));
    y.push_back(entanglement_entropy(t, l));
  }
  CHECK(std::abs(testsupport::ls_slope(x, y) - 1.0 / 3) < 0.03);

  // every block length against the Schmidt spectrum of the ED state
  for (auto [a, h] : {std::pair{0.5, 0.3}, {2.0, 0.8}}) {
    const ModelParams p = mp(a, h, 10);
    const ContractionTable tt = build_table(fermi_sea(p));
    const Eigen::VectorXcd psi = ed_state(p);
    for (int l = 1; l < 10; ++l)
      CHECK(std::abs(entanglement_entropy(tt, l) - ed_block_entropy(psi, 10, l)) < 1e-9);
  }
}

TEST_CASE("two-site reduced state") {
  const ContractionTable pm = table(0.3, 2, 40);
  const auto c = compute_spin_correlators(pm, 2);
  const auto rho = two_site_rdm(c, c.mz, 1);
  CHECK(rho.x_plus == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rho.x_minus == 0.0);
  CHECK(rho.y_plus == doctest::Approx(0.0));
  CHECK(std::abs(rho.z) < 1e-14);

  const auto c0 = compute_spin_correlators(table(0, 0, 200), 2);
  CHECK(std::abs(two_site_rdm(c0, c0.mz, 1).z.imag()) < 1e-14);

  const ModelParams p = mp(0.5, 0.3, 12);
  const auto cc = compute_spin_correlators(build_table(fermi_sea(p)), 2);
  const Eigen::Matrix4cd ed = ed_two_site_rdm(ed_state(p), 12, 0, 1);
  const auto r = two_site_rdm(cc, cc.mz, 1);
  CHECK(std::abs(r.x_plus - ed(3, 3).real()) < 0.05);
  CHECK(std::abs(r.x_minus - ed(0, 0).real()) < 0.05);
  CHECK(std::abs(r.y_plus - ed(1, 1).real()) < 0.05);
  CHECK(std::abs(r.y_minus - ed(2, 2).real()) < 0.05);
  CHECK(std::abs(std::abs(r.z) - std::abs(ed(1, 2))) < 0.05);
}

TEST_CASE("concurrence") {
  const auto pm = compute_spin_correlators(table(0.3, 2, 40), 2);
  CHECK(concurrence(two_site_rdm(pm, pm.mz, 1)) < 1e-14);

  // closed form against Wootters on the ED reduced state
  for (auto [a, h] : {std::pair{0.5, 0.3}, {0.0, 0.0}, {2.0, 0.8}}) {
    const ModelParams p = mp(a, h, 12);
    const auto c = compute_spin_correlators(build_table(fermi_sea(p)), 2);
    const Eigen::VectorXcd psi = ed_state(p);
    for (int r = 1; r <= 2; ++r)
      CHECK(std::abs(concurrence(two_site_rdm(c, c.mz, r)) - wootters_concurrence(ed_two_site_rdm(psi, 12, 0, r))) <
            1e-9);
  }

  // nearest-neighbour entanglement dies between alpha 1.4 and 1.6
  MetricOptions o;
  o.selection = kMetricConc;
  double first_zero = -1;
  for (int i = 0; i <= 80; ++i) {
    const double a = 1.0 + 0.01 * i;
    if (*compute_metrics(mp(a, 0, 1000), o).conc_nn == 0.0) {
      first_zero = a;
      break;
    }
  }
  CHECK(first_zero >= 1.4);
  CHECK(first_zero <= 1.6);

  // next-nearest becomes entangled near h = 0.5 at alpha = 0.5
  double onset = -1;
  for (int i = 0; i <= 100; ++i) {
    const double h = 0.01 * i;
    if (*compute_metrics(mp(0.5, h, 1000), o).conc_nnn > 0.0) {
      onset = h;
      break;
    }
  }
  CHECK(onset >= 0.4);
  CHECK(onset <= 0.6);
}

TEST_CASE("wineland ratio") {
  const auto pm = compute_spin_correlators(table(0.3, 2, 40), 39);
  CHECK(wineland_ssp(pm, pm.mz, 40) == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> ua(0, 3), uh(0.05, 2.2);
  for (int it = 0; it < 20; ++it) {
    const auto c = compute_spin_correlators(table(ua(rng), uh(rng), 60), 59);
    if (std::abs(c.mz) < 1e-9) continue;
    CHECK(wineland_ssp(c, c.mz, 60) >= spin_squeezing(c, 60) - 1e-12);
  }

  const ModelParams p = mp(0.5, 0.5, 10);
  const auto c = compute_spin_correlators(build_table(fermi_sea(p)), 9);
  const auto ed = ed_metrics(ground_state(p));
  CHECK(std::abs(wineland_ssp(c, c.mz, 10) - ed.wineland) < 0.05);
  const auto zero = compute_spin_correlators(table(0, 0, 40), 39);
  CHECK_THROWS_AS(wineland_ssp(zero, zero.mz, 40), InvalidArgument);
}

TEST_CASE("metric selection parsing") {
  CHECK(parse_metrics("all") == kMetricAll);
  CHECK(parse_metrics("c_l1, ee") == (kMetricCl1 | kMetricEe));
  CHECK(parse_metrics("ee_half,conc_nnn,mz") == (kMetricEe | kMetricConc | kMetricMz));
  CHECK_THROWS_AS(parse_metrics("purity"), InvalidArgument);
  CHECK_THROWS_AS(parse_metrics(""), InvalidArgument);
  for (unsigned sel = 1; sel <= kMetricAll; ++sel) CHECK(parse_metrics(metrics_to_string(sel)) == sel);
}

TEST_CASE("metrics record") {
  MetricOptions o;
  o.selection = kMetricCl1 | kMetricMz;
  auto r = compute_metrics(mp(0.5, 0.2, 100), o);
  CHECK(r.mz.has_value());
  CHECK(r.c_l1_scaled.has_value());
  CHECK_FALSE(r.ssp.has_value());
  CHECK_FALSE(r.ee_half.has_value());
  CHECK_FALSE(r.conc_nn.has_value());
  REQUIRE(r.phase.has_value());
  CHECK(r.phase->phase == Phase::SL_I);
  CHECK_FALSE(compute_metrics(mp(0, 1.0, 100), o).phase.has_value());

  // PM invariants over random points above saturation
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> ua(0, 3), ud(0.01, 2);
  for (int it = 0; it < 20; ++it) {
    const double a = ua(rng);
    const auto rec = compute_metrics(mp(a, critical_fields(a).back() + ud(rng), 120));
    CHECK(*rec.c_l1_scaled < 1e-9);
    CHECK(*rec.ee_half < 1e-9);
    CHECK(*rec.conc_nn < 1e-12);
    CHECK(*rec.conc_nnn < 1e-12);
    CHECK(std::abs(*rec.ssp - 1) < 1e-9);
  }
}
