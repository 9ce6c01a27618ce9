#include <doctest.h>

#include <Eigen/LU>
#include <random>

#include "support.hpp"
#include "xxtsi/error.hpp"
#include "xxtsi/oracle.hpp"
#include "xxtsi/pfaffian.hpp"

using namespace xxtsi;
using testsupport::kPi;

namespace {

SkewMatrix to_skew(const Eigen::MatrixXcd& m, bool even_only = true) {
  SkewMatrix s(static_cast<int>(m.rows()), even_only);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j) s.set(i, j, m(i, j));
  return s;
}

ModelParams mp(double alpha, double h, int n) {
  ModelParams p;
  p.alpha = alpha;
  p.h = h;
  p.n_sites = n;
  return p;
}

}  // namespace

TEST_CASE("skew storage") {
  SkewMatrix a(4);
  a.set(0, 2, {1, 2});
  CHECK(a(0, 2) == cplx(1, 2));
  CHECK(a(2, 0) == cplx(-1, -2));
  CHECK(a(1, 1) == cplx(0, 0));
  a.set(3, 1, {5, 0});
  CHECK(a(1, 3) == cplx(-5, 0));
  CHECK(a.max_norm() == 5.0);
  CHECK_THROWS_AS(SkewMatrix(3), InvalidArgument);
  CHECK_NOTHROW(SkewMatrix(3, false));
}

TEST_CASE("closed forms") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 20; ++it) {
    const Eigen::MatrixXcd m2 = testsupport::random_skew(2, rng);
    CHECK(std::abs(pfaffian(to_skew(m2)) - m2(0, 1)) <= 1e-15 * std::abs(m2(0, 1)));

    const Eigen::MatrixXcd m = testsupport::random_skew(4, rng);
    const cplx want = m(0, 1) * m(2, 3) - m(0, 2) * m(1, 3) + m(0, 3) * m(1, 2);
    CHECK(std::abs(pfaffian(to_skew(m)) - want) <= 1e-14 * std::abs(want));
  }
}

TEST_CASE("Pf squared equals an LU determinant") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 50; ++it) {
    const int n = 2 + 2 * (it % 20);
    const Eigen::MatrixXcd m = testsupport::random_skew(n, rng);
    const cplx pf = pfaffian(to_skew(m));
    const cplx det = m.partialPivLu().determinant();
    CHECK(std::abs(pf * pf - det) <= 1e-9 * std::abs(det));
  }
}

TEST_CASE("permutation and scaling") {
  std::mt19937_64 rng(29);
  for (int it = 0; it < 20; ++it) {
    const int n = 10;
    const Eigen::MatrixXcd m = testsupport::random_skew(n, rng);
    const cplx pf = pfaffian(to_skew(m));
    // a transposition of rows and columns flips the sign
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
    perm.setIdentity();
    std::swap(perm.indices()[2], perm.indices()[7]);
    const Eigen::MatrixXcd pm = perm * m * perm.transpose();
    CHECK(std::abs(pfaffian(to_skew(pm)) + pf) <= 1e-12 * std::abs(pf));
    // a 3-cycle is even
    perm.setIdentity();
    perm.indices()[0] = 1, perm.indices()[1] = 2, perm.indices()[2] = 0;
    const Eigen::MatrixXcd pc = perm * m * perm.transpose();
    CHECK(std::abs(pfaffian(to_skew(pc)) - pf) <= 1e-12 * std::abs(pf));
    const cplx c(0.3, -1.1);
    CHECK(std::abs(pfaffian(to_skew(c * m)) - std::pow(c, n / 2) * pf) <= 1e-12 * std::abs(pf) * std::pow(std::abs(c), n / 2));
  }
}

TEST_CASE("structural zero and bad input") {
  SkewMatrix z(6);
  z.set(0, 1, {1, 0});
  z.set(2, 3, {1, 0});
  CHECK(pfaffian(z) == cplx(0, 0));  // row 4 and 5 are empty
  SkewMatrix bad(4);
  bad.set(0, 1, {std::nan(""), 0});
  CHECK_THROWS(pfaffian(bad));
  CHECK_THROWS_AS(SkewMatrix(0), InvalidArgument);
}

TEST_CASE("prefix pfaffians against direct principal pfaffians") {
  std::mt19937_64 rng(31);
  const int dim = 41;
  const Eigen::MatrixXcd m = testsupport::random_skew(dim, rng);
  const SkewMatrix k = to_skew(m, false);
  const auto pre = prefix_pfaffians(k, 20);
  REQUIRE(pre.leading.size() == 20);
  REQUIRE(pre.swapped.size() == 20);
  for (int n = 1; n <= 20; ++n) {
    std::vector<int> lead, swp;
    for (int i = 0; i < 2 * n; ++i) lead.push_back(i);
    for (int i = 0; i < 2 * n - 1; ++i) swp.push_back(i);
    swp.push_back(2 * n);
    const cplx a = pfaffian(k.principal(lead)), b = pfaffian(k.principal(swp));
    CHECK(std::abs(pre.leading[n - 1] - a) <= 1e-10 * std::abs(a));
    CHECK(std::abs(pre.swapped[n - 1] - b) <= 1e-10 * std::abs(b));
  }
}

TEST_CASE("operator strings and assembled matrices") {
  const ContractionTable t = build_table(fermi_sea(mp(0.8, 0.2, 60)));
  const SkewMatrix xx1 = assemble(StringKind::xx, 1, t);
  CHECK(xx1.dim() == 2);
  CHECK(xx1(0, 1) == t.contraction(Contraction::BA, 1));
  const SkewMatrix yy1 = assemble(StringKind::yy, 1, t);
  CHECK(yy1(0, 1) == t.contraction(Contraction::AB, 1));

  const ContractionTable t0 = build_table(fermi_sea(mp(0, 0, 60)));
  const SkewMatrix xx3 = assemble(StringKind::xx, 3, t0);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) CHECK(std::abs(xx3(i, j).imag()) < 1e-14);

  auto s = operator_string(StringKind::xy, 3);
  REQUIRE(s.sequence.size() == 6);
  CHECK(s.sequence.front().site == 0);
  CHECK(s.sequence.back().site == 3);
  CHECK_THROWS_AS(assemble(StringKind::xx, 60, t), InvalidArgument);
}

TEST_CASE("transverse correlators: limits and ED") {
  const ContractionTable xx = build_table(fermi_sea(mp(0, 0, 2000)));
  CHECK(std::abs(spin_correlator(StringKind::xx, 1, xx) - 1 / (2 * kPi)) < 1e-3);

  const ContractionTable pm = build_table(fermi_sea(mp(1.3, 3, 50)));
  for (int n = 1; n < 50; ++n) CHECK(std::abs(spin_correlator(StringKind::xx, n, pm)) < 1e-15);

  const ModelParams p = mp(0.5, 0.3, 12);
  const ContractionTable t = build_table(fermi_sea(p));
  const auto ed = ed_metrics(ground_state(p));
  CHECK(std::abs(spin_correlator(StringKind::xx, 1, t) - ed.gxx1) < 0.05);
  CHECK(std::abs(spin_correlator(StringKind::xy, 1, t) - ed.gxy1) < 0.05);
  CHECK(std::abs(spin_correlator(StringKind::xy, 1, t) + spin_correlator(StringKind::yx, 1, t) -
                 (ed.gxy1 + ed.gyx1)) < 0.05);
}

TEST_CASE("nested engine equals the per-distance path") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> ua(0, 3), uh(0, 2);
  for (int it = 0; it < 6; ++it) {
    const int n = 40 + 10 * it;
    const ContractionTable t = build_table(fermi_sea(mp(ua(rng), uh(rng), n)));
    const auto tc = transverse_correlators(t, n - 1);
    CHECK(tc.forced_pivots == 0);
    for (int d = 1; d < n; d += 3) {
      CHECK(std::abs(tc.gxx[d - 1] - spin_correlator(StringKind::xx, d, t)) < 1e-10);
      CHECK(std::abs(tc.gyy[d - 1] - spin_correlator(StringKind::yy, d, t)) < 1e-10);
      CHECK(std::abs(tc.gxy[d - 1] - spin_correlator(StringKind::xy, d, t)) < 1e-10);
      CHECK(std::abs(tc.gyx[d - 1] - spin_correlator(StringKind::yx, d, t)) < 1e-10);
      // A <-> B symmetry of the strings
      CHECK(tc.gyy[d - 1] == tc.gxx[d - 1]);
      CHECK(tc.gyx[d - 1] == -tc.gxy[d - 1]);
    }
  }
}
