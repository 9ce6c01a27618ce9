#include "xxtsi/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "xxtsi/correlators.hpp"
#include "xxtsi/error.hpp"
#include "xxtsi/observables.hpp"

namespace xxtsi {

using cplx = std::complex<double>;

namespace {

struct Op {
  char kind;  // x y z
  int site;
};

struct Term {
  double coef;
  std::vector<Op> ops;  // product, rightmost acts first
};

// half-scaled Pauli action on a single basis state
inline void apply(const Op& op, std::uint32_t& s, cplx& c) {
  const std::uint32_t m = 1u << op.site;
  const bool up = (s & m) != 0;
  switch (op.kind) {
    case 'x': s ^= m; c *= 0.5; break;
    case 'y': s ^= m; c *= up ? cplx(0, 0.5) : cplx(0, -0.5); break;
    case 'z': c *= up ? 0.5 : -0.5; break;
    default: throw InvalidArgument("oracle: unknown operator");
  }
}

std::vector<Term> hamiltonian_terms(const ModelParams& p) {
  const int n = p.n_sites;
  const double js = p.alpha * p.j;
  std::vector<Term> t;
  for (int a = 0; a < n; ++a) {
    const int b = (a + 1) % n, c = (a + 2) % n;
    t.push_back({-p.j, {{'x', a}, {'x', b}}});
    t.push_back({-p.j, {{'y', a}, {'y', b}}});
    if (js != 0.0) {
      // -J* S^z_{n+1} (S^x_n S^y_{n+2} - S^y_n S^x_{n+2})
      t.push_back({-js, {{'z', b}, {'x', a}, {'y', c}}});
      t.push_back({js, {{'z', b}, {'y', a}, {'x', c}}});
    }
    if (p.h != 0.0) t.push_back({-p.j * p.h, {{'z', a}}});
  }
  return t;
}

void check_oracle_params(const ModelParams& p) {
  p.validate();
  if (p.n_sites > kOracleMaxSites)
    throw InvalidArgument("oracle: n_sites=" + std::to_string(p.n_sites) + " exceeds " +
                          std::to_string(kOracleMaxSites));
}

}  // namespace

SpinBasisSector SpinBasisSector::make(int n_sites, int n_up) {
  if (n_sites < 1 || n_sites > 30 || n_up < 0 || n_up > n_sites)
    throw InvalidArgument("SpinBasisSector: bad sector");
  SpinBasisSector s;
  s.n_sites = n_sites;
  s.n_up = n_up;
  const std::uint32_t end = 1u << n_sites;
  for (std::uint32_t x = 0; x < end; ++x)
    if (std::popcount(x) == n_up) s.states.push_back(x);
  return s;
}

long SpinBasisSector::index_of(std::uint32_t x) const {
  auto it = std::lower_bound(states.begin(), states.end(), x);
  if (it == states.end() || *it != x) return -1;
  return static_cast<long>(it - states.begin());
}

Eigen::MatrixXcd build_hamiltonian(const ModelParams& p, const SpinBasisSector& sector) {
  check_oracle_params(p);
  if (sector.n_sites != p.n_sites) throw InvalidArgument("build_hamiltonian: sector mismatch");
  const auto terms = hamiltonian_terms(p);
  const long dim = static_cast<long>(sector.states.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);

  // full-space scratch so that leaks out of the sector are visible
  std::vector<cplx> scratch(std::size_t{1} << p.n_sites);
  std::vector<std::uint32_t> touched;
  for (long col = 0; col < dim; ++col) {
    for (const Term& t : terms) {
      std::uint32_t s = sector.states[col];
      cplx c = t.coef;
      for (auto it = t.ops.rbegin(); it != t.ops.rend(); ++it) apply(*it, s, c);
      if (scratch[s] == cplx{}) touched.push_back(s);
      scratch[s] += c;
    }
    for (std::uint32_t s : touched) {
      const cplx v = scratch[s];
      scratch[s] = {};
      if (v == cplx{}) continue;
      const long row = sector.index_of(s);
      if (row < 0) {
        if (std::abs(v) > 1e-14) throw NumericalFailure("build_hamiltonian: term leaks out of the sector");
        continue;
      }
      h(row, col) += v;
    }
    touched.clear();
  }
  return h;
}

Eigen::MatrixXcd build_full_hamiltonian(const ModelParams& p) {
  check_oracle_params(p);
  if (p.n_sites > 10) throw InvalidArgument("build_full_hamiltonian: n_sites > 10");
  const auto terms = hamiltonian_terms(p);
  const long dim = 1L << p.n_sites;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (long col = 0; col < dim; ++col)
    for (const Term& t : terms) {
      std::uint32_t s = static_cast<std::uint32_t>(col);
      cplx c = t.coef;
      for (auto it = t.ops.rbegin(); it != t.ops.rend(); ++it) apply(*it, s, c);
      h(s, col) += c;
    }
  return h;
}

GroundStateED ground_state(const ModelParams& p) {
  check_oracle_params(p);
  double e0 = std::numeric_limits<double>::infinity();
  double e1 = e0;
  int best = -1;
  for (int up = 0; up <= p.n_sites; ++up) {
    SpinBasisSector sec = SpinBasisSector::make(p.n_sites, up);
    Eigen::MatrixXcd h = build_hamiltonian(p, sec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalFailure("ground_state: eigensolve failed");
    const auto& ev = es.eigenvalues();
    for (long i = 0; i < ev.size() && i < 2; ++i) {
      const double e = ev[i];
      if (e < e0) {
        e1 = e0;
        e0 = e;
        best = up;
      } else if (e < e1) {
        e1 = e;
      }
    }
  }
  GroundStateED gs;
  gs.params = p;
  gs.n_sites = p.n_sites;
  gs.n_up = best;
  SpinBasisSector sec = SpinBasisSector::make(p.n_sites, best);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(build_hamiltonian(p, sec));
  gs.energy = es.eigenvalues()[0];
  gs.amplitudes = es.eigenvectors().col(0);
  gs.amplitudes /= gs.amplitudes.norm();
  gs.gap = e1 - e0;
  gs.degenerate = !(gs.gap >= 1e-10);
  return gs;
}

Eigen::VectorXcd full_state(const GroundStateED& gs) {
  SpinBasisSector sec = SpinBasisSector::make(gs.n_sites, gs.n_up);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(1L << gs.n_sites);
  for (std::size_t a = 0; a < sec.states.size(); ++a) psi[sec.states[a]] = gs.amplitudes[a];
  return psi;
}

cplx ed_correlator(const Eigen::VectorXcd& psi, int n_sites, char a, int i, char b, int j) {
  const long dim = 1L << n_sites;
  cplx acc = 0;
  for (long x = 0; x < dim; ++x) {
    if (psi[x] == cplx{}) continue;
    std::uint32_t s = static_cast<std::uint32_t>(x);
    cplx c = psi[x];
    apply({b, j}, s, c);
    apply({a, i}, s, c);
    acc += std::conj(psi[s]) * c;
  }
  return acc;
}

double ed_block_entropy(const Eigen::VectorXcd& psi, int n_sites, int l) {
  if (l < 1 || l > n_sites - 1) throw InvalidArgument("ed_block_entropy: bad block length");
  // sites 0..l-1 are the low bits, so column-major reshape splits them off
  Eigen::Map<const Eigen::MatrixXcd> m(psi.data(), 1L << l, 1L << (n_sites - l));
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  double s = 0;
  for (long i = 0; i < svd.singularValues().size(); ++i) {
    const double p = svd.singularValues()[i] * svd.singularValues()[i];
    if (p > 1e-300) s -= p * std::log(p);
  }
  return s;
}

Eigen::Matrix4cd ed_two_site_rdm(const Eigen::VectorXcd& psi, int n_sites, int i, int j) {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  const std::uint32_t mi = 1u << i, mj = 1u << j;
  const long dim = 1L << n_sites;
  for (long x = 0; x < dim; ++x) {
    const std::uint32_t s = static_cast<std::uint32_t>(x);
    if (psi[x] == cplx{}) continue;
    const int a = ((s & mi) ? 2 : 0) + ((s & mj) ? 1 : 0);
    const std::uint32_t rest = s & ~(mi | mj);
    for (int b = 0; b < 4; ++b) {
      const std::uint32_t t = rest | ((b & 2) ? mi : 0) | ((b & 1) ? mj : 0);
      rho(a, b) += psi[x] * std::conj(psi[t]);
    }
  }
  return rho;
}

double wootters_concurrence(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix2cd sy;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  Eigen::Matrix4cd yy;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) yy(2 * a + c, 2 * b + d) = sy(a, b) * sy(c, d);
  const Eigen::Matrix4cd tilde = yy * rho.conjugate() * yy;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
  Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::Matrix4cd sq = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  Eigen::Matrix4cd r = sq * tilde * sq;
  r = 0.5 * (r + r.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> er(r, Eigen::EigenvaluesOnly);
  Eigen::Vector4d lam = er.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(lam.data(), lam.data() + 4, std::greater<double>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

EdMetrics ed_metrics(const GroundStateED& gs) {
  if (gs.degenerate) throw InvalidArgument("ed_metrics: degenerate ground state");
  const int n = gs.n_sites;
  const Eigen::VectorXcd psi = full_state(gs);
  EdMetrics m;
  m.energy_per_site = gs.energy / n;
  m.mz = (gs.n_up - 0.5 * n) / n;
  m.gxx1 = ed_correlator(psi, n, 'x', 0, 'x', 1).real();
  m.gyy1 = ed_correlator(psi, n, 'y', 0, 'y', 1).real();
  m.gxy1 = ed_correlator(psi, n, 'x', 0, 'y', 1).real();
  m.gyx1 = ed_correlator(psi, n, 'y', 0, 'x', 1).real();
  m.gzz1 = ed_correlator(psi, n, 'z', 0, 'z', 1).real();

  // collective spin moments
  const long dim = psi.size();
  Eigen::VectorXcd jx = Eigen::VectorXcd::Zero(dim), jy = Eigen::VectorXcd::Zero(dim);
  for (long x = 0; x < dim; ++x) {
    if (psi[x] == cplx{}) continue;
    for (int i = 0; i < n; ++i) {
      std::uint32_t s = static_cast<std::uint32_t>(x);
      cplx c = psi[x];
      apply({'x', i}, s, c);
      jx[s] += c;
      s = static_cast<std::uint32_t>(x);
      c = psi[x];
      apply({'y', i}, s, c);
      jy[s] += c;
    }
  }
  const double axx = jx.squaredNorm(), ayy = jy.squaredNorm();
  const double axy = 2.0 * jx.dot(jy).real();  // <JxJy + JyJx>
  const double mx = psi.dot(jx).real(), my = psi.dot(jy).real();
  const double vxx = axx - mx * mx, vyy = ayy - my * my, vxy = axy - 2 * mx * my;
  m.ssp = (2.0 / n) * (vxx + vyy - std::sqrt((vxx - vyy) * (vxx - vyy) + vxy * vxy));

  m.ee_blocks.resize(n - 1);
  for (int l = 1; l < n; ++l) m.ee_blocks[l - 1] = ed_block_entropy(psi, n, l);
  m.ee_half = m.ee_blocks[n / 2 - 1];
  m.conc_nn = wootters_concurrence(ed_two_site_rdm(psi, n, 0, 1));
  m.conc_nnn = wootters_concurrence(ed_two_site_rdm(psi, n, 0, 2));
  const double l1 = psi.cwiseAbs().sum();
  m.c_l1_exact = l1 * l1 - 1.0;
  m.wineland = std::abs(m.mz) > 1e-9 ? m.ssp / (4 * m.mz * m.mz) : std::numeric_limits<double>::quiet_NaN();
  return m;
}

double oracle_tolerance(const ModelParams& p) {
  try {
    if (classify_phase(p).phase == Phase::PM) return 1e-10;
  } catch (const DegenerateClassification&) {
  }
  return (p.alpha >= 1.5 ? 0.96 : 0.6) / p.n_sites;
}

std::vector<ComparisonRow> compare_report(const std::vector<ModelParams>& points) {
  std::vector<ComparisonRow> rows;
  for (const ModelParams& p : points) {
    check_oracle_params(p);
    ComparisonRow row;
    row.params = p;
    row.tolerance = oracle_tolerance(p);
    row.names = {"energy", "mz", "gxx1", "gyy1", "gxy1", "gzz1", "ssp", "ee_half", "conc_nn"};
    GroundStateED gs = ground_state(p);
    const FermiSea sea = fermi_sea(p);
    if (gs.degenerate || sea.degenerate) {
      row.skipped = true;
      row.note = gs.degenerate ? "skipped: degenerate" : "skipped: degenerate fermi sea";
      rows.push_back(std::move(row));
      continue;
    }
    const EdMetrics ed = ed_metrics(gs);
    const ContractionTable t = build_table(sea);
    const int n = p.n_sites;
    const SpinCorrelators c = compute_spin_correlators(t, n - 1);
    // the field term carries a constant j h N / 2 that the mode sum drops
    const double e_f = ground_energy_per_site(p, sea) + 0.5 * p.j * p.h;
    row.fermion = {e_f, c.mz, c.xx(1), c.yy(1), c.xy(1), c.zz(1), spin_squeezing(c, n),
                   entanglement_entropy(t, n / 2), concurrence(two_site_rdm(c, c.mz, 1))};
    row.ed = {ed.energy_per_site, ed.mz, ed.gxx1, ed.gyy1, ed.gxy1, ed.gzz1, ed.ssp, ed.ee_half, ed.conc_nn};
    row.pass = true;
    for (std::size_t i = 0; i < row.names.size(); ++i) {
      const double d = std::abs(row.fermion[i] - row.ed[i]);
      row.delta.push_back(d);
      row.max_delta = std::max(row.max_delta, d);
      if (!(d <= row.tolerance)) row.pass = false;
    }
    row.note = row.pass ? "pass" : "fail";
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace xxtsi
