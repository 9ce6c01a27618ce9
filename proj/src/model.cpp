#include "xxtsi/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "xxtsi/error.hpp"

namespace xxtsi {

namespace {

constexpr double kPi = std::numbers::pi;

double tie_scale(const ModelParams& p) {
  return kTieTolerance * p.j * (1.0 + std::abs(p.h) + std::abs(p.alpha));
}

double dg(double alpha, double k) { return std::sin(k) + alpha * std::cos(2 * k); }
double d2g(double alpha, double k) { return std::cos(k) - 2 * alpha * std::sin(2 * k); }

template <class F>
double bisect(F&& f, double lo, double hi, double flo) {
  while (hi - lo > 1e-13) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Roots of f over one period, sampled from a shifted origin so that the
// symmetric points 0, +-pi/2, pi never sit on a bracket edge.
template <class F>
std::vector<double> periodic_roots(F&& f, const std::vector<double>& extra_breaks) {
  constexpr int kSamples = 4096;
  constexpr double kShift = 0.0123456789;
  std::vector<double> br;
  br.reserve(kSamples + 1 + extra_breaks.size());
  for (int i = 0; i <= kSamples; ++i) br.push_back(-kPi + kShift + 2 * kPi * i / kSamples);
  for (double e : extra_breaks) {
    double x = e;
    while (x < br.front()) x += 2 * kPi;
    while (x > br.back()) x -= 2 * kPi;
    br.push_back(x);
  }
  std::sort(br.begin(), br.end());

  std::vector<double> roots;
  double flo = f(br[0]);
  for (size_t i = 0; i + 1 < br.size(); ++i) {
    double lo = br[i], hi = br[i + 1];
    double fhi = f(hi);
    if (flo == 0.0) {
      roots.push_back(lo);
    } else if ((flo < 0) != (fhi < 0) && fhi != 0.0) {
      roots.push_back(bisect(f, lo, hi, flo));
    }
    flo = fhi;
  }
  for (double& r : roots) {
    while (r <= -kPi) r += 2 * kPi;
    while (r > kPi) r -= 2 * kPi;
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots)
    if (out.empty() || r - out.back() > 1e-9) out.push_back(r);
  if (out.size() > 1 && out.front() + 2 * kPi - out.back() < 1e-9) out.pop_back();
  return out;
}

// Stationary points of g sorted by k: sign-changing roots of g' plus
// flat inflections (g' = g'' = 0, e.g. alpha = 1 at k = pi/2).
std::vector<double> stationary_points(double alpha) {
  auto f2 = [alpha](double k) { return d2g(alpha, k); };
  std::vector<double> r2 = periodic_roots(f2, {});
  auto f1 = [alpha](double k) { return dg(alpha, k); };
  std::vector<double> pts = periodic_roots(f1, r2);
  for (double k : r2)
    if (std::abs(dg(alpha, k)) < 1e-9) pts.push_back(k);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double k : pts)
    if (out.empty() || k - out.back() > 1e-7) out.push_back(k);
  if (out.size() > 1 && out.front() + 2 * kPi - out.back() < 1e-7) out.pop_back();
  return out;
}

struct SectorFill {
  std::vector<std::uint8_t> mask;
  double energy = 0.0;
  bool degenerate = false;
  bool valid = false;
};

// Lowest-energy configuration on `eps` whose particle number has the
// requested parity (-1 = any).
SectorFill fill_sector(const std::vector<double>& eps, int parity, double tol) {
  SectorFill s;
  const size_t n = eps.size();
  s.mask.assign(n, 0);
  int count = 0;
  for (size_t i = 0; i < n; ++i)
    if (eps[i] < -tol) {
      s.mask[i] = 1;
      ++count;
    }
  if (parity >= 0 && (count & 1) != parity) {
    // cheapest single toggle
    double best_add = std::numeric_limits<double>::infinity();
    double best_rem = std::numeric_limits<double>::infinity();
    size_t ia = n, ir = n;
    for (size_t i = 0; i < n; ++i) {
      if (!s.mask[i] && eps[i] < best_add) best_add = eps[i], ia = i;
      if (s.mask[i] && -eps[i] < best_rem) best_rem = -eps[i], ir = i;
    }
    if (ia == n && ir == n) return s;
    if (ia != n && (ir == n || best_add <= best_rem)) {
      s.mask[ia] = 1;
    } else {
      s.mask[ir] = 0;
    }
  }
  s.valid = true;
  for (size_t i = 0; i < n; ++i)
    if (s.mask[i]) s.energy += eps[i];

  // cheapest excitation that keeps the parity: a swap, or two adds, or two
  // removals
  double u1 = std::numeric_limits<double>::infinity(), u2 = u1;
  double o1 = -u1, o2 = -u1;
  for (size_t i = 0; i < n; ++i) {
    if (s.mask[i]) {
      if (eps[i] > o1) o2 = o1, o1 = eps[i];
      else if (eps[i] > o2) o2 = eps[i];
    } else {
      if (eps[i] < u1) u2 = u1, u1 = eps[i];
      else if (eps[i] < u2) u2 = eps[i];
    }
  }
  double gap = std::numeric_limits<double>::infinity();
  if (std::isfinite(u1) && std::isfinite(o1)) gap = std::min(gap, u1 - o1);
  if (parity >= 0) {
    if (std::isfinite(u2)) gap = std::min(gap, u1 + u2);
    if (std::isfinite(o2)) gap = std::min(gap, -(o1 + o2));
  } else {
    if (std::isfinite(u1)) gap = std::min(gap, u1);
    if (std::isfinite(o1)) gap = std::min(gap, -o1);
  }
  s.degenerate = gap <= tol;
  return s;
}

FermiSea make_sea(MomentumGrid grid, std::vector<std::uint8_t> mask, bool degenerate) {
  FermiSea sea;
  for (size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) sea.occupied.push_back(grid.k_values[i]);
  sea.filling = static_cast<double>(sea.occupied.size()) / grid.n_sites;
  sea.grid = std::move(grid);
  sea.occupied_mask = std::move(mask);
  sea.degenerate = degenerate;
  return sea;
}

}  // namespace

const char* to_string(Boundary b) {
  return b == Boundary::parity_exact ? "exact" : "grid";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "exact" || s == "parity_exact") return Boundary::parity_exact;
  if (s == "grid" || s == "paper_grid") return Boundary::paper_grid;
  throw InvalidArgument("unknown boundary mode '" + s + "' (expected exact|grid)");
}

const char* to_string(Phase p) {
  switch (p) {
    case Phase::PM: return "PM";
    case Phase::SL_I: return "SL_I";
    case Phase::SL_II: return "SL_II";
  }
  return "?";
}

void ModelParams::validate() const {
  if (!(j > 0) || !std::isfinite(j)) throw InvalidArgument("j must be positive and finite");
  if (!std::isfinite(alpha) || alpha < 0) throw InvalidArgument("alpha must be finite and >= 0");
  // negative h is allowed: h << -1 gives the empty sea
  if (!std::isfinite(h)) throw InvalidArgument("h must be finite");
  if (n_sites < 3) throw InvalidArgument("n_sites must be >= 3");
}

double dispersion(const ModelParams& p, double k) {
  return -p.j * (p.h + std::cos(k) - 0.5 * p.alpha * std::sin(2 * k));
}

double band_function(double alpha, double k) {
  return -std::cos(k) + 0.5 * alpha * std::sin(2 * k);
}

MomentumGrid build_grid(int n_sites, Twist twist) {
  if (n_sites < 3) throw InvalidArgument("build_grid: n_sites must be >= 3");
  MomentumGrid g;
  g.n_sites = n_sites;
  g.twist = twist;
  g.q.reserve(n_sites);
  if (twist == Twist::periodic) {
    g.denom = n_sites;
    // k in (-pi, pi]: m from -(ceil(N/2)-1) to floor(N/2)
    for (int m = -((n_sites + 1) / 2 - 1); m <= n_sites / 2; ++m) g.q.push_back(m);
  } else {
    g.denom = 2 * n_sites;
    // odd q in (-N, N]
    int lo = -n_sites + 1;
    if ((lo & 1) == 0) ++lo;
    for (int q = lo; q <= n_sites; q += 2) g.q.push_back(q);
  }
  g.k_values.reserve(n_sites);
  for (int q : g.q) g.k_values.push_back(2 * kPi * q / g.denom);
  return g;
}

FermiSea fermi_sea(const ModelParams& p) {
  p.validate();
  const double tol = tie_scale(p);
  auto energies = [&](const MomentumGrid& g) {
    std::vector<double> e(g.k_values.size());
    for (size_t i = 0; i < e.size(); ++i) e[i] = dispersion(p, g.k_values[i]);
    return e;
  };

  if (p.boundary == Boundary::paper_grid) {
    MomentumGrid g = build_grid(p.n_sites, Twist::periodic);
    SectorFill s = fill_sector(energies(g), -1, tol);
    return make_sea(std::move(g), std::move(s.mask), s.degenerate);
  }

  MomentumGrid gp = build_grid(p.n_sites, Twist::periodic);
  MomentumGrid ga = build_grid(p.n_sites, Twist::antiperiodic);
  SectorFill sp = fill_sector(energies(gp), 1, tol);  // periodic <-> odd N_f
  SectorFill sa = fill_sector(energies(ga), 0, tol);  // antiperiodic <-> even N_f
  if (!sp.valid) return make_sea(std::move(ga), std::move(sa.mask), sa.degenerate);
  if (!sa.valid) return make_sea(std::move(gp), std::move(sp.mask), sp.degenerate);
  const double etol = tol * p.n_sites + 1e-12;
  if (std::abs(sp.energy - sa.energy) <= etol) {
    // sectors tie; keep the paper's grid for determinism
    return make_sea(std::move(gp), std::move(sp.mask), true);
  }
  if (sp.energy < sa.energy) return make_sea(std::move(gp), std::move(sp.mask), sp.degenerate);
  return make_sea(std::move(ga), std::move(sa.mask), sa.degenerate);
}

double ground_energy_per_site(const ModelParams& p, const FermiSea& sea) {
  double e = 0.0;
  for (double k : sea.occupied) e += dispersion(p, k);
  return e / sea.grid.n_sites;
}

double ground_energy_per_site(const ModelParams& p) {
  return ground_energy_per_site(p, fermi_sea(p));
}

double magnetization_z(const ModelParams& p) { return fermi_sea(p).filling - 0.5; }

PhaseLabel classify_phase(const ModelParams& p) {
  p.validate();
  std::vector<double> st = stationary_points(p.alpha);
  std::vector<double> gv;
  for (double k : st) {
    double g = band_function(p.alpha, k);
    if (std::abs(g - p.h) < 1e-9)
      throw DegenerateClassification("classify_phase: h=" + std::to_string(p.h) +
                                     " sits on a critical field at alpha=" +
                                     std::to_string(p.alpha));
    gv.push_back(g);
  }
  // g is monotone between consecutive stationary points, so each arc
  // crosses the level h at most once
  int count = 0;
  const size_t m = gv.size();
  for (size_t i = 0; i < m; ++i) {
    double a = gv[i], b = gv[(i + 1) % m];
    if ((a < p.h) != (b < p.h)) ++count;
  }
  PhaseLabel lab;
  lab.fermi_point_count = count;
  switch (count) {
    case 0: lab.phase = Phase::PM; break;
    case 2: lab.phase = Phase::SL_I; break;
    case 4: lab.phase = Phase::SL_II; break;
    default:
      throw NumericalFailure("classify_phase: unexpected Fermi point count " +
                             std::to_string(count));
  }
  return lab;
}

std::vector<double> critical_fields(double alpha) {
  if (!(alpha >= 0) || !std::isfinite(alpha)) throw InvalidArgument("critical_fields: alpha must be >= 0");
  std::vector<double> vals;
  for (double k : stationary_points(alpha)) {
    double g = band_function(alpha, k);
    if (g >= -1e-12) vals.push_back(std::max(g, 0.0));
  }
  std::sort(vals.begin(), vals.end());
  std::vector<double> out;
  for (double v : vals)
    if (out.empty() || v - out.back() > 1e-9) out.push_back(v);
  return out;
}

}  // namespace xxtsi
