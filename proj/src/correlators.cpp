#include "xxtsi/correlators.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "xxtsi/error.hpp"

namespace xxtsi {

ContractionTable::ContractionTable(int n_sites, std::vector<cplx> f) : n_(n_sites), f_(std::move(f)) {
  if (static_cast<int>(f_.size()) != n_) throw InvalidArgument("ContractionTable: size mismatch");
}

cplx ContractionTable::f(int r) const {
  if (r <= -n_ || r >= n_)
    throw InvalidArgument("ContractionTable: separation " + std::to_string(r) + " out of range");
  return r >= 0 ? f_[r] : std::conj(f_[-r]);
}

cplx ContractionTable::contraction(Contraction kind, int r) const {
  const double d = r == 0 ? 1.0 : 0.0;
  switch (kind) {
    case Contraction::AA: return {d, -sin_sum(r)};
    case Contraction::BB: return {-d, sin_sum(r)};
    case Contraction::AB: return {d - cos_sum(r), 0.0};
    case Contraction::BA: return {-d + cos_sum(r), 0.0};
  }
  return {};
}

ContractionTable build_table(const FermiSea& sea) {
  const MomentumGrid& g = sea.grid;
  const int n = g.n_sites;
  const int M = g.denom;
  // exact phase table: every k r is 2 pi j / M for integer j
  std::vector<cplx> roots(M);
  for (int j = 0; j < M; ++j) {
    double th = -2.0 * std::numbers::pi * j / M;
    roots[j] = {std::cos(th), std::sin(th)};
  }
  std::vector<int> qs;
  for (size_t i = 0; i < g.q.size(); ++i)
    if (sea.occupied_mask[i]) qs.push_back(((g.q[i] % M) + M) % M);

  std::vector<cplx> f(n);
  for (int r = 0; r < n; ++r) {
    double re = 0, im = 0;
    for (int q : qs) {
      const cplx& w = roots[static_cast<long long>(q) * r % M];
      re += w.real();
      im += w.imag();
    }
    f[r] = {re / n, im / n};
  }
  // f(0) is the filling exactly
  f[0] = {static_cast<double>(qs.size()) / n, 0.0};
  return ContractionTable(n, std::move(f));
}

double zz_correlator(const ContractionTable& t, int r) {
  if (r < 1) throw InvalidArgument("zz_correlator: r must be >= 1");
  const double mz = t.mz();
  return mz * mz - std::norm(t.f(r));
}

}  // namespace xxtsi
