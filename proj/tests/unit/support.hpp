#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the library beyond plain data types.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "xxtsi/model.hpp"

namespace testsupport {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

// (1/N) sum over occupied momenta of exp(-i k r), term by term
inline cplx naive_f(const xxtsi::FermiSea& sea, int r) {
  cplx s = 0;
  for (double k : sea.occupied) s += std::polar(1.0, -k * r);
  return s / static_cast<double>(sea.grid.n_sites);
}

// spin-1/2 operators S^a = sigma^a / 2 on a full 2^N vector, site i is bit i
inline Eigen::VectorXcd apply_spin(const Eigen::VectorXcd& psi, char a, int site) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  const std::uint64_t m = std::uint64_t{1} << site;
  for (Eigen::Index x = 0; x < psi.size(); ++x) {
    const auto s = static_cast<std::uint64_t>(x);
    const bool up = s & m;
    switch (a) {
      case 'x': out[static_cast<Eigen::Index>(s ^ m)] += 0.5 * psi[x]; break;
      case 'y': out[static_cast<Eigen::Index>(s ^ m)] += (up ? cplx(0, 0.5) : cplx(0, -0.5)) * psi[x]; break;
      case 'z': out[x] += (up ? 0.5 : -0.5) * psi[x]; break;
    }
  }
  return out;
}

inline Eigen::VectorXcd collective(const Eigen::VectorXcd& psi, int n, char a) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (int i = 0; i < n; ++i) out += apply_spin(psi, a, i);
  return out;
}

// min over in-plane angle phi of 4 Var(J_phi) / N, J_phi = cos phi Jx + sin phi Jy,
// by a dense scan followed by golden-section polish
inline double ssp_by_angle_scan(const Eigen::VectorXcd& psi, int n) {
  const Eigen::VectorXcd jx = collective(psi, n, 'x'), jy = collective(psi, n, 'y');
  auto var = [&](double phi) {
    const Eigen::VectorXcd v = std::cos(phi) * jx + std::sin(phi) * jy;
    const double mean = psi.dot(v).real();
    return 4.0 * (v.squaredNorm() - mean * mean) / n;
  };
  double best = 1e300, at = 0;
  for (int i = 0; i < 720; ++i) {
    const double phi = kPi * i / 720.0;
    const double v = var(phi);
    if (v < best) best = v, at = phi;
  }
  double lo = at - kPi / 720, hi = at + kPi / 720;
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 60; ++it) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (var(a) < var(b)) hi = b;
    else lo = a;
  }
  return std::min(best, var(0.5 * (lo + hi)));
}

// values of g at local extrema found by dense cyclic sampling
inline std::vector<double> sampled_extrema(double alpha, int samples) {
  std::vector<double> g(samples);
  for (int i = 0; i < samples; ++i) {
    const double k = -kPi + 2 * kPi * i / samples;
    g[i] = -std::cos(k) + 0.5 * alpha * std::sin(2 * k);
  }
  std::vector<double> out;
  for (int i = 0; i < samples; ++i) {
    const double a = g[(i + samples - 1) % samples], b = g[i], c = g[(i + 1) % samples];
    if ((b > a && b >= c) || (b < a && b <= c)) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// sign changes of eps(k) around the circle on a dense grid
inline int dense_sign_changes(double alpha, double h, int samples) {
  int count = 0;
  auto eps = [&](int i) {
    const double k = -kPi + 2 * kPi * (i + 0.5) / samples;
    return -(h + std::cos(k) - 0.5 * alpha * std::sin(2 * k));
  };
  double prev = eps(samples - 1);
  for (int i = 0; i < samples; ++i) {
    const double e = eps(i);
    if ((e < 0) != (prev < 0)) ++count;
    prev = e;
  }
  return count;
}

inline Eigen::MatrixXcd random_skew(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = cplx(d(rng), d(rng));
      a(j, i) = -a(i, j);
    }
  return a;
}

// least-squares slope of y against x
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= y.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
  return sxy / sxx;
}

}  // namespace testsupport
