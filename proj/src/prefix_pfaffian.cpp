// Nested prefix Pfaffians in O(m^3).
//
// Eliminating the leading 2n indices of K one pair at a time in natural
// order (no pivoting) gives every Pf(K[0..2n)) as a running product, but
// the pivots can be arbitrarily small and the error grows exponentially.
// Instead indices are absorbed into a pending set R and a pair (i, j) from
// R is eliminated only once |S_ij| is a decent fraction of the row maxima
// of i and j over every live column. Since all of R precedes the unabsorbed
// tail, each prefix Pfaffian is acc * Pf(S[R + new]) with a tiny pivoted
// Pfaffian on the right. In practice |R| stays at 2-4.

#include <algorithm>
#include <cmath>
#include <string>

#include "xxtsi/error.hpp"
#include "xxtsi/kernels.hpp"
#include "xxtsi/pfaffian.hpp"

namespace xxtsi {

namespace {

class Eliminator {
 public:
  Eliminator(const SkewMatrix& k, PrefixOptions opt) : s_(k), opt_(opt) {}

  cplx prefix_pf(int extra0, int extra1) const {
    std::vector<int> idx = pending_;
    idx.push_back(extra0);
    idx.push_back(extra1);
    const int m = static_cast<int>(idx.size());
    SkewMatrix small(m);
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) *small.at(a, b) = s_(idx[a], idx[b]);
    return acc_ * pfaffian(small);
  }

  void absorb(int i0, int i1, int next) {
    pending_.push_back(i0);
    pending_.push_back(i1);
    next_ = next;
    max_deferred_ = std::max(max_deferred_, static_cast<int>(pending_.size()));
  }

  void reduce() {
    while (pending_.size() >= 2) {
      const int r = static_cast<int>(pending_.size());
      std::vector<double> rowmax(r, 0.0);
      const int tail = s_.dim() - next_;
      for (int a = 0; a < r; ++a) {
        const int i = pending_[a];
        double mx = tail > 0 ? kernels::max_abs(s_.at(i, next_), tail) : 0.0;
        for (int b = 0; b < r; ++b)
          if (b != a) mx = std::max(mx, std::abs(s_(i, pending_[b])));
        rowmax[a] = mx;
      }
      int ba = -1, bb = -1;
      double best = 0.0;
      for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b) {
          const double v = std::abs(s_(pending_[a], pending_[b]));
          if (v == 0.0) continue;
          const double ratio = v / std::max(rowmax[a], rowmax[b]);
          if (ratio > best) best = ratio, ba = a, bb = b;
        }
      if (ba < 0) return;
      if (best < opt_.threshold) {
        if (r <= opt_.max_deferred) return;
        ++forced_;
      }
      eliminate(ba, bb);
    }
  }

  cplx acc() const { return acc_; }
  int max_deferred() const { return max_deferred_; }
  int forced() const { return forced_; }

 private:
  // pending positions pa < pb
  void eliminate(int pa, int pb) {
    const int i = pending_[pa], j = pending_[pb];
    const cplx a = *s_.at(i, j);
    const cplx inv = 1.0 / a;
    acc_ *= ((pa + pb - 1) % 2 == 0 ? 1.0 : -1.0) * a;

    std::vector<int> rest;
    for (int t = 0; t < static_cast<int>(pending_.size()); ++t)
      if (t != pa && t != pb) rest.push_back(pending_[t]);

    // coefficients from the pre-update values; entries touching i or j
    // are never modified below
    const int m = s_.dim();
    const int tail = m - next_;
    std::vector<cplx> x1(rest.size()), x2(rest.size());
    for (size_t t = 0; t < rest.size(); ++t) {
      x1[t] = s_(rest[t], i) * inv;
      x2[t] = -s_(rest[t], j) * inv;
    }
    // S_uv += (S_ui S_jv - S_uj S_iv) / a = x1_u S_jv + x2_u S_iv
    for (size_t t = 0; t < rest.size(); ++t) {
      const int u = rest[t];
      for (size_t w = t + 1; w < rest.size(); ++w) {
        const int v = rest[w];
        *s_.at(u, v) += x1[t] * s_(j, v) + x2[t] * s_(i, v);
      }
      if (tail > 0) kernels::axpy2(s_.at(u, next_), s_.at(j, next_), s_.at(i, next_), x1[t], x2[t], tail);
    }
    const cplx* ri = s_.at(i, next_);
    const cplx* rj = s_.at(j, next_);
    for (int u = next_; u < m - 1; ++u) {
      const cplx xu1 = -ri[u - next_] * inv;  // S_ui / a
      const cplx xu2 = rj[u - next_] * inv;   // -S_uj / a
      const int off = u + 1 - next_;
      kernels::axpy2(s_.row(u), rj + off, ri + off, xu1, xu2, m - u - 1);
    }
    pending_ = std::move(rest);
  }

  SkewMatrix s_;
  PrefixOptions opt_;
  std::vector<int> pending_;
  int next_ = 0;
  cplx acc_ = 1.0;
  int max_deferred_ = 0;
  int forced_ = 0;
};

}  // namespace

PrefixPfaffians prefix_pfaffians(const SkewMatrix& k, int count, PrefixOptions opt) {
  const int m = k.dim();
  if (count < 0 || 2 * count > m) throw InvalidArgument("prefix_pfaffians: count out of range");
  if (!k.finite()) throw InvalidArgument("prefix_pfaffians: non-finite entry");
  PrefixPfaffians out;
  out.leading.reserve(count);
  Eliminator el(k, opt);
  for (int n = 1; n <= count; ++n) {
    const int b0 = 2 * n - 2, b1 = 2 * n - 1;
    out.leading.push_back(el.prefix_pf(b0, b1));
    if (2 * n < m) out.swapped.push_back(el.prefix_pf(b0, 2 * n));
    if (n == count) break;
    el.absorb(b0, b1, 2 * n);
    el.reduce();
  }
  out.max_deferred = el.max_deferred();
  out.forced_pivots = el.forced();
  return out;
}

TransverseCorrelators transverse_correlators(const ContractionTable& t, int max_range) {
  const int n_sites = t.n_sites();
  if (max_range < 1 || max_range > n_sites - 1)
    throw InvalidArgument("transverse_correlators: range " + std::to_string(max_range) + " out of [1, N-1]");
  // xx chain: B0, A1, B1, A2, B2, ..., A_R, B_R
  const int dim = 2 * max_range + 1;
  auto site = [](int p) { return (p + 1) / 2; };
  auto is_a = [](int p) { return p % 2 == 1; };
  SkewMatrix k(dim, false);
  for (int p = 0; p < dim; ++p) {
    cplx* row = k.row(p);
    for (int q = p + 1; q < dim; ++q) {
      const int r = site(q) - site(p);
      Contraction c = is_a(p) ? (is_a(q) ? Contraction::AA : Contraction::AB)
                              : (is_a(q) ? Contraction::BA : Contraction::BB);
      row[q - p - 1] = t.contraction(c, r);
    }
  }
  PrefixPfaffians pp = prefix_pfaffians(k, max_range);

  TransverseCorrelators out;
  out.gxx.resize(max_range);
  out.gyy.resize(max_range);
  out.gxy.resize(max_range);
  out.gyx.resize(max_range);
  for (int n = 1; n <= max_range; ++n) {
    const cplx p = pp.leading[n - 1];
    const cplx q = pp.swapped[n - 1];
    // xx: P/4, xy: -i Q/4; yy and yx use Pf(-M) = (-1)^n Pf(M) on 2n x 2n,
    // which cancels the (-1)^n in their prefactors
    out.gxx[n - 1] = 0.25 * p.real();
    out.gyy[n - 1] = 0.25 * p.real();
    out.gxy[n - 1] = 0.25 * q.imag();
    out.gyx[n - 1] = -0.25 * q.imag();
    out.max_imag = std::max({out.max_imag, 0.25 * std::abs(p.imag()), 0.25 * std::abs(q.real())});
  }
  out.max_deferred = pp.max_deferred;
  out.forced_pivots = pp.forced_pivots;
  if (out.max_imag >= 1e-8)
    throw NumericalFailure("transverse_correlators: imaginary residue " + std::to_string(out.max_imag));
  return out;
}

}  // namespace xxtsi
