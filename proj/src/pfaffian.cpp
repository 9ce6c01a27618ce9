#include "xxtsi/pfaffian.hpp"

#include <cmath>
#include <string>

#include "xxtsi/error.hpp"
#include "xxtsi/kernels.hpp"

namespace xxtsi {

SkewMatrix::SkewMatrix(int dim, bool even_only) : dim_(dim) {
  if (dim < (even_only ? 2 : 1)) throw InvalidArgument("SkewMatrix: dim too small");
  if (even_only && dim % 2 != 0) throw InvalidArgument("SkewMatrix: dim must be even");
  data_.assign(static_cast<std::size_t>(dim) * (dim - 1) / 2, cplx{});
}

cplx SkewMatrix::operator()(int i, int j) const {
  if (i == j) return {};
  return i < j ? *at(i, j) : -*at(j, i);
}

void SkewMatrix::set(int i, int j, cplx v) {
  if (i == j) {
    if (v != cplx{}) throw InvalidArgument("SkewMatrix: diagonal must vanish");
    return;
  }
  if (i < j) *at(i, j) = v;
  else *at(j, i) = -v;
}

double SkewMatrix::max_norm() const {
  return kernels::max_abs(data_.data(), data_.size());
}

bool SkewMatrix::finite() const {
  for (const cplx& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

SkewMatrix SkewMatrix::principal(const std::vector<int>& idx) const {
  const int m = static_cast<int>(idx.size());
  SkewMatrix out(m, false);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) *out.at(a, b) = (*this)(idx[a], idx[b]);
  return out;
}

namespace {

// swap indices p < q in rows/cols >= from; entries above `from` are dead
void swap_indices(SkewMatrix& a, int p, int q, int from) {
  const int m = a.dim();
  for (int i = from; i < p; ++i) std::swap(*a.at(i, p), *a.at(i, q));
  for (int i = p + 1; i < q; ++i) {
    cplx t = *a.at(p, i);
    *a.at(p, i) = -*a.at(i, q);
    *a.at(i, q) = -t;
  }
  *a.at(p, q) = -*a.at(p, q);
  for (int i = q + 1; i < m; ++i) std::swap(*a.at(p, i), *a.at(q, i));
}

}  // namespace

cplx pfaffian(const SkewMatrix& in) {
  const int m = in.dim();
  if (m % 2 != 0) throw InvalidArgument("pfaffian: odd dimension");
  if (!in.finite()) throw InvalidArgument("pfaffian: non-finite entry");
  const double thresh = 1e-13 * in.max_norm();
  if (thresh == 0.0) return {};  // zero matrix

  SkewMatrix a = in;
  cplx pf = 1.0;
  for (int k = 0; k < m - 1; k += 2) {
    const int len = m - k - 1;
    const int p = k + 1 + static_cast<int>(kernels::argmax_norm(a.row(k), len));
    if (std::abs(*a.at(k, p)) < thresh) return {};
    if (p != k + 1) {
      swap_indices(a, k + 1, p, k);
      pf = -pf;
    }
    const cplx piv = *a.at(k, k + 1);
    pf *= piv;
    if (k + 2 >= m) break;
    const cplx inv = 1.0 / piv;
    const cplx* rk = a.row(k);       // rk[v-k-1] = A[k][v]
    const cplx* rk1 = a.row(k + 1);  // rk1[v-k-2] = A[k+1][v]
    for (int u = k + 2; u < m - 1; ++u) {
      const cplx x1 = -rk[u - k - 1] * inv;
      const cplx x2 = rk1[u - k - 2] * inv;
      kernels::axpy2(a.row(u), rk1 + (u + 1 - k - 2), rk + (u + 1 - k - 1), x1, x2, m - u - 1);
    }
  }
  return pf;
}

const char* to_string(StringKind k) {
  switch (k) {
    case StringKind::xx: return "xx";
    case StringKind::yy: return "yy";
    case StringKind::xy: return "xy";
    case StringKind::yx: return "yx";
  }
  return "?";
}

OperatorString operator_string(StringKind kind, int n) {
  if (n < 1) throw InvalidArgument("operator_string: n must be >= 1");
  const bool x_first = kind == StringKind::xx || kind == StringKind::xy;
  OperatorString s{kind, n, {}};
  s.sequence.reserve(2 * n);
  // x strings: B0, A1, B1, ..., A_{n-1}, B_{n-1}, then A_n (xx) or B_n (xy)
  // y strings: the same with A and B exchanged
  s.sequence.push_back({0, !x_first});
  for (int m = 1; m < n; ++m) {
    s.sequence.push_back({m, x_first});
    s.sequence.push_back({m, !x_first});
  }
  const bool last_a = kind == StringKind::xx || kind == StringKind::yx;
  s.sequence.push_back({n, last_a});
  return s;
}

static Contraction tag_pair(bool a_first, bool a_second) {
  if (a_first) return a_second ? Contraction::AA : Contraction::AB;
  return a_second ? Contraction::BA : Contraction::BB;
}

SkewMatrix assemble(StringKind kind, int n, const ContractionTable& t) {
  if (n < 1 || n > t.n_sites() - 1)
    throw InvalidArgument("assemble: n=" + std::to_string(n) + " out of range");
  OperatorString s = operator_string(kind, n);
  SkewMatrix a(2 * n);
  for (int i = 0; i < 2 * n; ++i)
    for (int j = i + 1; j < 2 * n; ++j) {
      const TaggedOp& p = s.sequence[i];
      const TaggedOp& q = s.sequence[j];
      *a.at(i, j) = t.contraction(tag_pair(p.is_a, q.is_a), q.site - p.site);
    }
  return a;
}

cplx prefactor(StringKind kind, int n) {
  const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
  switch (kind) {
    case StringKind::xx: return {0.25, 0.0};
    case StringKind::yy: return {0.25 * sgn, 0.0};
    case StringKind::xy: return {0.0, -0.25};
    case StringKind::yx: return {0.0, 0.25 * sgn};
  }
  return {};
}

double spin_correlator(StringKind kind, int n, const ContractionTable& t) {
  const cplx v = prefactor(kind, n) * pfaffian(assemble(kind, n, t));
  if (std::abs(v.imag()) >= 1e-8)
    throw NumericalFailure(std::string("spin_correlator: imaginary residue on G^") + to_string(kind) +
                           "_" + std::to_string(n) + " = " + std::to_string(v.imag()));
  return v.real();
}

}  // namespace xxtsi
