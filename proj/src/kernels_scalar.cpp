#include "xxtsi/kernels.hpp"

namespace xxtsi::kernels::scalar {

// reference versions; spelled out in real arithmetic so the compiler does
// not route through the NaN-checking complex multiply
void axpy2(cplx* dst, const cplx* y1, const cplx* y2, cplx a1, cplx a2, std::size_t n) {
  const double a1r = a1.real(), a1i = a1.imag();
  const double a2r = a2.real(), a2i = a2.imag();
  double* d = reinterpret_cast<double*>(dst);
  const double* p = reinterpret_cast<const double*>(y1);
  const double* q = reinterpret_cast<const double*>(y2);
  for (std::size_t i = 0; i < n; ++i) {
    const double pr = p[2 * i], pi = p[2 * i + 1];
    const double qr = q[2 * i], qi = q[2 * i + 1];
    d[2 * i] += (a1r * pr - a1i * pi) + (a2r * qr - a2i * qi);
    d[2 * i + 1] += (a1r * pi + a1i * pr) + (a2r * qi + a2i * qr);
  }
}

std::size_t argmax_norm(const cplx* x, std::size_t n) {
  std::size_t best = 0;
  double bv = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    if (v > bv) {
      bv = v;
      best = i;
    }
  }
  return best;
}

}  // namespace xxtsi::kernels::scalar
