#include "xxtsi/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#include <immintrin.h>
#define XXTSI_HAVE_AVX2_PATH 1
#endif

namespace xxtsi::kernels::avx2 {

#ifdef XXTSI_HAVE_AVX2_PATH

bool available() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

// two complex numbers per register: [re0 im0 re1 im1]
__attribute__((target("avx2,fma")))
static inline __m256d cmul(__m256d ar, __m256d ai, __m256d y) {
  __m256d ys = _mm256_permute_pd(y, 0x5);  // [im re im re]
  // even lanes: ar*re - ai*im, odd lanes: ar*im + ai*re
  return _mm256_fmaddsub_pd(ar, y, _mm256_mul_pd(ai, ys));
}

__attribute__((target("avx2,fma")))
void axpy2(cplx* dst, const cplx* y1, const cplx* y2, cplx a1, cplx a2, std::size_t n) {
  double* d = reinterpret_cast<double*>(dst);
  const double* p = reinterpret_cast<const double*>(y1);
  const double* q = reinterpret_cast<const double*>(y2);
  const __m256d a1r = _mm256_set1_pd(a1.real()), a1i = _mm256_set1_pd(a1.imag());
  const __m256d a2r = _mm256_set1_pd(a2.real()), a2i = _mm256_set1_pd(a2.imag());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t0 = _mm256_add_pd(cmul(a1r, a1i, _mm256_loadu_pd(p + 2 * i)),
                               cmul(a2r, a2i, _mm256_loadu_pd(q + 2 * i)));
    __m256d t1 = _mm256_add_pd(cmul(a1r, a1i, _mm256_loadu_pd(p + 2 * i + 4)),
                               cmul(a2r, a2i, _mm256_loadu_pd(q + 2 * i + 4)));
    _mm256_storeu_pd(d + 2 * i, _mm256_add_pd(_mm256_loadu_pd(d + 2 * i), t0));
    _mm256_storeu_pd(d + 2 * i + 4, _mm256_add_pd(_mm256_loadu_pd(d + 2 * i + 4), t1));
  }
  for (; i + 2 <= n; i += 2) {
    __m256d t = _mm256_add_pd(cmul(a1r, a1i, _mm256_loadu_pd(p + 2 * i)),
                              cmul(a2r, a2i, _mm256_loadu_pd(q + 2 * i)));
    _mm256_storeu_pd(d + 2 * i, _mm256_add_pd(_mm256_loadu_pd(d + 2 * i), t));
  }
  if (i < n) scalar::axpy2(dst + i, y1 + i, y2 + i, a1, a2, n - i);
}

__attribute__((target("avx2,fma")))
std::size_t argmax_norm(const cplx* x, std::size_t n) {
  if (n < 8) return scalar::argmax_norm(x, n);
  const double* p = reinterpret_cast<const double*>(x);
  // hadd interleaves the two inputs, so lane l of block b holds element
  // 4b + {0,2,1,3}[l]
  __m256d best = _mm256_set1_pd(-1.0);
  __m256d bidx = _mm256_setzero_pd();
  __m256d idx = _mm256_setr_pd(0, 2, 1, 3);
  const __m256d step = _mm256_set1_pd(4.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a = _mm256_loadu_pd(p + 2 * i);
    __m256d b = _mm256_loadu_pd(p + 2 * i + 4);
    __m256d nrm = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    __m256d gt = _mm256_cmp_pd(nrm, best, _CMP_GT_OQ);
    best = _mm256_blendv_pd(best, nrm, gt);
    bidx = _mm256_blendv_pd(bidx, idx, gt);
    idx = _mm256_add_pd(idx, step);
  }
  alignas(32) double bv[4], bi[4];
  _mm256_store_pd(bv, best);
  _mm256_store_pd(bi, bidx);
  double v = bv[0];
  std::size_t k = static_cast<std::size_t>(bi[0]);
  for (int l = 1; l < 4; ++l) {
    std::size_t kl = static_cast<std::size_t>(bi[l]);
    if (bv[l] > v || (bv[l] == v && kl < k)) v = bv[l], k = kl;
  }
  for (; i < n; ++i) {
    double t = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    if (t > v) v = t, k = i;
  }
  return k;
}

#else

bool available() { return false; }
void axpy2(cplx* dst, const cplx* y1, const cplx* y2, cplx a1, cplx a2, std::size_t n) {
  scalar::axpy2(dst, y1, y2, a1, a2, n);
}
std::size_t argmax_norm(const cplx* x, std::size_t n) { return scalar::argmax_norm(x, n); }

#endif

}  // namespace xxtsi::kernels::avx2
