#include "xxtsi/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace xxtsi::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("XXTSI_FORCE_SCALAR"); env && std::strcmp(env, "0") != 0)
    return Isa::scalar;
  return avx2::available() ? Isa::avx2 : Isa::scalar;
}

std::atomic<int> g_active{-1};

}  // namespace

Isa detected() {
  static const Isa d = detect();
  return d;
}

Isa active() {
  int a = g_active.load(std::memory_order_relaxed);
  if (a < 0) return detected();
  return static_cast<Isa>(a);
}

void force(Isa isa) {
  if (isa == Isa::avx2 && !avx2::available()) isa = Isa::scalar;
  g_active.store(static_cast<int>(isa), std::memory_order_relaxed);
}

void reset() { g_active.store(-1, std::memory_order_relaxed); }

const char* to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void axpy2(cplx* dst, const cplx* y1, const cplx* y2, cplx a1, cplx a2, std::size_t n) {
  if (active() == Isa::avx2) return avx2::axpy2(dst, y1, y2, a1, a2, n);
  scalar::axpy2(dst, y1, y2, a1, a2, n);
}

std::size_t argmax_norm(const cplx* x, std::size_t n) {
  if (active() == Isa::avx2) return avx2::argmax_norm(x, n);
  return scalar::argmax_norm(x, n);
}

double max_abs(const cplx* x, std::size_t n) {
  if (n == 0) return 0.0;
  return std::abs(x[argmax_norm(x, n)]);
}

}  // namespace xxtsi::kernels
