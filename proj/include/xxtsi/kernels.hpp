#pragma once

#include <complex>
#include <cstddef>

namespace xxtsi::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

// dst[i] += a1 * y1[i] + a2 * y2[i]; the Schur-complement row update of the
// Pfaffian engines.
void axpy2(cplx* dst, const cplx* y1, const cplx* y2, cplx a1, cplx a2, std::size_t n);

// index of the entry with the largest |x|^2 (first one on ties), n > 0
std::size_t argmax_norm(const cplx* x, std::size_t n);

// max |x| over the range (0 for n == 0)
double max_abs(const cplx* x, std::size_t n);

// Runtime selection. `active()` is what the dispatchers use; forcing an ISA
// the cpu lacks falls back to scalar.
Isa active();
Isa detected();
void force(Isa isa);
void reset();
const char* to_string(Isa isa);

namespace scalar {
void axpy2(cplx* dst, const cplx* y1, const cplx* y2, cplx a1, cplx a2, std::size_t n);
std::size_t argmax_norm(const cplx* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
bool available();
void axpy2(cplx* dst, const cplx* y1, const cplx* y2, cplx a1, cplx a2, std::size_t n);
std::size_t argmax_norm(const cplx* x, std::size_t n);
}  // namespace avx2

}  // namespace xxtsi::kernels
