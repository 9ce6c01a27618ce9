#pragma once

#include <complex>
#include <vector>

#include "xxtsi/model.hpp"

namespace xxtsi {

using cplx = std::complex<double>;

enum class Contraction { AA, BB, AB, BA };

// f(r) = <c_n^dag c_{n+r}> = (1/N) sum_{k in sea} e^{-ikr}, r in [0, N-1].
// Negative separations go through the accessor (f(-r) = conj f(r)).
class ContractionTable {
 public:
  ContractionTable() = default;
  ContractionTable(int n_sites, std::vector<cplx> f);

  int n_sites() const { return n_; }
  double filling() const { return f_[0].real(); }
  double mz() const { return filling() - 0.5; }

  cplx f(int r) const;
  double cos_sum(int r) const { return 2.0 * f(r).real(); }
  double sin_sum(int r) const { return -2.0 * f(r).imag(); }

  // <X_n Y_{n+r}> for the Majorana-like A = c^dag + c, B = c^dag - c
  cplx contraction(Contraction kind, int r) const;

  const std::vector<cplx>& raw() const { return f_; }

 private:
  int n_ = 0;
  std::vector<cplx> f_;
};

ContractionTable build_table(const FermiSea& sea);

// <S^z_n S^z_{n+r}> = mz^2 - |f(r)|^2, r >= 1
double zz_correlator(const ContractionTable& t, int r);

}  // namespace xxtsi
