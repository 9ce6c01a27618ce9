#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "xxtsi/correlators.hpp"

namespace xxtsi {

// Skew-symmetric matrix stored as its strict upper triangle, packed by rows:
// row i holds A[i][i+1..dim-1] contiguously.
class SkewMatrix {
 public:
  SkewMatrix() = default;
  // even_only=false lets the prefix engine hold odd-sized chain matrices
  explicit SkewMatrix(int dim, bool even_only = true);

  int dim() const { return dim_; }

  cplx operator()(int i, int j) const;
  void set(int i, int j, cplx v);  // also implies A[j][i] = -v

  cplx* row(int i) { return data_.data() + offset(i); }
  const cplx* row(int i) const { return data_.data() + offset(i); }
  // pointer to A[i][j] for i < j
  cplx* at(int i, int j) { return row(i) + (j - i - 1); }
  const cplx* at(int i, int j) const { return row(i) + (j - i - 1); }

  double max_norm() const;
  bool finite() const;

  // principal submatrix on sorted index list
  SkewMatrix principal(const std::vector<int>& idx) const;

 private:
  std::size_t offset(int i) const {
    return static_cast<std::size_t>(i) * dim_ - static_cast<std::size_t>(i) * (i + 1) / 2;
  }
  int dim_ = 0;
  std::vector<cplx> data_;
};

// Parlett-Reid with partial pivoting. Zero if the best pivot falls below
// 1e-13 of the max-norm. Throws on odd dim or non-finite entries.
cplx pfaffian(const SkewMatrix& a);

// Nested principal Pfaffians of a (possibly odd-sized) skew matrix K:
//   leading[n-1] = Pf(K[0..2n))           for 2n <= dim
//   swapped[n-1] = Pf(K[{0..2n-1} + 2n])  for 2n <  dim
// in O(dim^3) total, via deferred threshold pivoting.
struct PrefixPfaffians {
  std::vector<cplx> leading;
  std::vector<cplx> swapped;
  int max_deferred = 0;    // largest pending set seen
  int forced_pivots = 0;   // eliminations taken below the threshold
};

struct PrefixOptions {
  double threshold = 0.5;  // accept a pivot when |a_ij| >= threshold * row max
  int max_deferred = 48;   // beyond this, take the best pivot anyway
};

PrefixPfaffians prefix_pfaffians(const SkewMatrix& k, int count, PrefixOptions opt = {});

enum class StringKind { xx, yy, xy, yx };
const char* to_string(StringKind k);

struct TaggedOp {
  int site;  // 0-based, site 0 is the reference spin
  bool is_a;
};

struct OperatorString {
  StringKind kind;
  int n;
  std::vector<TaggedOp> sequence;
};

OperatorString operator_string(StringKind kind, int n);

SkewMatrix assemble(StringKind kind, int n, const ContractionTable& t);

// D * Pf for the string; real part, with |Im| < 1e-8 enforced
double spin_correlator(StringKind kind, int n, const ContractionTable& t);
cplx prefactor(StringKind kind, int n);

// All four transverse correlators for n = 1..max_range from one nested
// elimination of the xx chain matrix. The yy chain matrix is exactly the
// negated xx one (A <-> B flips every contraction's sign), which gives the
// yy and yx strings for free.
struct TransverseCorrelators {
  std::vector<double> gxx, gyy, gxy, gyx;
  double max_imag = 0.0;
  int max_deferred = 0;
  int forced_pivots = 0;
};

TransverseCorrelators transverse_correlators(const ContractionTable& t, int max_range);

}  // namespace xxtsi
