// Dense and banded complex matrix kernels, serial reference plus OpenMP
// variants, and LAPACK-backed Hermitian eigendecomposition helpers.
#pragma once

#include <complex>
#include <span>
#include <vector>

namespace dcg {

using cplx = std::complex<double>;

// Square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int dim)
      : dim_(dim), a_(static_cast<std::size_t>(dim) * dim) {}

  static ComplexMatrix identity(int dim);

  int dim() const { return dim_; }

  cplx& operator()(int r, int c) {
    return a_[static_cast<std::size_t>(r) * dim_ + c];
  }
  const cplx& operator()(int r, int c) const {
    return a_[static_cast<std::size_t>(r) * dim_ + c];
  }

  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }

  cplx* row(int r) { return a_.data() + static_cast<std::size_t>(r) * dim_; }
  const cplx* row(int r) const {
    return a_.data() + static_cast<std::size_t>(r) * dim_;
  }

  std::size_t size() const { return a_.size(); }

 private:
  int dim_ = 0;
  std::vector<cplx> a_;
};

// C = A * B. matmul_serial is the reference path; matmul_omp splits output
// rows across threads and sums each entry in the same order, so the two are
// bitwise identical. matmul_into dispatches on the configured thread count.
void matmul_serial(const ComplexMatrix& a, const ComplexMatrix& b,
                   ComplexMatrix& c);
void matmul_omp(const ComplexMatrix& a, const ComplexMatrix& b,
                ComplexMatrix& c, int threads);
void matmul_into(const ComplexMatrix& a, const ComplexMatrix& b,
                 ComplexMatrix& c);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

// y = A * x.
void matvec(const ComplexMatrix& a, std::span<const cplx> x,
            std::span<cplx> y);

// Elementwise updates.
void add_scaled(ComplexMatrix& c, cplx alpha, const ComplexMatrix& a);
void scale(ComplexMatrix& c, cplx alpha);

ComplexMatrix dagger(const ComplexMatrix& a);
cplx trace(const ComplexMatrix& a);
cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double hermiticity_error(const ComplexMatrix& a);
// sum_ab |A_ab|^2, i.e. tr(A^dag A).
double frobenius_sq(const ComplexMatrix& a);

// Banded storage for matrices whose row r has nonzeros only in columns
// [r-lo, r+hi]. Row-packed: entry (r, r+d) sits at a[r*width + d + lo].
struct BandMatrix {
  int dim = 0;
  int lo = 0;
  int hi = 0;
  std::vector<cplx> a;

  int width() const { return lo + hi + 1; }
  cplx at(int r, int c) const;

  // Detects the bandwidth by probing for exact zeros.
  static BandMatrix from_dense(const ComplexMatrix& m);
  ComplexMatrix to_dense() const;
};

// C = A * B with banded A; C = B * A with banded A. Same serial/OpenMP
// pairing and dispatch rule as matmul.
void band_mul_dense_serial(const BandMatrix& a, const ComplexMatrix& b,
                           ComplexMatrix& c);
void band_mul_dense_omp(const BandMatrix& a, const ComplexMatrix& b,
                        ComplexMatrix& c, int threads);
void band_mul_dense(const BandMatrix& a, const ComplexMatrix& b,
                    ComplexMatrix& c);
void dense_mul_band_serial(const ComplexMatrix& b, const BandMatrix& a,
                           ComplexMatrix& c);
void dense_mul_band_omp(const ComplexMatrix& b, const BandMatrix& a,
                        ComplexMatrix& c, int threads);
void dense_mul_band(const ComplexMatrix& b, const BandMatrix& a,
                    ComplexMatrix& c);

// y = A * x for banded A.
void band_matvec(const BandMatrix& a, std::span<const cplx> x,
                 std::span<cplx> y);

// Hermitian eigendecomposition A = V diag(w) V^dag (LAPACK zheevd).
// eigenvectors holds V with eigenvectors in columns.
struct HermitianEig {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};
HermitianEig eig_hermitian(const ComplexMatrix& a);
std::vector<double> eigvals_hermitian(const ComplexMatrix& a);
double min_eigenvalue_hermitian(const ComplexMatrix& a);

// V diag(exp(scale * w)) V^dag from a precomputed decomposition.
ComplexMatrix exp_from_eig(const HermitianEig& eig, cplx scale);

}
