#include "dcg/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include <lapacke.h>

#include "dcg/parallel.hpp"

namespace dcg {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

// One output row of C = A * B, accumulated l-ascending so every code path
// sums in the same order.
inline void matmul_row(const ComplexMatrix& a, const ComplexMatrix& b,
                       ComplexMatrix& c, int i) {
  const int n = a.dim();
  cplx* crow = c.row(i);
  std::fill(crow, crow + n, cplx(0.0, 0.0));
  for (int l = 0; l < n; ++l) {
    const cplx ail = a(i, l);
    if (ail == cplx(0.0, 0.0)) continue;
    const cplx* brow = b.row(l);
    for (int k = 0; k < n; ++k) crow[k] += ail * brow[k];
  }
}

inline void band_mul_dense_row(const BandMatrix& a, const ComplexMatrix& b,
                               ComplexMatrix& c, int i) {
  const int n = a.dim;
  const int w = a.width();
  cplx* crow = c.row(i);
  std::fill(crow, crow + n, cplx(0.0, 0.0));
  const cplx* arow = a.a.data() + static_cast<std::size_t>(i) * w;
  const int dlo = std::max(-a.lo, -i);
  const int dhi = std::min(a.hi, n - 1 - i);
  for (int d = dlo; d <= dhi; ++d) {
    const cplx ail = arow[d + a.lo];
    if (ail == cplx(0.0, 0.0)) continue;
    const cplx* brow = b.row(i + d);
    for (int k = 0; k < n; ++k) crow[k] += ail * brow[k];
  }
}

inline void dense_mul_band_row(const ComplexMatrix& b, const BandMatrix& a,
                               ComplexMatrix& c, int i) {
  const int n = a.dim;
  const int w = a.width();
  const cplx* brow = b.row(i);
  cplx* crow = c.row(i);
  for (int k = 0; k < n; ++k) {
    const int l0 = std::max(0, k - a.hi);
    const int l1 = std::min(n - 1, k + a.lo);
    cplx acc(0.0, 0.0);
    for (int l = l0; l <= l1; ++l) {
      acc += brow[l] * a.a[static_cast<std::size_t>(l) * w + (k - l + a.lo)];
    }
    crow[k] = acc;
  }
}

}

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

void matmul_serial(const ComplexMatrix& a, const ComplexMatrix& b,
                   ComplexMatrix& c) {
  require_same_dim(a.dim(), b.dim(), "matmul");
  if (c.dim() != a.dim()) c = ComplexMatrix(a.dim());
  for (int i = 0; i < a.dim(); ++i) matmul_row(a, b, c, i);
}

void matmul_omp(const ComplexMatrix& a, const ComplexMatrix& b,
                ComplexMatrix& c, int threads) {
  require_same_dim(a.dim(), b.dim(), "matmul");
  if (c.dim() != a.dim()) c = ComplexMatrix(a.dim());
  const int n = a.dim();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int i = 0; i < n; ++i) matmul_row(a, b, c, i);
}

void matmul_into(const ComplexMatrix& a, const ComplexMatrix& b,
                 ComplexMatrix& c) {
  if (parallel::use_parallel() && a.dim() >= 48) {
    matmul_omp(a, b, c, parallel::thread_count());
  } else {
    matmul_serial(a, b, c);
  }
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.dim());
  matmul_into(a, b, c);
  return c;
}

void matvec(const ComplexMatrix& a, std::span<const cplx> x,
            std::span<cplx> y) {
  const int n = a.dim();
  require_same_dim(n, static_cast<int>(x.size()), "matvec");
  require_same_dim(n, static_cast<int>(y.size()), "matvec");
  for (int i = 0; i < n; ++i) {
    const cplx* arow = a.row(i);
    cplx acc(0.0, 0.0);
    for (int l = 0; l < n; ++l) acc += arow[l] * x[l];
    y[i] = acc;
  }
}

void add_scaled(ComplexMatrix& c, cplx alpha, const ComplexMatrix& a) {
  require_same_dim(c.dim(), a.dim(), "add_scaled");
  cplx* cd = c.data();
  const cplx* ad = a.data();
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) cd[i] += alpha * ad[i];
}

void scale(ComplexMatrix& c, cplx alpha) {
  cplx* cd = c.data();
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) cd[i] *= alpha;
}

ComplexMatrix dagger(const ComplexMatrix& a) {
  ComplexMatrix b(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int k = 0; k < a.dim(); ++k) b(k, i) = std::conj(a(i, k));
  return b;
}

cplx trace(const ComplexMatrix& a) {
  cplx t(0.0, 0.0);
  for (int i = 0; i < a.dim(); ++i) t += a(i, i);
  return t;
}

cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "trace_product");
  cplx t(0.0, 0.0);
  for (int i = 0; i < a.dim(); ++i) {
    const cplx* arow = a.row(i);
    for (int l = 0; l < a.dim(); ++l) t += arow[l] * b(l, i);
  }
  return t;
}

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  const cplx* d = a.data();
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(d[i]));
  return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "max_abs_diff");
  double m = 0.0;
  const cplx* ad = a.data();
  const cplx* bd = b.data();
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(ad[i] - bd[i]));
  return m;
}

double hermiticity_error(const ComplexMatrix& a) {
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int k = i; k < a.dim(); ++k)
      m = std::max(m, std::abs(a(i, k) - std::conj(a(k, i))));
  return m;
}

double frobenius_sq(const ComplexMatrix& a) {
  double s = 0.0;
  const cplx* d = a.data();
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(d[i]);
  return s;
}

cplx BandMatrix::at(int r, int c) const {
  const int d = c - r;
  if (d < -lo || d > hi) return cplx(0.0, 0.0);
  return a[static_cast<std::size_t>(r) * width() + d + lo];
}

BandMatrix BandMatrix::from_dense(const ComplexMatrix& m) {
  const int n = m.dim();
  int lo = 0, hi = 0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (m(i, k) != cplx(0.0, 0.0)) {
        lo = std::max(lo, i - k);
        hi = std::max(hi, k - i);
      }
  BandMatrix b;
  b.dim = n;
  b.lo = lo;
  b.hi = hi;
  b.a.assign(static_cast<std::size_t>(n) * b.width(), cplx(0.0, 0.0));
  for (int i = 0; i < n; ++i) {
    const int c0 = std::max(0, i - lo);
    const int c1 = std::min(n - 1, i + hi);
    for (int c = c0; c <= c1; ++c)
      b.a[static_cast<std::size_t>(i) * b.width() + c - i + lo] = m(i, c);
  }
  return b;
}

ComplexMatrix BandMatrix::to_dense() const {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) {
    const int c0 = std::max(0, i - lo);
    const int c1 = std::min(dim - 1, i + hi);
    for (int c = c0; c <= c1; ++c) m(i, c) = at(i, c);
  }
  return m;
}

void band_mul_dense_serial(const BandMatrix& a, const ComplexMatrix& b,
                           ComplexMatrix& c) {
  require_same_dim(a.dim, b.dim(), "band_mul_dense");
  if (c.dim() != a.dim) c = ComplexMatrix(a.dim);
  for (int i = 0; i < a.dim; ++i) band_mul_dense_row(a, b, c, i);
}

void band_mul_dense_omp(const BandMatrix& a, const ComplexMatrix& b,
                        ComplexMatrix& c, int threads) {
  require_same_dim(a.dim, b.dim(), "band_mul_dense");
  if (c.dim() != a.dim) c = ComplexMatrix(a.dim);
  const int n = a.dim;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int i = 0; i < n; ++i) band_mul_dense_row(a, b, c, i);
}

void band_mul_dense(const BandMatrix& a, const ComplexMatrix& b,
                    ComplexMatrix& c) {
  if (parallel::use_parallel() && a.dim >= 48) {
    band_mul_dense_omp(a, b, c, parallel::thread_count());
  } else {
    band_mul_dense_serial(a, b, c);
  }
}

void dense_mul_band_serial(const ComplexMatrix& b, const BandMatrix& a,
                           ComplexMatrix& c) {
  require_same_dim(a.dim, b.dim(), "dense_mul_band");
  if (c.dim() != a.dim) c = ComplexMatrix(a.dim);
  for (int i = 0; i < a.dim; ++i) dense_mul_band_row(b, a, c, i);
}

void dense_mul_band_omp(const ComplexMatrix& b, const BandMatrix& a,
                        ComplexMatrix& c, int threads) {
  require_same_dim(a.dim, b.dim(), "dense_mul_band");
  if (c.dim() != a.dim) c = ComplexMatrix(a.dim);
  const int n = a.dim;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int i = 0; i < n; ++i) dense_mul_band_row(b, a, c, i);
}

void dense_mul_band(const ComplexMatrix& b, const BandMatrix& a,
                    ComplexMatrix& c) {
  if (parallel::use_parallel() && a.dim >= 48) {
    dense_mul_band_omp(b, a, c, parallel::thread_count());
  } else {
    dense_mul_band_serial(b, a, c);
  }
}

void band_matvec(const BandMatrix& a, std::span<const cplx> x,
                 std::span<cplx> y) {
  require_same_dim(a.dim, static_cast<int>(x.size()), "band_matvec");
  require_same_dim(a.dim, static_cast<int>(y.size()), "band_matvec");
  const int w = a.width();
  for (int i = 0; i < a.dim; ++i) {
    const int dlo = std::max(-a.lo, -i);
    const int dhi = std::min(a.hi, a.dim - 1 - i);
    const cplx* arow = a.a.data() + static_cast<std::size_t>(i) * w;
    cplx acc(0.0, 0.0);
    for (int d = dlo; d <= dhi; ++d) acc += arow[d + a.lo] * x[i + d];
    y[i] = acc;
  }
}

HermitianEig eig_hermitian(const ComplexMatrix& a) {
  const int n = a.dim();
  HermitianEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors = a;
  const int info = LAPACKE_zheevd(
      LAPACK_ROW_MAJOR, 'V', 'U', n,
      reinterpret_cast<lapack_complex_double*>(out.eigenvectors.data()), n,
      out.eigenvalues.data());
  if (info != 0)
    throw std::runtime_error("zheevd failed, info=" + std::to_string(info));
  return out;
}

std::vector<double> eigvals_hermitian(const ComplexMatrix& a) {
  const int n = a.dim();
  std::vector<double> w(n);
  ComplexMatrix work = a;
  const int info = LAPACKE_zheevd(
      LAPACK_ROW_MAJOR, 'N', 'U', n,
      reinterpret_cast<lapack_complex_double*>(work.data()), n, w.data());
  if (info != 0)
    throw std::runtime_error("zheevd failed, info=" + std::to_string(info));
  return w;
}

double min_eigenvalue_hermitian(const ComplexMatrix& a) {
  const std::vector<double> w = eigvals_hermitian(a);
  double m = w.empty() ? 0.0 : w[0];
  for (double v : w) m = std::min(m, v);
  return m;
}

ComplexMatrix exp_from_eig(const HermitianEig& eig, cplx scale) {
  const int n = eig.eigenvectors.dim();
  const ComplexMatrix& v = eig.eigenvectors;
  // (V diag(f)) V^dag, with f_l = exp(scale * w_l).
  ComplexMatrix vf(n);
  std::vector<cplx> f(n);
  for (int l = 0; l < n; ++l) f[l] = std::exp(scale * eig.eigenvalues[l]);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) vf(i, l) = v(i, l) * f[l];
  ComplexMatrix out(n);
  for (int i = 0; i < n; ++i) {
    cplx* orow = out.row(i);
    std::fill(orow, orow + n, cplx(0.0, 0.0));
    for (int l = 0; l < n; ++l) {
      const cplx vil = vf(i, l);
      for (int k = 0; k < n; ++k) orow[k] += vil * std::conj(v(k, l));
    }
  }
  return out;
}

}
