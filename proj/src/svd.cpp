#include "detail/svd.hpp"

#include <algorithm>
#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace relpos::detail {

Svd svd(const Matrix& m, SvdVectors vectors) {
  const Index rows = m.rows(), cols = m.cols(), k = std::min(rows, cols);
  Svd out;
  if (k == 0) {
    out.values = RealVector(0);
    if (vectors == SvdVectors::full) {
      out.u = Matrix::Identity(rows, rows);
      out.v = Matrix::Identity(cols, cols);
    } else if (vectors == SvdVectors::thin) {
      out.u = Matrix(rows, 0);
      out.v = Matrix(cols, 0);
    }
    return out;
  }

  Matrix a = m;  // overwritten by LAPACK
  out.values.resize(k);
  char job = 'N';
  Index ucols = 1, vtrows = 1;
  switch (vectors) {
    case SvdVectors::none:
      break;
    case SvdVectors::thin:
      job = 'S';
      ucols = k;
      vtrows = k;
      break;
    case SvdVectors::full:
      job = 'A';
      ucols = rows;
      vtrows = cols;
      break;
  }
  Matrix u(rows, ucols), vt(vtrows, cols);
  const lapack_int info = LAPACKE_zgesdd(
      LAPACK_COL_MAJOR, job, static_cast<lapack_int>(rows), static_cast<lapack_int>(cols),
      a.data(), static_cast<lapack_int>(rows), out.values.data(), u.data(),
      static_cast<lapack_int>(rows), vt.data(), static_cast<lapack_int>(vtrows));
  if (info != 0) throw ConditioningFailure("SVD did not converge (zgesdd info " + std::to_string(info) + ")");
  if (vectors != SvdVectors::none) {
    out.u = std::move(u);
    out.v = vt.adjoint();
  }
  return out;
}

}  // namespace relpos::detail
