#pragma once

// Singular value decomposition through LAPACK's divide-and-conquer driver.
// Eigen 3.4.0's BDCSVD returns wrong singular values for some matrices with
// clustered spectra, which breaks rank decisions downstream.

#include "relpos/linalg.hpp"

namespace relpos::detail {

enum class SvdVectors { none, thin, full };

struct Svd {
  RealVector values;  // descending, min(rows, cols) of them
  Matrix u;           // rows x rows (full) or rows x min (thin); empty for none
  Matrix v;           // cols x cols (full) or cols x min (thin); empty for none
};

/// Throws ConditioningFailure if LAPACK reports non-convergence.
Svd svd(const Matrix& m, SvdVectors vectors);

}  // namespace relpos::detail
