// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mepsolve/problem.hpp"

namespace mep::detail {

struct SortedSpectrum {
  CVector values;  // descending by real part, stable
  double scale = 0.0;  // ||B||_F
};

SortedSpectrum sorted_general_spectrum(const CMatrix& b);
RVector sorted_hermitian_spectrum(const CMatrix& b);

}  // namespace mep::detail
