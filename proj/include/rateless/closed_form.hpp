#pragma once

#include "rateless/gain_matrix.hpp"
#include "rateless/types.hpp"

namespace rateless {

/// The unique (up to gauge) 2-layer, 2-block combining matrix meeting all
/// four successive-decoding equalities:
///   sqrt(P / (2^{R/2} + 1)) * [[1, 2^{R/4}], [2^{R/4}, -1]].
GainMatrix design_2x2(double rate, double power);

/// The 3-layer, 3-block scaled-unitary solution.  Magnitudes are closed
/// forms in x = 2^{R/6}; phases close a triangle of fixed side lengths.
/// Throws RateTooHighError above max_rate_3x3().
GainMatrix design_3x3(double rate, double power);

/// Largest rate for which the 3x3 phase triangle closes:
/// 6 log2((3 + sqrt 5) / 2) ~= 8.3319 bits per complex symbol.
double max_rate_3x3();

/// Evaluates the accumulated layer MI at every (m,l) against the ideal
/// thresholds for spec and reports the relative shortfall grid plus the
/// scaled-unitarity residual.
ShortfallReport validate_perfect(const GainMatrix& g, const CodeSpec& spec);

}  // namespace rateless
