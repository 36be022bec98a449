#pragma once

#include <string>
#include <vector>

#include "robust_sysid/experiment.hpp"

namespace robust_sysid {

// Log-scale estimation error against prefix length: per method the median
// across trials as a line, the interquartile range as a band. Byte-identical
// output for identical input. Rows that carry no finite error (failed
// solves) are skipped; an input with no plottable point is rejected.
std::string render_error_curve_svg(const std::vector<ErrorCurveRow>& rows);

// Certification frequency against |S| with 95% binomial error bars; rows
// with method "error" count as uncertified.
std::string render_certification_svg(const std::vector<CertificationRow>& rows);

}  // namespace robust_sysid
