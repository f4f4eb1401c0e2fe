#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

namespace sarfocus {

class DegenerateLabels : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mann-Whitney ROC AUC: the fraction of (positive, negative) pairs in which
/// the positive scores higher, ties counting one half.
///
/// The pair count is accumulated exactly as an integer (twice the
/// concordant pairs plus the tied pairs) and divided once at the end.
/// Throws DegenerateLabels unless both classes are present, and
/// std::invalid_argument on length mismatch or NaN scores.
double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

}  // namespace sarfocus
