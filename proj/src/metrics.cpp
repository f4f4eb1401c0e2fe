#include "sarfocus/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace sarfocus {

double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("roc_auc: scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (double s : scores) {
    if (std::isnan(s)) throw std::invalid_argument("roc_auc: NaN score");
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
  std::uint64_t twice_concordant = 0;
  std::uint64_t negatives_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::uint64_t pos_group = 0;
    std::uint64_t neg_group = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] ? pos_group : neg_group) += 1;
      ++j;
    }
    twice_concordant += 2 * pos_group * negatives_below + pos_group * neg_group;
    negatives_below += neg_group;
    positives += pos_group;
    negatives += neg_group;
    i = j;
  }
  if (positives == 0 || negatives == 0)
    throw DegenerateLabels("roc_auc needs at least one positive and one negative label");
  return static_cast<double>(twice_concordant) / static_cast<double>(2 * positives * negatives);
}

}  // namespace sarfocus
