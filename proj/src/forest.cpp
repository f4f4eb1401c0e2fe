#include "sarfocus/forest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "sarfocus/hashing.hpp"

namespace sarfocus {

namespace {

// Training data restricted to the bits that vary across the whole set.
struct TrainingView {
  std::size_t n = 0;
  std::vector<std::uint32_t> varying;                // global bit index per local feature, ascending
  std::vector<std::vector<std::uint32_t>> on_local;  // per sample, local features set
  std::vector<std::uint8_t> y;
};

TrainingView make_view(std::span<const Fingerprint* const> X, std::span<const std::uint8_t> y) {
  TrainingView v;
  v.n = X.size();
  v.y.assign(y.begin(), y.end());
  const std::size_t n_words = X.front()->words().size();
  std::vector<std::uint64_t> any(n_words, 0);
  std::vector<std::uint64_t> all(n_words, ~std::uint64_t{0});
  for (const auto* fp : X) {
    const auto w = fp->words();
    for (std::size_t i = 0; i < n_words; ++i) {
      any[i] |= w[i];
      all[i] &= w[i];
    }
  }
  std::vector<std::int32_t> local(n_words * 64, -1);
  for (std::size_t i = 0; i < n_words; ++i) {
    for (std::uint64_t bits = any[i] & ~all[i]; bits; bits &= bits - 1) {
      const auto bit = static_cast<std::uint32_t>(i * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      local[bit] = static_cast<std::int32_t>(v.varying.size());
      v.varying.push_back(bit);
    }
  }
  v.on_local.resize(v.n);
  for (std::size_t s = 0; s < v.n; ++s) {
    for (auto bit : X[s]->on_bits()) {
      if (local[bit] >= 0) v.on_local[s].push_back(static_cast<std::uint32_t>(local[bit]));
    }
  }
  return v;
}

std::size_t popcount_and(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) noexcept {
  std::size_t c = 0;
  for (std::size_t i = 0; i < words; ++i) c += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return c;
}

std::size_t popcount_and3(const std::uint64_t* a, const std::uint64_t* b, const std::uint64_t* c,
                          std::size_t words) noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < words; ++i) n += static_cast<std::size_t>(std::popcount(a[i] & b[i] & c[i]));
  return n;
}

std::size_t popcount_all(const std::vector<std::uint64_t>& a) noexcept {
  std::size_t c = 0;
  for (auto w : a) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

// Sum of squared class counts over size, kept as an exact fraction so
// equal-quality splits compare equal and the bit-index tie rule applies.
struct Purity {
  __int128 num = -1;
  __int128 den = 1;

  bool better_than(const Purity& o) const noexcept { return num * o.den > o.num * den; }
  bool same_as(const Purity& o) const noexcept { return num * o.den == o.num * den; }
};

Purity split_purity(std::int64_t n_left, std::int64_t pos_left, std::int64_t n_right, std::int64_t pos_right) {
  const std::int64_t neg_left = n_left - pos_left;
  const std::int64_t neg_right = n_right - pos_right;
  const __int128 a = pos_left * pos_left + neg_left * neg_left;
  const __int128 b = pos_right * pos_right + neg_right * neg_right;
  return Purity{a * n_right + b * n_left, static_cast<__int128>(n_left) * n_right};
}

class TreeBuilder {
 public:
  TreeBuilder(const TrainingView& view, const ForestParams& p, std::size_t k, std::uint64_t seed)
      : view_(view), params_(p), k_(k), rng_(seed), words_((view.n + 63) / 64) {}

  DecisionTree build() {
    const std::size_t n = view_.n;
    const std::size_t n_features = view_.varying.size();
    cols_.assign(n_features * words_, 0);
    ymask_.assign(words_, 0);
    std::vector<std::uint64_t> root(words_, 0);
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::size_t s = rng_.below(n);
      const std::uint64_t bit = std::uint64_t{1} << (pos & 63);
      const std::size_t w = pos >> 6;
      root[w] |= bit;
      if (view_.y[s]) ymask_[w] |= bit;
      for (auto f : view_.on_local[s]) cols_[f * words_ + w] |= bit;
    }

    std::vector<std::uint32_t> all(n_features);
    for (std::size_t f = 0; f < n_features; ++f) all[f] = static_cast<std::uint32_t>(f);
    candidates_.push_back(std::move(all));

    tree_.nodes.emplace_back();
    struct Work {
      std::int32_t node;
      std::vector<std::uint64_t> mask;
      int depth;
      std::size_t candidates;
    };
    std::vector<Work> stack;
    stack.push_back(Work{0, std::move(root), 0, 0});
    std::vector<std::uint32_t> varying;

    while (!stack.empty()) {
      Work w = std::move(stack.back());
      stack.pop_back();
      const std::size_t n_node = popcount_all(w.mask);
      const std::size_t pos = popcount_and(w.mask.data(), ymask_.data(), words_);
      tree_.nodes[w.node].p_active = static_cast<double>(pos) / static_cast<double>(n_node);

      const bool depth_capped = params_.max_depth && w.depth >= *params_.max_depth;
      if (pos == 0 || pos == n_node || depth_capped ||
          n_node < 2 * static_cast<std::size_t>(params_.min_leaf))
        continue;

      varying.clear();
      for (auto f : candidates_[w.candidates]) {
        const std::size_t c = popcount_and(w.mask.data(), &cols_[f * words_], words_);
        if (c > 0 && c < n_node) varying.push_back(f);
      }
      if (varying.empty()) continue;

      const std::size_t draw = std::min(k_, varying.size());
      for (std::size_t i = 0; i < draw; ++i) {
        const std::size_t j = i + rng_.below(varying.size() - i);
        std::swap(varying[i], varying[j]);
      }

      std::int64_t best = -1;
      Purity best_purity;
      for (std::size_t i = 0; i < draw; ++i) {
        const std::uint32_t f = varying[i];
        const std::uint64_t* col = &cols_[f * words_];
        const auto n_right = static_cast<std::int64_t>(popcount_and(w.mask.data(), col, words_));
        const auto pos_right = static_cast<std::int64_t>(popcount_and3(w.mask.data(), col, ymask_.data(), words_));
        const auto n_left = static_cast<std::int64_t>(n_node) - n_right;
        const auto pos_left = static_cast<std::int64_t>(pos) - pos_right;
        if (n_left < params_.min_leaf || n_right < params_.min_leaf) continue;
        const Purity purity = split_purity(n_left, pos_left, n_right, pos_right);
        if (best < 0 || purity.better_than(best_purity) || (purity.same_as(best_purity) && f < best)) {
          best = f;
          best_purity = purity;
        }
      }
      if (best < 0) continue;

      const auto f = static_cast<std::size_t>(best);
      const std::uint64_t* col = &cols_[f * words_];
      std::vector<std::uint64_t> left(words_), right(words_);
      for (std::size_t i = 0; i < words_; ++i) {
        right[i] = w.mask[i] & col[i];
        left[i] = w.mask[i] & ~col[i];
      }
      const auto left_id = static_cast<std::int32_t>(tree_.nodes.size());
      tree_.nodes.emplace_back();
      tree_.nodes.emplace_back();
      auto& node = tree_.nodes[w.node];
      node.feature = static_cast<std::int32_t>(view_.varying[f]);
      node.left = left_id;
      node.right = left_id + 1;

      candidates_.push_back(varying);
      const std::size_t child_candidates = candidates_.size() - 1;
      stack.push_back(Work{left_id + 1, std::move(right), w.depth + 1, child_candidates});
      stack.push_back(Work{left_id, std::move(left), w.depth + 1, child_candidates});
    }
    return std::move(tree_);
  }

 private:
  const TrainingView& view_;
  const ForestParams& params_;
  std::size_t k_;
  Rng rng_;
  std::size_t words_;
  std::vector<std::uint64_t> cols_;
  std::vector<std::uint64_t> ymask_;
  std::vector<std::vector<std::uint32_t>> candidates_;
  DecisionTree tree_;
};

}  // namespace

void ForestParams::validate() const {
  if (n_trees < 1) throw ForestError(ForestErrorKind::invalid_params, "n_trees must be >= 1");
  if (min_leaf < 1) throw ForestError(ForestErrorKind::invalid_params, "min_leaf must be >= 1");
  if (max_depth && *max_depth < 1) throw ForestError(ForestErrorKind::invalid_params, "max_depth must be >= 1");
  if (features == FeatureRule::fixed && fixed_features < 1)
    throw ForestError(ForestErrorKind::invalid_params, "fixed feature count must be >= 1");
}

std::size_t ForestParams::features_per_split(std::size_t n_bits) const {
  switch (features) {
    case FeatureRule::all: return n_bits;
    case FeatureRule::fixed: return static_cast<std::size_t>(fixed_features);
    case FeatureRule::sqrt: break;
  }
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(n_bits))));
}

double DecisionTree::predict(const Fingerprint& x) const noexcept {
  std::int32_t i = 0;
  while (nodes[i].feature >= 0) {
    i = x.test(static_cast<std::size_t>(nodes[i].feature)) ? nodes[i].right : nodes[i].left;
  }
  return nodes[i].p_active;
}

TrainedForest::TrainedForest(std::vector<DecisionTree> trees, ForestParams params, FingerprintParams fp_params)
    : trees_(std::move(trees)), params_(params), fp_params_(fp_params) {}

double TrainedForest::predict_proba(const Fingerprint& x) const {
  if (x.params() != fp_params_)
    throw ForestError(ForestErrorKind::param_mismatch, "fingerprint parameters differ from training data");
  double sum = 0.0;
  for (const auto& t : trees_) sum += t.predict(x);
  return sum / static_cast<double>(trees_.size());
}

TrainedForest train(std::span<const Fingerprint* const> X, std::span<const std::uint8_t> y, const ForestParams& p) {
  p.validate();
  if (X.size() != y.size())
    throw ForestError(ForestErrorKind::length_mismatch,
                      "X has " + std::to_string(X.size()) + " rows but y has " + std::to_string(y.size()));
  if (X.empty()) throw ForestError(ForestErrorKind::empty_training_set, "training set is empty");
  const FingerprintParams fp_params = X.front()->params();
  for (const auto* fp : X) {
    if (fp->params() != fp_params)
      throw ForestError(ForestErrorKind::param_mismatch, "training fingerprints have mixed parameters");
  }

  const std::size_t positives = static_cast<std::size_t>(std::count_if(y.begin(), y.end(), [](auto v) { return v != 0; }));
  std::vector<DecisionTree> trees;
  trees.reserve(static_cast<std::size_t>(p.n_trees));
  if (positives == 0 || positives == y.size()) {
    DecisionTree constant;
    constant.nodes.push_back(DecisionTree::Node{-1, -1, -1, positives == 0 ? 0.0 : 1.0});
    trees.assign(static_cast<std::size_t>(p.n_trees), constant);
    return TrainedForest(std::move(trees), p, fp_params);
  }

  const TrainingView view = make_view(X, y);
  const std::size_t k = p.features_per_split(fp_params.n_bits);
  for (int t = 0; t < p.n_trees; ++t) {
    TreeBuilder builder(view, p, k, derive_seed({p.seed, static_cast<std::uint64_t>(t)}));
    trees.push_back(builder.build());
  }
  return TrainedForest(std::move(trees), p, fp_params);
}

TrainedForest train(std::span<const Fingerprint> X, std::span<const std::uint8_t> y, const ForestParams& p) {
  std::vector<const Fingerprint*> rows;
  rows.reserve(X.size());
  for (const auto& fp : X) rows.push_back(&fp);
  return train(std::span<const Fingerprint* const>(rows), y, p);
}

}  // namespace sarfocus
