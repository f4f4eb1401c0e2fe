#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sarfocus/fingerprint.hpp"

namespace sarfocus {

enum class FeatureRule { sqrt, all, fixed };

struct ForestParams {
  int n_trees = 100;
  std::optional<int> max_depth;  // unlimited when empty
  int min_leaf = 1;
  FeatureRule features = FeatureRule::sqrt;
  int fixed_features = 0;  // used when features == FeatureRule::fixed
  std::uint64_t seed = 0;

  void validate() const;
  /// Candidate features drawn per split for a fingerprint of `n_bits`.
  std::size_t features_per_split(std::size_t n_bits) const;

  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

enum class ForestErrorKind { invalid_params, length_mismatch, empty_training_set, param_mismatch };

class ForestError : public std::invalid_argument {
 public:
  ForestError(ForestErrorKind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  ForestErrorKind kind() const noexcept { return kind_; }

 private:
  ForestErrorKind kind_;
};

/// Flat binary tree. Internal nodes send fingerprints with `feature` set to
/// `right`, others to `left`; leaves have feature == -1 and hold P(class 1).
struct DecisionTree {
  struct Node {
    std::int32_t feature = -1;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double p_active = 0.0;

    friend bool operator==(const Node&, const Node&) = default;
  };
  std::vector<Node> nodes;

  double predict(const Fingerprint& x) const noexcept;
  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

class TrainedForest {
 public:
  TrainedForest(std::vector<DecisionTree> trees, ForestParams params, FingerprintParams fp_params);

  /// Mean over trees of the leaf probability of class 1.
  double predict_proba(const Fingerprint& x) const;

  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  const ForestParams& params() const noexcept { return params_; }
  const FingerprintParams& fingerprint_params() const noexcept { return fp_params_; }

  friend bool operator==(const TrainedForest&, const TrainedForest&) = default;

 private:
  std::vector<DecisionTree> trees_;
  ForestParams params_;
  FingerprintParams fp_params_;
};

/// Random forest over fingerprint bits.
///
/// Tree t is grown on a bootstrap resample drawn from
/// `Rng(derive_seed({p.seed, t}))`. At every impure node the candidate
/// features are a uniform sample (without replacement) of the bits that
/// vary within the node; the split minimizing weighted Gini impurity wins,
/// ties going to the lowest bit index. Single-class inputs yield a
/// constant forest.
TrainedForest train(std::span<const Fingerprint* const> X, std::span<const std::uint8_t> y, const ForestParams& p);
TrainedForest train(std::span<const Fingerprint> X, std::span<const std::uint8_t> y, const ForestParams& p);

}  // namespace sarfocus
