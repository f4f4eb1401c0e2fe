#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sarfocus/dataset.hpp"
#include "sarfocus/forest.hpp"

namespace sarfocus {

enum class SimilarityReference { training_half, whole_series };

/// Stands for "the whole complement" in an N_sim grid.
inline constexpr std::size_t kAllComplement = std::numeric_limits<std::size_t>::max();

struct ScanConfig {
  std::vector<double> t_grid{1.0, 3.16, 10.0, 31.6, 100.0, 316.0, 1000.0};
  std::vector<std::size_t> nsim_grid{0, 5, 10, 25, 50, 100, 250, 500, 1000, kAllComplement};
  int replicates = 500;
  std::uint64_t master_seed = 0;
  ForestParams forest{};
  SimilarityReference similarity_reference = SimilarityReference::training_half;

  /// Throws FocusError(invalid_config) on a malformed grid.
  void validate() const;
};

struct ScanOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  std::function<void(int done, int total)> progress;
};

struct BestCell {
  double t_nm = 0.0;
  std::size_t n_sim = 0;
  double mean_auc = 0.0;
  std::size_t t_index = 0;
  std::size_t nsim_index = 0;
};

/// Mean ROC AUC over the (threshold, N_sim) grid. Rows follow t_grid,
/// columns follow the resolved nsim_grid; undefined cells hold NaN.
struct FocusResult {
  std::vector<double> t_grid;
  std::vector<std::size_t> nsim_grid;  // clamped to the complement size, deduplicated
  Eigen::MatrixXd mean_auc;
  Eigen::MatrixXi valid_counts;
  int replicates = 0;
  BestCell best;
  std::vector<std::string> delta_s;

  std::optional<double> cell(std::size_t t_index, std::size_t nsim_index) const;
};

enum class FocusErrorKind { invalid_config, series_too_small, all_cells_undefined, empty_reference_set };

class FocusError : public std::runtime_error {
 public:
  FocusError(FocusErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  FocusErrorKind kind() const noexcept { return kind_; }

 private:
  FocusErrorKind kind_;
};

inline constexpr std::size_t kMinSeriesSize = 8;

/// Clamps values above `complement_size` and drops the duplicates this creates.
std::vector<std::size_t> resolve_nsim_grid(std::span<const std::size_t> grid, std::size_t complement_size);

/// Complement indices by descending mean Tanimoto to `reference`, ties by
/// ascending dataset index.
std::vector<std::size_t> rank_complement(const Dataset& d, const SeriesSelection& sel,
                                         std::span<const Fingerprint> reference);
std::vector<std::size_t> rank_complement(const Dataset& d, const SeriesSelection& sel,
                                         std::span<const std::size_t> reference_records);

/// Train/test halves of the series for one replicate, each in dataset order.
/// Depends only on (master_seed, replicate).
struct SeriesSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
SeriesSplit split_series(std::span<const std::size_t> series, std::uint64_t master_seed, int replicate);

/// Forest seed for one grid cell of one replicate. Keyed on grid values, not
/// positions, so inserting grid points leaves existing cells untouched.
std::uint64_t cell_seed(std::uint64_t master_seed, int replicate, double t_nm, std::size_t n_sim);

/// The focus scan.
///
/// Every replicate splits the series 50/50 without stratification; the
/// same split serves every grid cell. For each cell the training half is
/// extended with the top N_sim complement compounds (ranked against the
/// similarity reference), records censored at that threshold are dropped,
/// a forest is trained and ROC AUC is measured on the test half. Replicates
/// with a single-class test half are invalid for that threshold. A cell is
/// defined when at least half of the replicates are valid. The best cell
/// maximizes the mean, ties going to smaller N_sim, then larger T.
FocusResult scan(const Dataset& d, const SeriesSelection& sel, const ScanConfig& cfg, const ScanOptions& opts = {});

/// The series plus the top `result.best.n_sim` complement records ranked
/// against the whole series, as record ids.
std::vector<std::string> extract_delta_s(const FocusResult& result, const Dataset& d, const SeriesSelection& sel);

}  // namespace sarfocus
