#include "sarfocus/focus.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "sarfocus/hashing.hpp"
#include "sarfocus/metrics.hpp"

namespace sarfocus {

namespace {

constexpr std::uint64_t kSplitTag = 0x53504c4954ULL;   // "SPLIT"
constexpr std::uint64_t kForestTag = 0x464f52455354ULL;  // "FOREST"

std::vector<double> ranking_scores(const Dataset& d, const SeriesSelection& sel,
                                   std::span<const Fingerprint* const> reference) {
  std::vector<double> scores(sel.complement.size());
  for (std::size_t k = 0; k < sel.complement.size(); ++k) {
    const Fingerprint& q = d.fingerprints[sel.complement[k]];
    double sum = 0.0;
    for (const auto* r : reference) sum += tanimoto(q, *r);
    scores[k] = sum / static_cast<double>(reference.size());
  }
  return scores;
}

std::vector<std::size_t> order_by_score(const SeriesSelection& sel, const std::vector<double>& scores) {
  std::vector<std::size_t> pos(sel.complement.size());
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  std::stable_sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<std::size_t> ranked(pos.size());
  for (std::size_t k = 0; k < pos.size(); ++k) ranked[k] = sel.complement[pos[k]];
  return ranked;
}

std::vector<std::size_t> rank_against(const Dataset& d, const SeriesSelection& sel,
                                      std::span<const Fingerprint* const> reference) {
  if (reference.empty()) throw FocusError(FocusErrorKind::empty_reference_set, "similarity reference is empty");
  // complement is in dataset order, so a stable sort keeps index order on ties
  return order_by_score(sel, ranking_scores(d, sel, reference));
}

std::vector<const Fingerprint*> fingerprints_of(const Dataset& d, std::span<const std::size_t> rows) {
  std::vector<const Fingerprint*> out;
  out.reserve(rows.size());
  for (auto i : rows) out.push_back(&d.fingerprints[i]);
  return out;
}

}  // namespace

void ScanConfig::validate() const {
  if (t_grid.empty()) throw FocusError(FocusErrorKind::invalid_config, "t_grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!std::isfinite(t_grid[i]) || t_grid[i] <= 0.0)
      throw FocusError(FocusErrorKind::invalid_config, "t_grid values must be positive and finite");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw FocusError(FocusErrorKind::invalid_config, "t_grid must be strictly increasing");
  }
  if (nsim_grid.empty() || nsim_grid.front() != 0)
    throw FocusError(FocusErrorKind::invalid_config, "nsim_grid must start with 0");
  for (std::size_t i = 1; i < nsim_grid.size(); ++i) {
    if (nsim_grid[i] <= nsim_grid[i - 1])
      throw FocusError(FocusErrorKind::invalid_config, "nsim_grid must be strictly increasing");
  }
  if (replicates < 1) throw FocusError(FocusErrorKind::invalid_config, "replicates must be >= 1");
  try {
    forest.validate();
  } catch (const ForestError& e) {
    throw FocusError(FocusErrorKind::invalid_config, e.what());
  }
}

std::optional<double> FocusResult::cell(std::size_t t_index, std::size_t nsim_index) const {
  const double v = mean_auc(static_cast<Eigen::Index>(t_index), static_cast<Eigen::Index>(nsim_index));
  if (std::isnan(v)) return std::nullopt;
  return v;
}

std::vector<std::size_t> resolve_nsim_grid(std::span<const std::size_t> grid, std::size_t complement_size) {
  std::vector<std::size_t> out;
  for (auto v : grid) {
    const std::size_t c = std::min(v, complement_size);
    if (out.empty() || out.back() != c) out.push_back(c);
  }
  return out;
}

std::vector<std::size_t> rank_complement(const Dataset& d, const SeriesSelection& sel,
                                         std::span<const Fingerprint> reference) {
  std::vector<const Fingerprint*> refs;
  for (const auto& fp : reference) refs.push_back(&fp);
  return rank_against(d, sel, refs);
}

std::vector<std::size_t> rank_complement(const Dataset& d, const SeriesSelection& sel,
                                         std::span<const std::size_t> reference_records) {
  return rank_against(d, sel, fingerprints_of(d, reference_records));
}

SeriesSplit split_series(std::span<const std::size_t> series, std::uint64_t master_seed, int replicate) {
  std::vector<std::size_t> shuffled(series.begin(), series.end());
  Rng rng(derive_seed({master_seed, static_cast<std::uint64_t>(replicate), kSplitTag}));
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
  }
  const std::size_t half = shuffled.size() / 2;
  SeriesSplit split;
  split.train.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(half));
  split.test.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(half), shuffled.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::uint64_t cell_seed(std::uint64_t master_seed, int replicate, double t_nm, std::size_t n_sim) {
  return derive_seed({master_seed, static_cast<std::uint64_t>(replicate), std::bit_cast<std::uint64_t>(t_nm),
                      static_cast<std::uint64_t>(n_sim), kForestTag});
}

FocusResult scan(const Dataset& d, const SeriesSelection& sel, const ScanConfig& cfg, const ScanOptions& opts) {
  cfg.validate();
  if (sel.series.size() < kMinSeriesSize)
    throw FocusError(FocusErrorKind::series_too_small,
                     "series has " + std::to_string(sel.series.size()) + " records; at least " +
                         std::to_string(kMinSeriesSize) + " are required");

  const std::vector<std::size_t> nsim = resolve_nsim_grid(cfg.nsim_grid, sel.complement.size());
  const std::size_t n_t = cfg.t_grid.size();
  const std::size_t n_n = nsim.size();
  const int reps = cfg.replicates;

  std::vector<std::vector<Label>> labels(n_t, std::vector<Label>(d.size()));
  for (std::size_t ti = 0; ti < n_t; ++ti) {
    for (std::size_t i = 0; i < d.size(); ++i) labels[ti][i] = binarize(d.records[i], cfg.t_grid[ti]);
  }

  std::vector<std::size_t> shared_ranking;
  if (cfg.similarity_reference == SimilarityReference::whole_series)
    shared_ranking = rank_complement(d, sel, std::span<const std::size_t>(sel.series));

  // aucs[(r * n_t + ti) * n_n + ni], NaN when the replicate is invalid there.
  std::vector<double> aucs(static_cast<std::size_t>(reps) * n_t * n_n, std::numeric_limits<double>::quiet_NaN());

  auto run_replicate = [&](int r) {
    const SeriesSplit split = split_series(sel.series, cfg.master_seed, r);
    const std::vector<std::size_t> ranking =
        cfg.similarity_reference == SimilarityReference::whole_series
            ? shared_ranking
            : rank_complement(d, sel, std::span<const std::size_t>(split.train));

    std::vector<const Fingerprint*> X;
    std::vector<std::uint8_t> y;
    std::vector<double> scores;
    std::vector<std::uint8_t> test_y;
    std::vector<std::size_t> test_rows;
    for (std::size_t ti = 0; ti < n_t; ++ti) {
      const auto& lab = labels[ti];
      test_rows.clear();
      test_y.clear();
      for (auto i : split.test) {
        if (lab[i] == Label::excluded) continue;
        test_rows.push_back(i);
        test_y.push_back(lab[i] == Label::active ? 1 : 0);
      }
      const auto pos = std::count(test_y.begin(), test_y.end(), 1);
      if (pos == 0 || pos == static_cast<std::ptrdiff_t>(test_y.size())) continue;

      for (std::size_t ni = 0; ni < n_n; ++ni) {
        X.clear();
        y.clear();
        auto add = [&](std::size_t i) {
          if (lab[i] == Label::excluded) return;
          X.push_back(&d.fingerprints[i]);
          y.push_back(lab[i] == Label::active ? 1 : 0);
        };
        for (auto i : split.train) add(i);
        for (std::size_t k = 0; k < nsim[ni]; ++k) add(ranking[k]);
        if (X.empty()) continue;

        ForestParams fp = cfg.forest;
        fp.seed = cell_seed(cfg.master_seed, r, cfg.t_grid[ti], nsim[ni]);
        const TrainedForest forest = train(std::span<const Fingerprint* const>(X), y, fp);
        scores.clear();
        for (auto i : test_rows) scores.push_back(forest.predict_proba(d.fingerprints[i]));
        aucs[(static_cast<std::size_t>(r) * n_t + ti) * n_n + ni] = roc_auc(scores, test_y);
      }
    }
  };

  unsigned threads = opts.threads ? opts.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(reps));
  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::mutex progress_mutex;
  auto worker = [&] {
    for (int r = next++; r < reps; r = next++) {
      try {
        run_replicate(r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = reps;
        return;
      }
      const int finished = ++done;
      if (opts.progress) {
        std::lock_guard lock(progress_mutex);
        opts.progress(finished, reps);
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  FocusResult result;
  result.t_grid = cfg.t_grid;
  result.nsim_grid = nsim;
  result.replicates = reps;
  result.mean_auc.setConstant(static_cast<Eigen::Index>(n_t), static_cast<Eigen::Index>(n_n),
                              std::numeric_limits<double>::quiet_NaN());
  result.valid_counts.setZero(static_cast<Eigen::Index>(n_t), static_cast<Eigen::Index>(n_n));

  bool have_best = false;
  for (std::size_t ti = 0; ti < n_t; ++ti) {
    for (std::size_t ni = 0; ni < n_n; ++ni) {
      double sum = 0.0;
      int valid = 0;
      for (int r = 0; r < reps; ++r) {
        const double v = aucs[(static_cast<std::size_t>(r) * n_t + ti) * n_n + ni];
        if (std::isnan(v)) continue;
        sum += v;
        ++valid;
      }
      const auto row = static_cast<Eigen::Index>(ti);
      const auto col = static_cast<Eigen::Index>(ni);
      result.valid_counts(row, col) = valid;
      if (valid == 0 || 2 * valid < reps) continue;
      const double mean = sum / valid;
      result.mean_auc(row, col) = mean;

      const BestCell candidate{cfg.t_grid[ti], nsim[ni], mean, ti, ni};
      const BestCell& b = result.best;
      const bool better = !have_best || mean > b.mean_auc ||
                          (mean == b.mean_auc && (candidate.n_sim < b.n_sim ||
                                                  (candidate.n_sim == b.n_sim && candidate.t_nm > b.t_nm)));
      if (better) {
        result.best = candidate;
        have_best = true;
      }
    }
  }
  if (!have_best)
    throw FocusError(FocusErrorKind::all_cells_undefined,
                     "no grid cell has valid replicates for at least half of the splits");
  result.delta_s = extract_delta_s(result, d, sel);
  return result;
}

std::vector<std::string> extract_delta_s(const FocusResult& result, const Dataset& d, const SeriesSelection& sel) {
  std::vector<std::string> ids;
  for (auto i : sel.series) ids.push_back(d.records[i].id);
  if (result.best.n_sim == 0) return ids;
  const auto ranking = rank_complement(d, sel, std::span<const std::size_t>(sel.series));
  const std::size_t take = std::min(result.best.n_sim, ranking.size());
  for (std::size_t k = 0; k < take; ++k) ids.push_back(d.records[ranking[k]].id);
  return ids;
}

}  // namespace sarfocus
