#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sarfocus/dataset.hpp"

namespace sarfocus {

/// How the aryl-methyl indicator decides activity within one series.
enum class BitRule { bit_required, bit_forbidden };

struct SynthConfig {
  int per_series = 4;
  int n_series = 2;
  /// One rule per series; empty means required, forbidden, required, ...
  std::vector<BitRule> rules;
  /// Hidden mechanism label per series; empty means series k acts through
  /// mechanism k. Series sharing a label share a binding site.
  std::vector<int> mechanisms;
  double active_lo = 10.0;
  double active_hi = 95.0;
  double inactive_lo = 120.0;
  double inactive_hi = 1000.0;
  double label_noise = 0.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
  BitRule rule(int series) const;
  int mechanism(int series) const;
};

struct TruthRow {
  std::string id;
  int mechanism = 0;

  friend bool operator==(const TruthRow&, const TruthRow&) = default;
};

struct SynthOutput {
  std::vector<ActivityRecord> records;
  std::vector<TruthRow> truth;       // parallel to records
  std::vector<bool> has_aryl_methyl; // parallel to records
};

/// Number of decoration templates available, i.e. the largest n_series.
int synth_template_count() noexcept;

/// Largest per_series a template can serve without repeating a structure.
int synth_max_per_series() noexcept;

/// Builds series k from template k: three decoration sites filled from a
/// fixed fragment list (no repeats within a series) and an optional methyl on
/// a ring carbon. Compound i is designed active when i is even; the series
/// rule then fixes the methyl, label noise may flip the class, and the IC50
/// is drawn log-uniformly from the class range.
SynthOutput generate(const SynthConfig& cfg);

void write_truth_csv(std::ostream& out, std::span<const TruthRow> truth);
std::vector<TruthRow> read_truth_csv(const std::filesystem::path& path);

struct MechanismConsistency {
  int mechanism = 0;
  std::size_t informative = 0;  // records not excluded at the threshold
  std::size_t consistent = 0;   // agreeing with the majority rule
  BitRule inferred_rule = BitRule::bit_required;
  double consistency = 0.0;
};

struct OracleReport {
  std::vector<MechanismConsistency> mechanisms;  // ascending mechanism label
  double overall_consistency = 0.0;
  double p_active_given_bit = 0.0;
  double p_active_given_no_bit = 0.0;
  /// Entropy (bits) of the activity class among records carrying the
  /// indicator bit; 1.0 means the bit says nothing on aggregate.
  double entropy_given_bit = 0.0;
};

class TruthMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks per-mechanism agreement between the indicator fingerprint bit and
/// the activity class at `t_nm`. Truth rows must list the dataset ids in
/// dataset order.
OracleReport oracle_check(const Dataset& d, std::span<const TruthRow> truth, double t_nm);

}  // namespace sarfocus
