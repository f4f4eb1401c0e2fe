#include "sarfocus/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_set>

#include "sarfocus/hashing.hpp"
#include "sarfocus/text.hpp"

namespace sarfocus {

namespace {

// {M}: optional methyl on a ring carbon; {A} {B} {C}: decoration sites.
// No template or fragment carries a methyl on an aromatic carbon of its own.
// Templates 0 and 1 are linker homologues whose radius-2 environment sets
// coincide, so a fingerprint cannot tell which of them a compound belongs to.
constexpr std::array<std::string_view, 6> kTemplates = {
    "c1c{M}c{A}cc{B}c1C(=O)NCCCCCOc1ccc{C}cn1",
    "c1c{M}c{A}cc{B}c1C(=O)NCCCCCCOc1ccc{C}cn1",
    "c1c{M}c{A}c2ncnc(N3CC{C}OCC3)c2c1{B}",
    "O=C(NC{C}c1cc{M}cc{A}c1)c1ccc{B}s1",
    "Cn1cc(cn1)-c1cc{M}c{A}c{B}c1{C}",
    "c1c{M}cc2[nH]c(nc2c1{A})-c1cc{C}c{B}o1",
};

constexpr std::array<std::string_view, 16> kFragments = {
    "",   "F",   "Cl",       "Br",  "OC",  "CC",          "N",     "O",
    "C(F)(F)F", "C#N", "OCC", "C(N)=O", "S(C)(=O)=O", "C9CC9", "N(C)C", "C(C)C",
};

constexpr std::uint64_t kDecorationTag = 0x4445434fULL;
constexpr std::uint64_t kNoiseTag = 0x4e4f4953ULL;
constexpr std::uint64_t kIc50Tag = 0x49433530ULL;

std::string substitute(std::string_view tmpl, bool methyl, const std::array<std::size_t, 3>& sites) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] != '{') {
      out.push_back(tmpl[i]);
      continue;
    }
    const char key = tmpl[i + 1];
    i += 2;  // skip "{X", loop increment skips '}'
    std::string_view group;
    if (key == 'M') {
      group = methyl ? "C" : "";
    } else {
      group = kFragments[sites[static_cast<std::size_t>(key - 'A')]];
    }
    if (!group.empty()) {
      out.push_back('(');
      out.append(group);
      out.push_back(')');
    }
  }
  return out;
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

}  // namespace

int synth_template_count() noexcept { return static_cast<int>(kTemplates.size()); }

int synth_max_per_series() noexcept {
  return static_cast<int>(2 * kFragments.size() * kFragments.size() * kFragments.size());
}

void SynthConfig::validate() const {
  if (per_series < 4) throw std::invalid_argument("per_series must be >= 4");
  if (per_series > synth_max_per_series())
    throw std::invalid_argument("per_series must be <= " + std::to_string(synth_max_per_series()));
  if (n_series < 1 || n_series > synth_template_count())
    throw std::invalid_argument("n_series must be between 1 and " + std::to_string(synth_template_count()));
  if (!rules.empty() && static_cast<int>(rules.size()) != n_series)
    throw std::invalid_argument("rules must list one entry per series");
  if (!mechanisms.empty() && static_cast<int>(mechanisms.size()) != n_series)
    throw std::invalid_argument("mechanisms must list one entry per series");
  if (!(active_lo > 0.0 && active_lo <= active_hi))
    throw std::invalid_argument("active IC50 range must satisfy 0 < lo <= hi");
  if (!(inactive_lo <= inactive_hi)) throw std::invalid_argument("inactive IC50 range must satisfy lo <= hi");
  if (!(active_hi < inactive_lo)) throw std::invalid_argument("active range must lie strictly below inactive range");
  if (!(label_noise >= 0.0 && label_noise < 0.5)) throw std::invalid_argument("label_noise must be in [0, 0.5)");
  std::map<int, BitRule> by_mechanism;
  for (int k = 0; k < n_series; ++k) {
    auto [it, fresh] = by_mechanism.emplace(mechanism(k), rule(k));
    if (!fresh && it->second != rule(k))
      throw std::invalid_argument("series sharing a mechanism must share its rule");
  }
}

BitRule SynthConfig::rule(int series) const {
  if (!rules.empty()) return rules[static_cast<std::size_t>(series)];
  return series % 2 == 0 ? BitRule::bit_required : BitRule::bit_forbidden;
}

int SynthConfig::mechanism(int series) const {
  if (!mechanisms.empty()) return mechanisms[static_cast<std::size_t>(series)];
  return series;
}

SynthOutput generate(const SynthConfig& cfg) {
  cfg.validate();
  SynthOutput out;
  const std::size_t n_frag = kFragments.size();
  const std::size_t combos = n_frag * n_frag * n_frag;
  for (int k = 0; k < cfg.n_series; ++k) {
    Rng decorations(derive_seed({cfg.seed, static_cast<std::uint64_t>(k), kDecorationTag}));
    Rng noise(derive_seed({cfg.seed, static_cast<std::uint64_t>(k), kNoiseTag}));
    Rng potency(derive_seed({cfg.seed, static_cast<std::uint64_t>(k), kIc50Tag}));
    std::array<std::unordered_set<std::size_t>, 2> used;
    const BitRule rule = cfg.rule(k);
    for (int i = 0; i < cfg.per_series; ++i) {
      bool active = i % 2 == 0;
      const bool methyl = (rule == BitRule::bit_required) == active;
      if (cfg.label_noise > 0.0 && noise.uniform() < cfg.label_noise) active = !active;

      std::size_t combo;
      do {
        combo = decorations.below(combos);
      } while (!used[methyl ? 1 : 0].insert(combo).second);
      const std::array<std::size_t, 3> sites{combo % n_frag, (combo / n_frag) % n_frag, combo / (n_frag * n_frag)};

      ActivityRecord r;
      char id[32];
      std::snprintf(id, sizeof id, "S%d_%04d", k + 1, i + 1);
      r.id = id;
      r.smiles = substitute(kTemplates[static_cast<std::size_t>(k)], methyl, sites);
      r.ic50_nm = active ? log_uniform(potency, cfg.active_lo, cfg.active_hi)
                         : log_uniform(potency, cfg.inactive_lo, cfg.inactive_hi);
      r.series = "S_" + std::to_string(k + 1);
      out.truth.push_back(TruthRow{r.id, cfg.mechanism(k)});
      out.has_aryl_methyl.push_back(methyl);
      out.records.push_back(std::move(r));
    }
  }
  return out;
}

void write_truth_csv(std::ostream& out, std::span<const TruthRow> truth) {
  out << "id,mechanism\n";
  for (const auto& row : truth) out << csv_escape(row.id) << ',' << row.mechanism << '\n';
}

std::vector<TruthRow> read_truth_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open file");
  std::string line;
  std::vector<std::string> fields;
  std::vector<TruthRow> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || trim(line).empty()) continue;
    if (!split_csv_line(line, fields) || fields.size() != 2)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected 'id,mechanism'");
    try {
      rows.push_back(TruthRow{std::string(trim(fields[0])), std::stoi(fields[1])});
    } catch (const std::logic_error&) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": mechanism must be an integer");
    }
  }
  return rows;
}

OracleReport oracle_check(const Dataset& d, std::span<const TruthRow> truth, double t_nm) {
  if (truth.size() != d.size())
    throw TruthMismatch("truth has " + std::to_string(truth.size()) + " rows, dataset has " +
                        std::to_string(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (truth[i].id != d.records[i].id)
      throw TruthMismatch("truth row " + std::to_string(i + 1) + " is '" + truth[i].id + "', dataset has '" +
                          d.records[i].id + "'");
  }
  const std::size_t bit = aryl_methyl_bit(d.params);

  struct Tally {
    std::size_t agree = 0;
    std::size_t disagree = 0;
  };
  std::map<int, Tally> tallies;
  std::size_t with_bit = 0, active_with_bit = 0, without_bit = 0, active_without_bit = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Label label = binarize(d.records[i], t_nm);
    if (label == Label::excluded) continue;
    const bool active = label == Label::active;
    const bool on = d.fingerprints[i].test(bit);
    auto& t = tallies[truth[i].mechanism];
    (on == active ? t.agree : t.disagree) += 1;
    if (on) {
      ++with_bit;
      active_with_bit += active;
    } else {
      ++without_bit;
      active_without_bit += active;
    }
  }

  OracleReport report;
  std::size_t consistent = 0, informative = 0;
  for (const auto& [mechanism, t] : tallies) {
    MechanismConsistency m;
    m.mechanism = mechanism;
    m.informative = t.agree + t.disagree;
    m.inferred_rule = t.agree >= t.disagree ? BitRule::bit_required : BitRule::bit_forbidden;
    m.consistent = std::max(t.agree, t.disagree);
    m.consistency = m.informative ? static_cast<double>(m.consistent) / static_cast<double>(m.informative) : 0.0;
    consistent += m.consistent;
    informative += m.informative;
    report.mechanisms.push_back(m);
  }
  report.overall_consistency = informative ? static_cast<double>(consistent) / static_cast<double>(informative) : 0.0;
  report.p_active_given_bit = with_bit ? static_cast<double>(active_with_bit) / static_cast<double>(with_bit) : 0.0;
  report.p_active_given_no_bit =
      without_bit ? static_cast<double>(active_without_bit) / static_cast<double>(without_bit) : 0.0;
  report.entropy_given_bit = binary_entropy(report.p_active_given_bit);
  return report;
}

}  // namespace sarfocus
