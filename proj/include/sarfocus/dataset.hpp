#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sarfocus/fingerprint.hpp"

namespace sarfocus {

enum class Qualifier { exact, greater_than, less_than };

struct ActivityRecord {
  std::string id;
  std::string smiles;
  double ic50_nm = 0.0;
  Qualifier qualifier = Qualifier::exact;
  std::optional<std::string> series;

  friend bool operator==(const ActivityRecord&, const ActivityRecord&) = default;
};

enum class Label { inactive = 0, active = 1, excluded = 2 };

/// Class at threshold `t_nm`: active iff IC50 < t (strict).
///
/// Censored values are resolved only when the bound decides the class:
/// `>x` is inactive when x >= t, `<x` is active when x <= t; otherwise the
/// record is excluded at this threshold.
Label binarize(const ActivityRecord& r, double t_nm) noexcept;

/// Immutable after construction; fingerprints[i] belongs to records[i].
struct Dataset {
  std::vector<ActivityRecord> records;
  std::vector<Fingerprint> fingerprints;
  FingerprintParams params;

  std::size_t size() const noexcept { return records.size(); }
};

/// Indices into Dataset::records, both lists in dataset order.
struct SeriesSelection {
  std::vector<std::size_t> series;
  std::vector<std::size_t> complement;
};

enum class DatasetErrorKind {
  io,
  malformed_row,
  smiles_error,
  empty_dataset,
  unknown_label,
  unknown_id,
  empty_series,
  series_is_whole_dataset,
};

class DatasetError : public std::runtime_error {
 public:
  DatasetError(DatasetErrorKind kind, std::string source, std::size_t line, const std::string& detail);

  DatasetErrorKind kind() const noexcept { return kind_; }
  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }  // 0 when not tied to a line

 private:
  DatasetErrorKind kind_;
  std::string source_;
  std::size_t line_;
};

/// Reads the `id,smiles,ic50_nm,qualifier,series` CSV (columns located by
/// header name; `series` may be absent). Rows with identical SMILES text are
/// collapsed into the first one: IC50 becomes the geometric mean, the
/// qualifier stays exact only if every duplicate was exact (otherwise the
/// first censored qualifier wins).
Dataset read_csv(std::istream& in, const FingerprintParams& params, const std::string& source = "<stream>");
Dataset load_csv(const std::filesystem::path& path, const FingerprintParams& params);

/// Builds a dataset from records already in memory (same collapse rules).
Dataset make_dataset(std::vector<ActivityRecord> records, const FingerprintParams& params,
                     const std::string& source = "<memory>");

void write_csv(std::ostream& out, std::span<const ActivityRecord> records);

SeriesSelection select_series(const Dataset& d, std::string_view label);
SeriesSelection select_series(const Dataset& d, std::span<const std::string> ids);

/// One record id per line; blank lines and surrounding whitespace ignored.
std::vector<std::string> read_id_file(const std::filesystem::path& path);

char qualifier_symbol(Qualifier q) noexcept;

}  // namespace sarfocus
