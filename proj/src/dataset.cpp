#include "sarfocus/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "sarfocus/text.hpp"

namespace sarfocus {

namespace {

struct Pending {
  ActivityRecord record;
  std::size_t line;
  double log_sum;
  std::size_t count;
};

std::string describe(DatasetErrorKind kind) {
  switch (kind) {
    case DatasetErrorKind::io: return "I/O error";
    case DatasetErrorKind::malformed_row: return "MalformedRow";
    case DatasetErrorKind::smiles_error: return "SmilesError";
    case DatasetErrorKind::empty_dataset: return "EmptyDataset";
    case DatasetErrorKind::unknown_label: return "UnknownLabel";
    case DatasetErrorKind::unknown_id: return "UnknownId";
    case DatasetErrorKind::empty_series: return "EmptySeries";
    case DatasetErrorKind::series_is_whole_dataset: return "SeriesIsWholeDataset";
  }
  return "DatasetError";
}

std::string location(const std::string& source, std::size_t line) {
  if (source.empty()) return {};
  return line ? source + ":" + std::to_string(line) + ": " : source + ": ";
}

std::optional<Qualifier> parse_qualifier(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty() || cell == "=") return Qualifier::exact;
  if (cell == ">") return Qualifier::greater_than;
  if (cell == "<") return Qualifier::less_than;
  return std::nullopt;
}

std::optional<double> parse_positive(std::string_view cell) {
  cell = trim(cell);
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) return std::nullopt;
  if (!std::isfinite(v) || v <= 0.0) return std::nullopt;
  return v;
}

// Collapses duplicate SMILES, checks ids, fingerprints every record.
Dataset finish(std::vector<Pending> rows, const FingerprintParams& params, const std::string& source) {
  params.validate();
  if (rows.empty()) throw DatasetError(DatasetErrorKind::empty_dataset, source, 0, "no data rows");

  std::vector<Pending> kept;
  std::unordered_map<std::string, std::size_t> by_smiles;
  for (auto& row : rows) {
    auto [it, fresh] = by_smiles.emplace(row.record.smiles, kept.size());
    if (fresh) {
      row.log_sum = std::log(row.record.ic50_nm);
      row.count = 1;
      kept.push_back(std::move(row));
      continue;
    }
    Pending& first = kept[it->second];
    first.log_sum += std::log(row.record.ic50_nm);
    ++first.count;
    if (first.record.qualifier == Qualifier::exact) first.record.qualifier = row.record.qualifier;
  }

  Dataset d;
  d.params = params;
  d.records.reserve(kept.size());
  d.fingerprints.reserve(kept.size());
  std::unordered_set<std::string> ids;
  for (auto& p : kept) {
    if (p.count > 1) p.record.ic50_nm = std::exp(p.log_sum / static_cast<double>(p.count));
    if (!ids.insert(p.record.id).second)
      throw DatasetError(DatasetErrorKind::malformed_row, source, p.line,
                         "duplicate id '" + p.record.id + "' with a different structure");
    try {
      d.fingerprints.push_back(morgan_fingerprint(parse_smiles(p.record.smiles), params));
    } catch (const SmilesError& e) {
      throw DatasetError(DatasetErrorKind::smiles_error, source, p.line, e.what());
    }
    d.records.push_back(std::move(p.record));
  }
  return d;
}

}  // namespace

DatasetError::DatasetError(DatasetErrorKind kind, std::string source, std::size_t line, const std::string& detail)
    : std::runtime_error(location(source, line) + describe(kind) + ": " + detail),
      kind_(kind),
      source_(std::move(source)),
      line_(line) {}

char qualifier_symbol(Qualifier q) noexcept {
  switch (q) {
    case Qualifier::greater_than: return '>';
    case Qualifier::less_than: return '<';
    case Qualifier::exact: break;
  }
  return '=';
}

Label binarize(const ActivityRecord& r, double t_nm) noexcept {
  switch (r.qualifier) {
    case Qualifier::exact:
      return r.ic50_nm < t_nm ? Label::active : Label::inactive;
    case Qualifier::greater_than:
      return r.ic50_nm >= t_nm ? Label::inactive : Label::excluded;
    case Qualifier::less_than:
      return r.ic50_nm <= t_nm ? Label::active : Label::excluded;
  }
  return Label::excluded;
}

Dataset read_csv(std::istream& in, const FingerprintParams& params, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> fields;

  if (!std::getline(in, line)) throw DatasetError(DatasetErrorKind::empty_dataset, source, 0, "missing header row");
  ++line_no;
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (!split_csv_line(line, fields))
    throw DatasetError(DatasetErrorKind::malformed_row, source, line_no, "unterminated quote in header");

  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < fields.size(); ++i) column.emplace(std::string(trim(fields[i])), i);
  for (const char* required : {"id", "smiles", "ic50_nm", "qualifier"}) {
    if (!column.contains(required))
      throw DatasetError(DatasetErrorKind::malformed_row, source, line_no,
                         std::string("header lacks column '") + required + "'");
  }
  const std::size_t n_columns = fields.size();
  const std::size_t c_id = column["id"];
  const std::size_t c_smiles = column["smiles"];
  const std::size_t c_ic50 = column["ic50_nm"];
  const std::size_t c_qual = column["qualifier"];
  const auto series_it = column.find("series");

  std::vector<Pending> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!split_csv_line(line, fields))
      throw DatasetError(DatasetErrorKind::malformed_row, source, line_no, "unterminated quote");
    if (fields.size() != n_columns)
      throw DatasetError(DatasetErrorKind::malformed_row, source, line_no,
                         "expected " + std::to_string(n_columns) + " fields, found " +
                             std::to_string(fields.size()));
    ActivityRecord r;
    r.id = std::string(trim(fields[c_id]));
    r.smiles = std::string(trim(fields[c_smiles]));
    if (r.id.empty()) throw DatasetError(DatasetErrorKind::malformed_row, source, line_no, "empty id");
    if (r.smiles.empty()) throw DatasetError(DatasetErrorKind::malformed_row, source, line_no, "empty smiles");
    const auto ic50 = parse_positive(fields[c_ic50]);
    if (!ic50)
      throw DatasetError(DatasetErrorKind::malformed_row, source, line_no,
                         "ic50_nm '" + fields[c_ic50] + "' is not a positive number");
    r.ic50_nm = *ic50;
    const auto q = parse_qualifier(fields[c_qual]);
    if (!q)
      throw DatasetError(DatasetErrorKind::malformed_row, source, line_no,
                         "qualifier '" + fields[c_qual] + "' must be one of '=', '>', '<' or empty");
    r.qualifier = *q;
    if (series_it != column.end()) {
      auto label = trim(fields[series_it->second]);
      if (!label.empty()) r.series = std::string(label);
    }
    rows.push_back(Pending{std::move(r), line_no, 0.0, 0});
  }
  return finish(std::move(rows), params, source);
}

Dataset load_csv(const std::filesystem::path& path, const FingerprintParams& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(DatasetErrorKind::io, path.string(), 0, "cannot open file");
  return read_csv(in, params, path.string());
}

Dataset make_dataset(std::vector<ActivityRecord> records, const FingerprintParams& params,
                     const std::string& source) {
  std::vector<Pending> rows;
  rows.reserve(records.size());
  std::size_t n = 0;
  for (auto& r : records) {
    if (!(r.ic50_nm > 0.0) || !std::isfinite(r.ic50_nm))
      throw DatasetError(DatasetErrorKind::malformed_row, source, n + 1, "ic50_nm must be positive");
    rows.push_back(Pending{std::move(r), ++n, 0.0, 0});
  }
  return finish(std::move(rows), params, source);
}

void write_csv(std::ostream& out, std::span<const ActivityRecord> records) {
  out << "id,smiles,ic50_nm,qualifier,series\n";
  for (const auto& r : records) {
    out << csv_escape(r.id) << ',' << csv_escape(r.smiles) << ',' << format_double(r.ic50_nm) << ',';
    if (r.qualifier != Qualifier::exact) out << qualifier_symbol(r.qualifier);
    out << ',' << csv_escape(r.series.value_or("")) << '\n';
  }
}

namespace {

SeriesSelection finish_selection(const Dataset& d, const std::vector<bool>& in_series) {
  SeriesSelection sel;
  for (std::size_t i = 0; i < d.size(); ++i) (in_series[i] ? sel.series : sel.complement).push_back(i);
  if (sel.series.empty()) throw DatasetError(DatasetErrorKind::empty_series, "", 0, "series selection is empty");
  if (sel.complement.empty())
    throw DatasetError(DatasetErrorKind::series_is_whole_dataset, "", 0,
                       "series covers every record; nothing left to scan");
  return sel;
}

}  // namespace

SeriesSelection select_series(const Dataset& d, std::string_view label) {
  std::vector<bool> in_series(d.size(), false);
  bool any = false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.records[i].series && *d.records[i].series == label) in_series[i] = any = true;
  }
  if (!any) throw DatasetError(DatasetErrorKind::unknown_label, "", 0, "no record has series '" + std::string(label) + "'");
  return finish_selection(d, in_series);
}

SeriesSelection select_series(const Dataset& d, std::span<const std::string> ids) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < d.size(); ++i) index.emplace(d.records[i].id, i);
  std::vector<bool> in_series(d.size(), false);
  for (const auto& id : ids) {
    auto it = index.find(id);
    if (it == index.end()) throw DatasetError(DatasetErrorKind::unknown_id, "", 0, "unknown record id '" + id + "'");
    in_series[it->second] = true;
  }
  return finish_selection(d, in_series);
}

std::vector<std::string> read_id_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError(DatasetErrorKind::io, path.string(), 0, "cannot open file");
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    auto id = trim(line);
    if (!id.empty()) ids.emplace_back(id);
  }
  return ids;
}

}  // namespace sarfocus
