#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "sarfocus/focus.hpp"

namespace sarfocus {

/// `t_nm,n_sim,mean_auc,valid_replicates`, one row per cell in row-major
/// grid order; mean_auc is empty for undefined cells.
void write_heatmap_csv(std::ostream& out, const FocusResult& r);

/// One id per line.
void write_id_list(std::ostream& out, std::span<const std::string> ids);

/// Color for a mean AUC on the 0.5 to 1.0 viridis ramp, clamped at both ends.
std::string auc_color(double auc);

/// Heatmap: thresholds down, N_sim across, undefined cells grey,
/// the best cell outlined. Deterministic unless a timestamp comment is asked for.
std::string heatmap_svg(const FocusResult& r, std::string_view title, bool timestamp_comment = false);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

}  // namespace sarfocus
