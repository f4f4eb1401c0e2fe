#include "sarfocus/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <ctime>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sarfocus/text.hpp"

namespace sarfocus {

namespace {

struct Rgb {
  double r, g, b;
};

// Viridis sampled at five evenly spaced stops.
constexpr std::array<Rgb, 5> kRamp{{
    {0x44, 0x01, 0x54},
    {0x3b, 0x52, 0x8b},
    {0x21, 0x91, 0x8c},
    {0x5e, 0xc9, 0x62},
    {0xfd, 0xe7, 0x25},
}};

std::string nsim_label(std::size_t n) { return std::to_string(n); }

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

void write_heatmap_csv(std::ostream& out, const FocusResult& r) {
  out << "t_nm,n_sim,mean_auc,valid_replicates\n";
  for (std::size_t ti = 0; ti < r.t_grid.size(); ++ti) {
    for (std::size_t ni = 0; ni < r.nsim_grid.size(); ++ni) {
      const auto v = r.cell(ti, ni);
      out << format_double(r.t_grid[ti]) << ',' << r.nsim_grid[ni] << ',' << (v ? format_double(*v) : "") << ','
          << r.valid_counts(static_cast<Eigen::Index>(ti), static_cast<Eigen::Index>(ni)) << '\n';
    }
  }
}

void write_id_list(std::ostream& out, std::span<const std::string> ids) {
  for (const auto& id : ids) out << id << '\n';
}

std::string auc_color(double auc) {
  const double x = std::clamp((auc - 0.5) / 0.5, 0.0, 1.0) * static_cast<double>(kRamp.size() - 1);
  const auto lo = std::min(static_cast<std::size_t>(x), kRamp.size() - 2);
  const double f = x - static_cast<double>(lo);
  auto mix = [&](double a, double b) { return static_cast<int>(std::lround(a + (b - a) * f)); };
  const auto& a = kRamp[lo];
  const auto& b = kRamp[lo + 1];
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b));
  return buf;
}

std::string heatmap_svg(const FocusResult& r, std::string_view title, bool timestamp_comment) {
  constexpr int cell_w = 56, cell_h = 30, left = 90, top = 50, legend_w = 16;
  const int cols = static_cast<int>(r.nsim_grid.size());
  const int rows = static_cast<int>(r.t_grid.size());
  const int width = left + cols * cell_w + 90;
  const int height = top + rows * cell_h + 60;

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  if (timestamp_comment) {
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    s << "<!-- generated " << stamp << " -->\n";
  }
  s << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
  s << "<text x=\"" << left + cols * cell_w / 2 << "\" y=\"" << top - 22
    << "\" text-anchor=\"middle\">N_sim</text>\n";
  s << "<text x=\"12\" y=\"" << top + rows * cell_h / 2 << "\" transform=\"rotate(-90 12 " << top + rows * cell_h / 2
    << ")\" text-anchor=\"middle\">T (nM)</text>\n";

  for (int ni = 0; ni < cols; ++ni) {
    s << "<text x=\"" << left + ni * cell_w + cell_w / 2 << "\" y=\"" << top - 6 << "\" text-anchor=\"middle\">"
      << nsim_label(r.nsim_grid[static_cast<std::size_t>(ni)]) << "</text>\n";
  }
  for (int ti = 0; ti < rows; ++ti) {
    const int y = top + ti * cell_h;
    s << "<text x=\"" << left - 6 << "\" y=\"" << y + cell_h / 2 + 4 << "\" text-anchor=\"end\">"
      << format_double(r.t_grid[static_cast<std::size_t>(ti)]) << "</text>\n";
    for (int ni = 0; ni < cols; ++ni) {
      const int x = left + ni * cell_w;
      const auto v = r.cell(static_cast<std::size_t>(ti), static_cast<std::size_t>(ni));
      s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w << "\" height=\"" << cell_h << "\" fill=\""
        << (v ? auc_color(*v) : "#bdbdbd") << "\"/>\n";
      if (v) {
        s << "<text x=\"" << x + cell_w / 2 << "\" y=\"" << y + cell_h / 2 + 4 << "\" text-anchor=\"middle\" fill=\""
          << (*v < 0.8 ? "#ffffff" : "#000000") << "\">" << fixed(*v, 3) << "</text>\n";
      }
    }
  }
  const int bx = left + static_cast<int>(r.best.nsim_index) * cell_w;
  const int by = top + static_cast<int>(r.best.t_index) * cell_h;
  s << "<rect x=\"" << bx + 1 << "\" y=\"" << by + 1 << "\" width=\"" << cell_w - 2 << "\" height=\"" << cell_h - 2
    << "\" fill=\"none\" stroke=\"#d7191c\" stroke-width=\"3\"/>\n";

  // Legend: 0.5 at the bottom, 1.0 at the top.
  const int lx = left + cols * cell_w + 24;
  const int steps = 20;
  const int lh = rows * cell_h;
  for (int k = 0; k < steps; ++k) {
    const double auc = 1.0 - 0.5 * (k + 0.5) / steps;
    s << "<rect x=\"" << lx << "\" y=\"" << top + k * lh / steps << "\" width=\"" << legend_w << "\" height=\""
      << lh / steps + 1 << "\" fill=\"" << auc_color(auc) << "\"/>\n";
  }
  s << "<text x=\"" << lx + legend_w + 4 << "\" y=\"" << top + 8 << "\">1.0</text>\n";
  s << "<text x=\"" << lx + legend_w + 4 << "\" y=\"" << top + lh << "\">0.5</text>\n";
  s << "<text x=\"" << left << "\" y=\"" << top + lh + 24 << "\">best: T = " << format_double(r.best.t_nm)
    << " nM, N_sim = " << r.best.n_sim << ", mean AUC = " << fixed(r.best.mean_auc, 4) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

}  // namespace sarfocus
