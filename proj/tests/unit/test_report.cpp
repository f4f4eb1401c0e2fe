#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "sarfocus/report.hpp"

using namespace sarfocus;

namespace {

FocusResult tiny() {
  FocusResult r;
  r.t_grid = {10.0, 100.0};
  r.nsim_grid = {0, 5};
  r.mean_auc.resize(2, 2);
  r.mean_auc << 0.75, std::numeric_limits<double>::quiet_NaN(), 0.5, 0.875;
  r.valid_counts.resize(2, 2);
  r.valid_counts << 4, 1, 4, 4;
  r.replicates = 4;
  r.best = {100.0, 5, 0.875, 1, 1};
  return r;
}

}  // namespace

TEST(Report, HeatmapCsv) {
  std::ostringstream out;
  write_heatmap_csv(out, tiny());
  EXPECT_EQ(out.str(),
            "t_nm,n_sim,mean_auc,valid_replicates\n"
            "10,0,0.75,4\n"
            "10,5,,1\n"
            "100,0,0.5,4\n"
            "100,5,0.875,4\n");
}

TEST(Report, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Report, ColorRampEnds) {
  EXPECT_EQ(auc_color(0.5), "#440154");
  EXPECT_EQ(auc_color(1.0), "#fde725");
  EXPECT_EQ(auc_color(0.1), auc_color(0.5));
  EXPECT_EQ(auc_color(1.3), auc_color(1.0));
}

TEST(Report, SvgMarksUndefinedAndBest) {
  const auto svg = heatmap_svg(tiny(), "t");
  EXPECT_NE(svg.find("#bdbdbd"), std::string::npos);
  EXPECT_NE(svg.find("#d7191c"), std::string::npos);
  EXPECT_EQ(svg, heatmap_svg(tiny(), "t"));
  EXPECT_EQ(svg.find("generated"), std::string::npos);
}
