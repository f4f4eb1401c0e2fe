#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sarfocus/dataset.hpp"
#include "test_util.hpp"

using namespace sarfocus;

namespace {

Dataset from_text(const std::string& csv) {
  std::istringstream in(csv);
  return read_csv(in, {});
}

DatasetErrorKind error_of(const std::string& csv) {
  try {
    from_text(csv);
  } catch (const DatasetError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return DatasetErrorKind::io;
}

ActivityRecord rec(double ic50, Qualifier q = Qualifier::exact) {
  ActivityRecord r;
  r.ic50_nm = ic50;
  r.qualifier = q;
  return r;
}

}  // namespace

TEST(Dataset, LoadsHypotheticalSet) {
  const auto d = load_csv(testutil::data_dir() / "table1.csv", {});
  ASSERT_EQ(d.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(d.records[i].id, std::to_string(i + 1));
    EXPECT_EQ(*d.records[i].series, i < 4 ? "S_1" : "S_2");
  }
  EXPECT_EQ(d.fingerprints.size(), 8u);
}

TEST(Dataset, DuplicateSmilesCollapseToGeometricMean) {
  const auto d = from_text("id,smiles,ic50_nm,qualifier\na,CCO,100,\nb,CCO,400,\nc,CCN,5,\n");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.records[0].id, "a");
  EXPECT_DOUBLE_EQ(d.records[0].ic50_nm, 200.0);
}

TEST(Dataset, CensoredDuplicateKeepsQualifier) {
  const auto d = from_text("id,smiles,ic50_nm,qualifier\na,CCO,100,\nb,CCO,400,>\n");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.records[0].qualifier, Qualifier::greater_than);
}

TEST(Dataset, Errors) {
  EXPECT_EQ(error_of("id,smiles,ic50_nm\na,CCO,5\n"), DatasetErrorKind::malformed_row);
  EXPECT_EQ(error_of("id,smiles,ic50_nm,qualifier\na,CCO,0,\n"), DatasetErrorKind::malformed_row);
  EXPECT_EQ(error_of("id,smiles,ic50_nm,qualifier\na,CCO,abc,\n"), DatasetErrorKind::malformed_row);
  EXPECT_EQ(error_of("id,smiles,ic50_nm,qualifier\na,CCO,-4,\n"), DatasetErrorKind::malformed_row);
  EXPECT_EQ(error_of("id,smiles,qualifier\na,CCO,\n"), DatasetErrorKind::malformed_row);
  EXPECT_EQ(error_of("id,smiles,ic50_nm,qualifier\na,C1CC,10,\n"), DatasetErrorKind::smiles_error);
  EXPECT_EQ(error_of("id,smiles,ic50_nm,qualifier\n"), DatasetErrorKind::empty_dataset);
  EXPECT_THROW(load_csv("/nonexistent/x.csv", {}), DatasetError);
}

TEST(Dataset, ErrorNamesLine) {
  try {
    from_text("id,smiles,ic50_nm,qualifier\na,CCO,1,\nb,CCN,0,\n");
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Dataset, BinarizeExamples) {
  EXPECT_EQ(binarize(rec(95), 100), Label::active);
  EXPECT_EQ(binarize(rec(253), 100), Label::inactive);
  EXPECT_EQ(binarize(rec(100), 100), Label::inactive);
  EXPECT_EQ(binarize(rec(50, Qualifier::greater_than), 100), Label::excluded);
  EXPECT_EQ(binarize(rec(100, Qualifier::greater_than), 100), Label::inactive);
  EXPECT_EQ(binarize(rec(100, Qualifier::less_than), 100), Label::active);
  EXPECT_EQ(binarize(rec(150, Qualifier::less_than), 100), Label::excluded);
}

TEST(Dataset, BinarizeMonotoneInThreshold) {
  for (double ic50 : {0.5, 3.0, 10.0, 99.9, 100.0, 400.0}) {
    for (auto q : {Qualifier::exact, Qualifier::greater_than, Qualifier::less_than}) {
      bool was_active = false;
      for (double t = 0.1; t < 2000; t *= 1.3) {
        const auto l = binarize(rec(ic50, q), t);
        if (was_active) EXPECT_NE(l, Label::inactive) << ic50 << ' ' << t;
        if (l == Label::active) was_active = true;
      }
    }
  }
}

TEST(Dataset, HypotheticalSetClassesAtHundred) {
  const auto d = load_csv(testutil::data_dir() / "table1.csv", {});
  const int expected[] = {1, 0, 1, 0, 1, 0, 1, 0};
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(static_cast<int>(binarize(d.records[i], 100)), expected[i]);
}

TEST(Dataset, SelectSeries) {
  const auto d = load_csv(testutil::data_dir() / "table1.csv", {});
  const auto sel = select_series(d, "S_1");
  EXPECT_EQ(sel.series, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(sel.complement, (std::vector<std::size_t>{4, 5, 6, 7}));
  EXPECT_THROW(select_series(d, "S_9"), DatasetError);

  const std::vector<std::string> some{"6", "2"};
  EXPECT_EQ(select_series(d, some).series, (std::vector<std::size_t>{1, 5}));
  const std::vector<std::string> all{"1", "2", "3", "4", "5", "6", "7", "8"};
  try {
    select_series(d, all);
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.kind(), DatasetErrorKind::series_is_whole_dataset);
  }
  const std::vector<std::string> unknown{"1", "99"};
  EXPECT_THROW(select_series(d, unknown), DatasetError);
}

TEST(Dataset, WriteThenReadRoundTrips) {
  const auto d = load_csv(testutil::data_dir() / "table1.csv", {});
  std::ostringstream out;
  write_csv(out, d.records);
  const auto again = from_text(out.str());
  EXPECT_EQ(again.records, d.records);
  EXPECT_EQ(again.fingerprints, d.fingerprints);
}
