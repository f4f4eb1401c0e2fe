#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "sarfocus/smiles.hpp"
#include "test_util.hpp"

using namespace sarfocus;

namespace {

SmilesErrorKind kind_of(std::string_view s) {
  try {
    parse_smiles(s);
  } catch (const SmilesError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << s;
  return SmilesErrorKind::syntax;
}

int total_h(const Molecule& m) {
  int h = 0;
  for (const auto& a : m.atoms) h += a.hydrogen_count();
  return h;
}

}  // namespace

TEST(Smiles, Methane) {
  const auto m = parse_smiles("C");
  ASSERT_EQ(m.atoms.size(), 1u);
  EXPECT_EQ(m.atoms[0].implicit_h, 4);
  EXPECT_TRUE(m.bonds.empty());
}

TEST(Smiles, Toluene) {
  const auto m = parse_smiles("Cc1ccccc1");
  ASSERT_EQ(m.atoms.size(), 7u);
  EXPECT_FALSE(m.atoms[0].aromatic);
  for (std::size_t i = 1; i < 7; ++i) EXPECT_TRUE(m.atoms[i].aromatic);
  ASSERT_EQ(m.bonds.size(), 7u);
  int single = 0, aromatic = 0;
  for (const auto& b : m.bonds) {
    single += b.order == BondOrder::single;
    aromatic += b.order == BondOrder::aromatic;
  }
  EXPECT_EQ(single, 1);
  EXPECT_EQ(aromatic, 6);
}

TEST(Smiles, AceticAcid) {
  const auto m = parse_smiles("CC(=O)O");
  ASSERT_EQ(m.atoms.size(), 4u);
  ASSERT_EQ(m.bonds.size(), 3u);
  std::multiset<BondOrder> orders;
  for (const auto& b : m.bonds) orders.insert(b.order);
  EXPECT_EQ(orders.count(BondOrder::single), 2u);
  EXPECT_EQ(orders.count(BondOrder::double_), 1u);
  EXPECT_EQ(m.atoms[2].implicit_h, 0);
  EXPECT_EQ(m.atoms[3].implicit_h, 1);
}

TEST(Smiles, HeavyAtomCount) {
  EXPECT_EQ(heavy_atom_count(parse_smiles("C")), 1u);
  EXPECT_EQ(heavy_atom_count(parse_smiles("c1ccccc1")), 6u);
  EXPECT_EQ(heavy_atom_count(parse_smiles("CC(=O)O")), 4u);
}

TEST(Smiles, BracketAtoms) {
  const auto m = parse_smiles("[13CH3][NH3+]");
  ASSERT_EQ(m.atoms.size(), 2u);
  EXPECT_EQ(m.atoms[0].isotope, 13);
  EXPECT_EQ(m.atoms[0].hydrogen_count(), 3);
  EXPECT_EQ(m.atoms[1].formal_charge, 1);
  EXPECT_EQ(m.atoms[1].hydrogen_count(), 3);
  EXPECT_EQ(parse_smiles("[O-]C=O").atoms[0].formal_charge, -1);
}

TEST(Smiles, PercentRingClosureMatchesDigit) {
  const auto a = parse_smiles("C%12CCCCC%12");
  const auto b = parse_smiles("C1CCCCC1");
  EXPECT_EQ(a.bonds.size(), b.bonds.size());
  EXPECT_EQ(total_h(a), total_h(b));
}

TEST(Smiles, StereoMarksAreDroppedWithWarning) {
  std::vector<std::string> warnings;
  const auto m = parse_smiles("F/C=C/F", &warnings);
  EXPECT_EQ(m.atoms.size(), 4u);
  EXPECT_FALSE(warnings.empty());
  const auto plain = parse_smiles("FC=CF");
  EXPECT_EQ(m.bonds.size(), plain.bonds.size());
}

TEST(Smiles, ErrorClasses) {
  EXPECT_EQ(kind_of("C1CC"), SmilesErrorKind::unclosed_ring);
  EXPECT_EQ(kind_of("CC(C"), SmilesErrorKind::unbalanced_parenthesis);
  EXPECT_EQ(kind_of("CC)C"), SmilesErrorKind::unbalanced_parenthesis);
  EXPECT_EQ(kind_of("CXC"), SmilesErrorKind::unknown_atom_token);
  EXPECT_EQ(kind_of("[Zz]"), SmilesErrorKind::unknown_atom_token);
  EXPECT_EQ(kind_of("C(C)(C)(C)(C)C"), SmilesErrorKind::valence_violation);
  EXPECT_EQ(kind_of("O=O=O"), SmilesErrorKind::valence_violation);
  EXPECT_EQ(kind_of("CCO.Cl"), SmilesErrorKind::multi_fragment_unsupported);
  EXPECT_EQ(kind_of(""), SmilesErrorKind::syntax);
}

TEST(Smiles, ErrorCarriesOffset) {
  try {
    parse_smiles("CCXC");
    FAIL();
  } catch (const SmilesError& e) {
    EXPECT_EQ(e.offset(), 2u);
  }
}

// Every corpus entry must agree with counts produced by an independent
// toolkit (tools/gen_smiles_sidecar.py).
TEST(Smiles, CorpusMatchesSidecar) {
  std::ifstream side(testutil::data_dir() / "smiles_corpus_counts.csv");
  ASSERT_TRUE(side);
  std::string line;
  std::getline(side, line);
  int rows = 0;
  while (std::getline(side, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    ASSERT_EQ(f.size(), 5u) << line;
    SCOPED_TRACE(f[0] + " " + f[1]);
    const auto m = parse_smiles(f[1]);
    EXPECT_EQ(m.atoms.size(), std::stoul(f[2]));
    EXPECT_EQ(m.bonds.size(), std::stoul(f[3]));
    EXPECT_EQ(total_h(m), std::stoi(f[4]));
    ++rows;
  }
  EXPECT_GE(rows, 100);
}

// Property: in a SMILES without brackets, atoms equal the count of element
// tokens, and each ring-closure pair plus each non-initial branch/chain step
// yields one bond, so bonds = atoms - 1 + ring closures for one fragment.
TEST(Smiles, BondCountEqualsTreeEdgesPlusRingClosures) {
  std::ifstream corpus(testutil::data_dir() / "smiles_corpus.smi");
  std::string line;
  int checked = 0;
  while (std::getline(corpus, line)) {
    const std::string smi = line.substr(0, line.find(' '));
    if (smi.find('[') != std::string::npos || smi.find('%') != std::string::npos) continue;
    std::size_t digits = 0;
    for (char c : smi) digits += (c >= '0' && c <= '9');
    const auto m = parse_smiles(smi);
    EXPECT_EQ(m.bonds.size(), m.atoms.size() - 1 + digits / 2) << smi;
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Smiles, Deterministic) {
  const auto a = parse_smiles("O=C(Nc1ccccn1)c1ccc(C)cc1");
  const auto b = parse_smiles("O=C(Nc1ccccn1)c1ccc(C)cc1");
  ASSERT_EQ(a.atoms.size(), b.atoms.size());
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    EXPECT_EQ(a.atoms[i].element, b.atoms[i].element);
    EXPECT_EQ(a.atoms[i].implicit_h, b.atoms[i].implicit_h);
  }
  for (std::size_t i = 0; i < a.bonds.size(); ++i) {
    EXPECT_EQ(a.bonds[i].a, b.bonds[i].a);
    EXPECT_EQ(a.bonds[i].b, b.bonds[i].b);
    EXPECT_EQ(a.bonds[i].order, b.bonds[i].order);
  }
}
