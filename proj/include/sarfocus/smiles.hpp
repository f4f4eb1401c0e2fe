#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sarfocus {

enum class BondOrder { single = 1, double_ = 2, triple = 3, aromatic = 4 };

struct Atom {
  std::string element;
  bool aromatic = false;
  int formal_charge = 0;
  std::optional<int> explicit_h;  // bracket atoms only
  int implicit_h = 0;             // always 0 for bracket atoms
  int isotope = 0;                // parsed, unused downstream
  bool bracket = false;
  std::size_t index = 0;

  int hydrogen_count() const noexcept { return implicit_h + explicit_h.value_or(0); }
};

struct Bond {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  BondOrder order = BondOrder::single;
};

/// Heavy-atom graph. Atom indices follow token order in the source text;
/// bonds are stored with `a < b` in the order they were closed.
struct Molecule {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::string source;

  /// Adjacency lists as (neighbor, bond index) pairs, in bond order.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency() const;
};

enum class SmilesErrorKind {
  unclosed_ring,
  unbalanced_parenthesis,
  unknown_atom_token,
  valence_violation,
  multi_fragment_unsupported,
  syntax,  // anything else: empty input, dangling bond, duplicate bond, ...
};

const char* to_string(SmilesErrorKind kind) noexcept;

class SmilesError : public std::runtime_error {
 public:
  SmilesError(SmilesErrorKind kind, std::size_t offset, const std::string& detail);

  SmilesErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  SmilesErrorKind kind_;
  std::size_t offset_;
};

/// Parses a single-fragment SMILES string.
///
/// Supported: organic-subset and bracket atoms (isotope, charge, H count),
/// bonds `- = # :`, aromatic lowercase atoms, ring closures `0-9` and `%nn`,
/// branches. Stereo marks (`/ \ @`) are accepted and dropped; a note is
/// appended to `warnings` when it is non-null.
///
/// Implicit hydrogens of organic-subset atoms fill the smallest standard
/// valence that is at least the bond-order sum (aromatic bonds count 1.5).
/// An aromatic atom whose sum overshoots its default valence by at most 1.5
/// is clamped to the largest valence not exceeding the sum and receives no
/// hydrogens, which is what makes fused carbons and pyrrole-type `o`/`s`
/// work without kekulization.
Molecule parse_smiles(std::string_view text, std::vector<std::string>* warnings = nullptr);

inline std::size_t heavy_atom_count(const Molecule& m) noexcept { return m.atoms.size(); }

/// Atomic number for an element symbol (case-sensitive, e.g. "Cl"), or 0.
int atomic_number(std::string_view symbol) noexcept;

}  // namespace sarfocus
