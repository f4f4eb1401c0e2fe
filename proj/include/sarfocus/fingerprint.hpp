#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sarfocus/smiles.hpp"

namespace sarfocus {

struct FingerprintParams {
  int radius = 2;
  std::size_t n_bits = 2048;  // one of 512, 1024, 2048, 4096

  /// Throws FingerprintError(invalid_params) unless the invariants hold.
  void validate() const;

  friend bool operator==(const FingerprintParams&, const FingerprintParams&) = default;
};

enum class FingerprintErrorKind { invalid_params, param_mismatch, empty_reference_set, bad_hex };

class FingerprintError : public std::invalid_argument {
 public:
  FingerprintError(FingerprintErrorKind kind, const std::string& what)
      : std::invalid_argument(what), kind_(kind) {}
  FingerprintErrorKind kind() const noexcept { return kind_; }

 private:
  FingerprintErrorKind kind_;
};

/// Fixed-width bit vector. Bit i lives in word i / 64 at position i % 64.
class Fingerprint {
 public:
  explicit Fingerprint(FingerprintParams params = {});

  const FingerprintParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return params_.n_bits; }

  void set(std::size_t bit) noexcept { words_[bit >> 6] |= std::uint64_t{1} << (bit & 63); }
  bool test(std::size_t bit) const noexcept { return (words_[bit >> 6] >> (bit & 63)) & 1U; }
  std::size_t popcount() const noexcept;
  std::vector<std::size_t> on_bits() const;
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  /// Hex dump, most significant bit first: the first character encodes
  /// bits n-1..n-4, the last character bits 3..0.
  std::string to_hex() const;
  static Fingerprint from_hex(std::string_view hex, FingerprintParams params);

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

 private:
  FingerprintParams params_;
  std::vector<std::uint64_t> words_;
};

/// Hashed circular fingerprint (ECFP-style).
///
/// Radius-0 identifiers hash (atomic number, aromatic flag, formal charge,
/// heavy-atom degree, hydrogen count) through hash_combine from a fixed
/// seed. Each later round rehashes an atom's previous identifier followed
/// by the sorted (bond code, neighbor identifier) pairs, with bond codes
/// single=1, double=2, triple=3, aromatic=4. Every identifier of every round
/// sets bit `id % n_bits`.
Fingerprint morgan_fingerprint(const Molecule& m, const FingerprintParams& p = {});

/// Per-round atom identifiers; element [r][i] is atom i after r rounds.
std::vector<std::vector<std::uint64_t>> morgan_identifiers(const Molecule& m, int radius);

/// Radius-0 identifier for the given atom invariant tuple.
std::uint64_t atom_invariant_hash(int atomic_number, bool aromatic, int formal_charge, int degree,
                                  int hydrogens) noexcept;

/// Bit set by the radius-1 environment of a methyl carbon on an aromatic
/// carbon (the aryl-methyl indicator), for the given width.
std::size_t aryl_methyl_bit(const FingerprintParams& p);

double tanimoto(const Fingerprint& a, const Fingerprint& b);
double mean_tanimoto_to_set(const Fingerprint& q, std::span<const Fingerprint> ref);

}  // namespace sarfocus
