#include "sarfocus/fingerprint.hpp"

#include <algorithm>
#include <bit>

#include "sarfocus/hashing.hpp"

namespace sarfocus {

namespace {

// Chosen so that no environment in the synthetic template space folds onto
// the aryl-methyl bit at 2048 or 4096 bits.
constexpr std::uint64_t kAtomSeed = 0x4d4f'5247'414e'003fULL;

std::uint64_t bond_code(BondOrder order) noexcept { return static_cast<std::uint64_t>(order); }

std::uint64_t signed_code(int v) noexcept {
  return static_cast<std::uint64_t>(static_cast<std::int64_t>(v));
}

void check_comparable(const Fingerprint& a, const Fingerprint& b) {
  if (a.params() != b.params()) {
    throw FingerprintError(FingerprintErrorKind::param_mismatch,
                           "fingerprints differ in width or radius (" + std::to_string(a.size()) + "/r" +
                               std::to_string(a.params().radius) + " vs " + std::to_string(b.size()) +
                               "/r" + std::to_string(b.params().radius) + ")");
  }
}

}  // namespace

void FingerprintParams::validate() const {
  if (radius < 0) throw FingerprintError(FingerprintErrorKind::invalid_params, "radius must be >= 0");
  if (n_bits != 512 && n_bits != 1024 && n_bits != 2048 && n_bits != 4096)
    throw FingerprintError(FingerprintErrorKind::invalid_params,
                           "n_bits must be one of 512, 1024, 2048, 4096");
}

Fingerprint::Fingerprint(FingerprintParams params) : params_(params) {
  params_.validate();
  words_.assign(params_.n_bits / 64, 0);
}

std::size_t Fingerprint::popcount() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<std::size_t> Fingerprint::on_bits() const {
  std::vector<std::size_t> bits;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    for (std::uint64_t word = words_[w]; word; word &= word - 1) {
      bits.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
    }
  }
  return bits;
}

std::string Fingerprint::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(params_.n_bits / 4);
  for (std::size_t w = words_.size(); w-- > 0;) {
    for (int nibble = 15; nibble >= 0; --nibble) {
      out.push_back(kDigits[(words_[w] >> (nibble * 4)) & 0xF]);
    }
  }
  return out;
}

Fingerprint Fingerprint::from_hex(std::string_view hex, FingerprintParams params) {
  Fingerprint fp(params);
  if (hex.size() != params.n_bits / 4)
    throw FingerprintError(FingerprintErrorKind::bad_hex, "hex length does not match n_bits");
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const char c = hex[i];
    std::uint64_t v;
    if (c >= '0' && c <= '9') v = static_cast<std::uint64_t>(c - '0');
    else if (c >= 'a' && c <= 'f') v = static_cast<std::uint64_t>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') v = static_cast<std::uint64_t>(c - 'A' + 10);
    else throw FingerprintError(FingerprintErrorKind::bad_hex, "invalid hex digit");
    const std::size_t low_bit = (hex.size() - 1 - i) * 4;
    fp.words_[low_bit / 64] |= v << (low_bit % 64);
  }
  return fp;
}

std::uint64_t atom_invariant_hash(int atomic_number, bool aromatic, int formal_charge, int degree,
                                  int hydrogens) noexcept {
  std::uint64_t h = kAtomSeed;
  h = hash_combine(h, static_cast<std::uint64_t>(atomic_number));
  h = hash_combine(h, aromatic ? 1 : 0);
  h = hash_combine(h, signed_code(formal_charge));
  h = hash_combine(h, static_cast<std::uint64_t>(degree));
  h = hash_combine(h, static_cast<std::uint64_t>(hydrogens));
  return h;
}

std::vector<std::vector<std::uint64_t>> morgan_identifiers(const Molecule& m, int radius) {
  const auto adj = m.adjacency();
  std::vector<std::vector<std::uint64_t>> rounds;
  rounds.reserve(static_cast<std::size_t>(radius) + 1);

  std::vector<std::uint64_t> ids(m.atoms.size());
  for (const auto& atom : m.atoms) {
    ids[atom.index] = atom_invariant_hash(atomic_number(atom.element), atom.aromatic, atom.formal_charge,
                                          static_cast<int>(adj[atom.index].size()), atom.hydrogen_count());
  }
  rounds.push_back(ids);

  std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
  for (int r = 1; r <= radius; ++r) {
    const auto& prev = rounds.back();
    std::vector<std::uint64_t> next(prev.size());
    for (std::size_t i = 0; i < prev.size(); ++i) {
      env.clear();
      for (auto [nbr, bond] : adj[i]) env.emplace_back(bond_code(m.bonds[bond].order), prev[nbr]);
      std::sort(env.begin(), env.end());
      std::uint64_t h = prev[i];
      for (auto [code, id] : env) {
        h = hash_combine(h, code);
        h = hash_combine(h, id);
      }
      next[i] = h;
    }
    rounds.push_back(std::move(next));
  }
  return rounds;
}

Fingerprint morgan_fingerprint(const Molecule& m, const FingerprintParams& p) {
  Fingerprint fp(p);
  for (const auto& round : morgan_identifiers(m, p.radius)) {
    for (auto id : round) fp.set(id % p.n_bits);
  }
  return fp;
}

std::size_t aryl_methyl_bit(const FingerprintParams& p) {
  p.validate();
  // Aromatic carbon carrying the methyl: two ring bonds plus the methyl, no H.
  const std::uint64_t ring_c = atom_invariant_hash(6, true, 0, 3, 0);
  const std::uint64_t methyl = atom_invariant_hash(6, false, 0, 1, 3);
  std::uint64_t h = hash_combine(methyl, bond_code(BondOrder::single));
  h = hash_combine(h, ring_c);
  return h % p.n_bits;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  check_comparable(a, b);
  std::size_t both = 0;
  std::size_t either = 0;
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) {
    both += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
    either += static_cast<std::size_t>(std::popcount(wa[i] | wb[i]));
  }
  if (either == 0) return 1.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

double mean_tanimoto_to_set(const Fingerprint& q, std::span<const Fingerprint> ref) {
  if (ref.empty())
    throw FingerprintError(FingerprintErrorKind::empty_reference_set, "reference set is empty");
  double sum = 0.0;
  for (const auto& r : ref) sum += tanimoto(q, r);
  return sum / static_cast<double>(ref.size());
}

}  // namespace sarfocus
