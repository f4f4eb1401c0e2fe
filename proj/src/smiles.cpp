#include "sarfocus/smiles.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <span>

namespace sarfocus {

namespace {

constexpr std::array<std::string_view, 118> kElements = {
    "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si", "P",
    "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh",
    "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",  "Re",
    "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th",
    "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db",
    "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

// Standard valences of the organic subset, ascending.
std::span<const int> standard_valences(std::string_view element) {
  static constexpr int kB[] = {3};
  static constexpr int kC[] = {4};
  static constexpr int kN[] = {3, 5};
  static constexpr int kO[] = {2};
  static constexpr int kP[] = {3, 5};
  static constexpr int kS[] = {2, 4, 6};
  static constexpr int kHalogen[] = {1};
  if (element == "B") return kB;
  if (element == "C") return kC;
  if (element == "N") return kN;
  if (element == "O") return kO;
  if (element == "P") return kP;
  if (element == "S") return kS;
  return kHalogen;  // F, Cl, Br, I
}

std::string capitalize(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

struct RingOpening {
  std::size_t atom;
  std::optional<BondOrder> order;
  std::size_t offset;
};

class Parser {
 public:
  Parser(std::string_view text, std::vector<std::string>* warnings)
      : text_(text), warnings_(warnings) {}

  Molecule run() {
    if (text_.empty()) fail(SmilesErrorKind::syntax, 0, "empty SMILES");
    while (pos_ < text_.size()) step();
    if (pending_) fail(SmilesErrorKind::syntax, pending_offset_, "bond symbol without a following atom");
    if (!branches_.empty())
      fail(SmilesErrorKind::unbalanced_parenthesis, branch_offsets_.back(), "unclosed '('");
    if (!rings_.empty()) {
      const auto& [label, open] = *rings_.begin();
      fail(SmilesErrorKind::unclosed_ring, open.offset,
           "ring closure " + std::to_string(label) + " never closed");
    }
    assign_hydrogens();
    mol_.source = std::string(text_);
    return std::move(mol_);
  }

 private:
  [[noreturn]] void fail(SmilesErrorKind kind, std::size_t offset, const std::string& what) const {
    throw SmilesError(kind, offset, what);
  }

  void warn(std::size_t offset, const std::string& what) {
    if (warnings_) warnings_->push_back("offset " + std::to_string(offset) + ": " + what);
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void step() {
    const char c = peek();
    const std::size_t at = pos_;
    switch (c) {
      case '(':
        if (!prev_) fail(SmilesErrorKind::unbalanced_parenthesis, at, "branch before any atom");
        if (pending_) fail(SmilesErrorKind::syntax, at, "bond symbol before '('");
        branches_.push_back(*prev_);
        branch_offsets_.push_back(at);
        ++pos_;
        if (peek() == ')') fail(SmilesErrorKind::syntax, at, "empty branch");
        return;
      case ')':
        if (branches_.empty()) fail(SmilesErrorKind::unbalanced_parenthesis, at, "unmatched ')'");
        if (pending_) fail(SmilesErrorKind::syntax, pending_offset_, "bond symbol without a following atom");
        prev_ = branches_.back();
        branches_.pop_back();
        branch_offsets_.pop_back();
        ++pos_;
        return;
      case '-': set_pending(BondOrder::single, at); return;
      case '=': set_pending(BondOrder::double_, at); return;
      case '#': set_pending(BondOrder::triple, at); return;
      case ':': set_pending(BondOrder::aromatic, at); return;
      case '/':
      case '\\':
        warn(at, std::string("directional bond '") + c + "' treated as single");
        set_pending(BondOrder::single, at);
        return;
      case '.':
        fail(SmilesErrorKind::multi_fragment_unsupported, at, "'.' separated fragments are not supported");
      case '%':
        ring_closure(at);
        return;
      case '[':
        bracket_atom();
        return;
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      ring_closure(at);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '*') {
      organic_atom();
      return;
    }
    fail(SmilesErrorKind::syntax, at, std::string("unexpected character '") + c + "'");
  }

  void set_pending(BondOrder order, std::size_t at) {
    if (pending_) fail(SmilesErrorKind::syntax, at, "two consecutive bond symbols");
    if (!prev_) fail(SmilesErrorKind::syntax, at, "bond symbol before any atom");
    pending_ = order;
    pending_offset_ = at;
    ++pos_;
  }

  void organic_atom() {
    const std::size_t at = pos_;
    const char c = peek();
    Atom atom;
    if (c == 'C' && peek(1) == 'l') {
      atom.element = "Cl";
      pos_ += 2;
    } else if (c == 'B' && peek(1) == 'r') {
      atom.element = "Br";
      pos_ += 2;
    } else if (std::string_view("BCNOPSFI").find(c) != std::string_view::npos) {
      atom.element = std::string(1, c);
      ++pos_;
    } else if (std::string_view("bcnops").find(c) != std::string_view::npos) {
      atom.element = capitalize(std::string(1, c));
      atom.aromatic = true;
      ++pos_;
    } else {
      fail(SmilesErrorKind::unknown_atom_token, at, std::string("unknown atom token '") + c + "'");
    }
    add_atom(std::move(atom), at);
  }

  int read_int() {
    int v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      ++pos_;
    }
    return v;
  }

  void bracket_atom() {
    const std::size_t open = pos_;
    ++pos_;  // '['
    Atom atom;
    atom.bracket = true;
    if (std::isdigit(static_cast<unsigned char>(peek()))) atom.isotope = read_int();

    const char c0 = peek();
    const char c1 = peek(1);
    if (std::islower(static_cast<unsigned char>(c0))) {
      static constexpr std::string_view kAromatic2[] = {"se", "as", "te"};
      const std::string two{c0, c1};
      if (std::find(std::begin(kAromatic2), std::end(kAromatic2), two) != std::end(kAromatic2)) {
        atom.element = capitalize(two);
        pos_ += 2;
      } else if (std::string_view("bcnops").find(c0) != std::string_view::npos) {
        atom.element = capitalize(std::string(1, c0));
        ++pos_;
      } else {
        fail(SmilesErrorKind::unknown_atom_token, open, "unknown aromatic symbol in bracket atom");
      }
      atom.aromatic = true;
    } else if (std::isupper(static_cast<unsigned char>(c0))) {
      const std::string two{c0, c1};
      if (std::islower(static_cast<unsigned char>(c1)) && atomic_number(two) != 0) {
        atom.element = two;
        pos_ += 2;
      } else if (atomic_number(std::string(1, c0)) != 0) {
        atom.element = std::string(1, c0);
        ++pos_;
      } else {
        fail(SmilesErrorKind::unknown_atom_token, open, "unknown element in bracket atom");
      }
    } else {
      fail(SmilesErrorKind::unknown_atom_token, open, "bracket atom without element symbol");
    }

    if (peek() == '@') {
      const std::size_t at = pos_;
      ++pos_;
      if (peek() == '@') {
        ++pos_;
      } else if (std::isupper(static_cast<unsigned char>(peek())) &&
                 std::isupper(static_cast<unsigned char>(peek(1)))) {
        pos_ += 2;  // @TH1, @SP2, ...
        read_int();
      }
      warn(at, "chirality mark discarded");
    }
    if (peek() == 'H') {
      ++pos_;
      atom.explicit_h = std::isdigit(static_cast<unsigned char>(peek())) ? read_int() : 1;
    } else {
      atom.explicit_h = 0;
    }
    if (peek() == '+' || peek() == '-') {
      const char sign = peek();
      const int unit = sign == '+' ? 1 : -1;
      ++pos_;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        atom.formal_charge = unit * read_int();
      } else {
        int n = 1;
        while (peek() == sign) {
          ++n;
          ++pos_;
        }
        atom.formal_charge = unit * n;
      }
    }
    if (peek() == ':') {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        fail(SmilesErrorKind::syntax, pos_, "atom class requires digits");
      read_int();
    }
    if (peek() != ']') fail(SmilesErrorKind::unknown_atom_token, open, "malformed bracket atom");
    ++pos_;
    add_atom(std::move(atom), open);
  }

  void add_atom(Atom atom, std::size_t at) {
    atom.index = mol_.atoms.size();
    mol_.atoms.push_back(std::move(atom));
    atom_offsets_.push_back(at);
    const std::size_t idx = mol_.atoms.size() - 1;
    if (prev_) {
      add_bond(*prev_, idx, pending_, pending_ ? pending_offset_ : at);
    }
    pending_.reset();
    prev_ = idx;
  }

  void ring_closure(std::size_t at) {
    if (!prev_) fail(SmilesErrorKind::syntax, at, "ring closure before any atom");
    int label;
    if (peek() == '%') {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek())) ||
          !std::isdigit(static_cast<unsigned char>(peek(1))))
        fail(SmilesErrorKind::syntax, at, "'%' must be followed by two digits");
      label = (peek() - '0') * 10 + (peek(1) - '0');
      pos_ += 2;
    } else {
      label = peek() - '0';
      ++pos_;
    }
    const auto order = pending_;
    pending_.reset();
    auto it = rings_.find(label);
    if (it == rings_.end()) {
      rings_.emplace(label, RingOpening{*prev_, order, at});
      return;
    }
    const RingOpening open = it->second;
    rings_.erase(it);
    if (open.order && order && *open.order != *order)
      fail(SmilesErrorKind::syntax, at, "conflicting bond orders on ring closure");
    add_bond(open.atom, *prev_, order ? order : open.order, at);
  }

  void add_bond(std::size_t u, std::size_t v, std::optional<BondOrder> order, std::size_t at) {
    if (u == v) fail(SmilesErrorKind::syntax, at, "atom bonded to itself");
    const std::size_t a = std::min(u, v);
    const std::size_t b = std::max(u, v);
    for (const auto& bond : mol_.bonds) {
      if (bond.a == a && bond.b == b) fail(SmilesErrorKind::syntax, at, "duplicate bond");
    }
    const bool both_aromatic = mol_.atoms[a].aromatic && mol_.atoms[b].aromatic;
    BondOrder resolved = order.value_or(both_aromatic ? BondOrder::aromatic : BondOrder::single);
    if (resolved == BondOrder::aromatic && !both_aromatic)
      fail(SmilesErrorKind::syntax, at, "aromatic bond between non-aromatic atoms");
    mol_.bonds.push_back(Bond{a, b, resolved});
  }

  void assign_hydrogens() {
    std::vector<double> order_sum(mol_.atoms.size(), 0.0);
    for (const auto& bond : mol_.bonds) {
      const double w = bond.order == BondOrder::aromatic ? 1.5 : static_cast<double>(bond.order);
      order_sum[bond.a] += w;
      order_sum[bond.b] += w;
    }
    for (auto& atom : mol_.atoms) {
      if (atom.bracket) continue;
      const auto valences = standard_valences(atom.element);
      double sum = order_sum[atom.index];
      if (atom.aromatic && sum > valences.front()) {
        int clamp = valences.front();
        for (int v : valences) {
          if (v > sum) break;
          clamp = v;
        }
        if (sum - clamp <= 1.5) sum = clamp;
      }
      // Half-integer sums (odd aromatic bond count) round up.
      const int effective = static_cast<int>(std::floor(sum + 0.6));
      auto fit = std::find_if(valences.begin(), valences.end(), [&](int v) { return v >= effective; });
      if (fit == valences.end()) {
        throw SmilesError(SmilesErrorKind::valence_violation, atom_offsets_[atom.index],
                          "atom " + std::to_string(atom.index) + " (" + atom.element +
                              ") exceeds its maximum standard valence");
      }
      atom.implicit_h = *fit - effective;
    }
  }

  std::string_view text_;
  std::vector<std::string>* warnings_;
  std::size_t pos_ = 0;
  Molecule mol_;
  std::optional<std::size_t> prev_;
  std::optional<BondOrder> pending_;
  std::size_t pending_offset_ = 0;
  std::vector<std::size_t> branches_;
  std::vector<std::size_t> branch_offsets_;
  std::map<int, RingOpening> rings_;
  std::vector<std::size_t> atom_offsets_;
};

}  // namespace

const char* to_string(SmilesErrorKind kind) noexcept {
  switch (kind) {
    case SmilesErrorKind::unclosed_ring: return "UnclosedRing";
    case SmilesErrorKind::unbalanced_parenthesis: return "UnbalancedParenthesis";
    case SmilesErrorKind::unknown_atom_token: return "UnknownAtomToken";
    case SmilesErrorKind::valence_violation: return "ValenceViolation";
    case SmilesErrorKind::multi_fragment_unsupported: return "MultiFragmentUnsupported";
    case SmilesErrorKind::syntax: return "SyntaxError";
  }
  return "SmilesError";
}

SmilesError::SmilesError(SmilesErrorKind kind, std::size_t offset, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), offset_(offset) {}

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> Molecule::adjacency() const {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(atoms.size());
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    adj[bonds[i].a].emplace_back(bonds[i].b, i);
    adj[bonds[i].b].emplace_back(bonds[i].a, i);
  }
  return adj;
}

Molecule parse_smiles(std::string_view text, std::vector<std::string>* warnings) {
  return Parser(text, warnings).run();
}

int atomic_number(std::string_view symbol) noexcept {
  for (std::size_t i = 0; i < kElements.size(); ++i) {
    if (kElements[i] == symbol) return static_cast<int>(i) + 1;
  }
  return 0;
}

}  // namespace sarfocus
