// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fmg {

enum class Element : std::uint8_t { C, N, O, S, F, Cl, Br, I, Si, P };

const char* element_symbol(Element e);
std::optional<Element> element_from_symbol(std::string_view s);

// Allowed total valences (bond order sum + hydrogens) for a neutral atom.
const std::vector<int>& allowed_valences(Element e);

// Charge-adjusted allowed valences. Electronegative elements shift by +charge
// (e.g. N+ -> 4, O- -> 1); C and Si lose |charge|.
std::vector<int> allowed_valences(Element e, int formal_charge);

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3 };

struct Atom {
  Element element = Element::C;
  int formal_charge = 0;
  // Hydrogens attached to this atom. Parsing fills this either from a bracket
  // spec or by completing the lowest allowed valence.
  int hydrogens = 0;
  // True when the hydrogen count came from an explicit bracket atom; the
  // writer re-emits such atoms in brackets.
  bool bracket = false;
};

struct Bond {
  int a = 0;  // atom ids, a != b
  int b = 0;
  BondOrder order = BondOrder::Single;

  int other(int atom) const { return atom == a ? b : a; }
};

struct MolecularGraph {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;

  int atom_count() const { return static_cast<int>(atoms.size()); }
  int bond_count() const { return static_cast<int>(bonds.size()); }

  // Bond ids incident to each atom, in insertion order.
  std::vector<std::vector<int>> atom_bonds() const;
  bool connected() const;
  // Sum of bond orders at `atom` (excluding hydrogens).
  int degree_order_sum(int atom) const;
  // Throws ValenceError when some atom exceeds its allowed valence.
  void check_valences() const;
};

struct RingSet {
  // Each ring is a sorted list of bond ids forming a simple cycle.
  std::vector<std::vector<int>> rings;
};

// --- operations ----------------------------------------------------------

// Parses the declared SMILES subset: atoms C,N,O,S,F,Cl,Br,I,Si,P; branches;
// ring-closure digits (and %nn); -,=,# bonds; bracket atoms with charge and
// H-count. Aromatic lowercase, stereo marks and dot-disconnections are
// rejected with UnsupportedFeature.
MolecularGraph parse_smiles(std::string_view text);

std::string write_smiles(const MolecularGraph& g);

// Minimum cycle basis over bonds (Horton candidates + greedy GF(2)
// independence, ties by length then lexicographic bond ids).
RingSet minimal_rings(const MolecularGraph& g);

inline constexpr int kFingerprintBits = 2048;
using Fingerprint = std::array<std::uint64_t, kFingerprintBits / 64>;

// Hashed circular fingerprint, radius 2, 2048 bits.
Fingerprint fingerprint(const MolecularGraph& g);

double tanimoto(const Fingerprint& a, const Fingerprint& b);

// True iff an injective, element- and bond-order-preserving embedding of
// `pattern` into `g` exists. `pattern` must be connected.
bool contains_substructure(const MolecularGraph& g, const MolecularGraph& pattern);

// Dataset file: UTF-8 text, one SMILES per line, '#' comments allowed.
std::vector<std::string> read_smiles_file(const std::string& path);

}  // namespace fmg
