// SPDX-License-Identifier: Apache-2.0
#include "fmg/molecule.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <map>
#include <queue>
#include <set>

#include "fmg/error.hpp"

namespace fmg {

namespace {

struct ElementInfo {
  Element element;
  const char* symbol;
  std::vector<int> valences;
  bool organic_subset;  // may appear without brackets
};

const std::vector<ElementInfo>& element_table() {
  static const std::vector<ElementInfo> table = {
      {Element::C, "C", {4}, true},        {Element::N, "N", {3}, true},
      {Element::O, "O", {2}, true},        {Element::S, "S", {2, 4, 6}, true},
      {Element::F, "F", {1}, true},        {Element::Cl, "Cl", {1}, true},
      {Element::Br, "Br", {1}, true},      {Element::I, "I", {1}, true},
      {Element::Si, "Si", {4}, false},     {Element::P, "P", {3, 5}, true},
  };
  return table;
}

const ElementInfo& info_of(Element e) {
  for (const auto& it : element_table()) {
    if (it.element == e) return it;
  }
  throw Error("unknown element");
}

}  // namespace

const char* element_symbol(Element e) { return info_of(e).symbol; }

std::optional<Element> element_from_symbol(std::string_view s) {
  for (const auto& it : element_table()) {
    if (s == it.symbol) return it.element;
  }
  return std::nullopt;
}

const std::vector<int>& allowed_valences(Element e) { return info_of(e).valences; }

std::vector<int> allowed_valences(Element e, int formal_charge) {
  std::vector<int> out;
  const bool shrinks = (e == Element::C || e == Element::Si);
  for (int v : allowed_valences(e)) {
    int adj = shrinks ? v - std::abs(formal_charge) : v + formal_charge;
    if (adj >= 0) out.push_back(adj);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<int>> MolecularGraph::atom_bonds() const {
  std::vector<std::vector<int>> incidence(atoms.size());
  for (int i = 0; i < bond_count(); ++i) {
    incidence[bonds[i].a].push_back(i);
    incidence[bonds[i].b].push_back(i);
  }
  return incidence;
}

bool MolecularGraph::connected() const {
  if (atoms.empty()) return false;
  auto incidence = atom_bonds();
  std::vector<char> seen(atoms.size(), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int n = 1;
  while (!q.empty()) {
    int a = q.front();
    q.pop();
    for (int bi : incidence[a]) {
      int nb = bonds[bi].other(a);
      if (!seen[nb]) {
        seen[nb] = 1;
        ++n;
        q.push(nb);
      }
    }
  }
  return n == atom_count();
}

int MolecularGraph::degree_order_sum(int atom) const {
  int s = 0;
  for (const Bond& b : bonds) {
    if (b.a == atom || b.b == atom) s += static_cast<int>(b.order);
  }
  return s;
}

void MolecularGraph::check_valences() const {
  for (int i = 0; i < atom_count(); ++i) {
    const Atom& at = atoms[i];
    int total = degree_order_sum(i) + at.hydrogens;
    auto allowed = allowed_valences(at.element, at.formal_charge);
    if (allowed.empty() || total > allowed.back()) {
      throw ValenceError(std::string("valence ") + std::to_string(total) + " exceeds maximum for " +
                         element_symbol(at.element) + " at atom " + std::to_string(i));
    }
  }
}

// --- SMILES parsing -------------------------------------------------------

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  MolecularGraph g;
  // ring closure digit -> (atom id, pending bond order or 0)
  std::map<int, std::pair<int, int>> open_rings;
  std::vector<char> explicit_bond_seen;  // per bond: written bond symbol

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  [[noreturn]] void fail(const std::string& msg) { throw SyntaxError(msg, pos); }
  [[noreturn]] void unsupported(const std::string& msg) { throw UnsupportedFeature(msg, pos); }

  int parse_int() {
    std::size_t start = pos;
    int v = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      ++pos;
    }
    if (pos == start) fail("expected a number");
    return v;
  }

  Element parse_bracket_element() {
    if (done()) fail("unterminated bracket atom");
    char c = peek();
    if (std::islower(static_cast<unsigned char>(c))) unsupported("aromatic atoms are not supported");
    // two-letter symbols first
    if (pos + 1 < text.size()) {
      std::string_view two = text.substr(pos, 2);
      if (auto e = element_from_symbol(two)) {
        pos += 2;
        return *e;
      }
    }
    std::string_view one = text.substr(pos, 1);
    if (auto e = element_from_symbol(one)) {
      ++pos;
      return *e;
    }
    if (c == 'H') unsupported("explicit hydrogen atoms are not supported");
    fail(std::string("unknown element '") + c + "'");
  }

  int parse_bracket_atom() {
    std::size_t open = pos;
    ++pos;  // consume '['
    if (!done() && std::isdigit(static_cast<unsigned char>(peek()))) unsupported("isotopes are not supported");
    Element el = parse_bracket_element();
    int hydrogens = 0;
    int charge = 0;
    while (!done() && peek() != ']') {
      char c = peek();
      if (c == 'H') {
        ++pos;
        hydrogens = 1;
        if (!done() && std::isdigit(static_cast<unsigned char>(peek()))) hydrogens = parse_int();
      } else if (c == '+' || c == '-') {
        int sign = c == '+' ? 1 : -1;
        ++pos;
        int mag = 1;
        if (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
          mag = parse_int();
        } else {
          while (!done() && peek() == c) {
            ++mag;
            ++pos;
          }
        }
        charge = sign * mag;
      } else if (c == ':') {
        ++pos;
        parse_int();  // atom map accepted and dropped
      } else if (c == '@') {
        unsupported("stereo markers are not supported");
      } else {
        fail("unexpected character in bracket atom");
      }
    }
    if (done()) {
      pos = open;
      fail("unterminated bracket atom");
    }
    ++pos;  // consume ']'
    Atom atom;
    atom.element = el;
    atom.formal_charge = charge;
    atom.hydrogens = hydrogens;
    atom.bracket = true;
    g.atoms.push_back(atom);
    return g.atom_count() - 1;
  }

  int parse_organic_atom() {
    char c = peek();
    if (std::islower(static_cast<unsigned char>(c))) unsupported("aromatic atoms are not supported");
    if (pos + 1 < text.size()) {
      std::string_view two = text.substr(pos, 2);
      if (two == "Cl" || two == "Br") {
        pos += 2;
      } else if (auto e2 = element_from_symbol(two); e2 && !info_of(*e2).organic_subset) {
        unsupported(std::string(two) + " requires a bracket atom");
      } else {
        goto single;
      }
      Atom atom;
      atom.element = *element_from_symbol(two);
      g.atoms.push_back(atom);
      return g.atom_count() - 1;
    }
  single:
    std::string_view one = text.substr(pos, 1);
    auto e = element_from_symbol(one);
    if (!e) fail(std::string("unexpected character '") + c + "'");
    if (!info_of(*e).organic_subset) unsupported(std::string(one) + " requires a bracket atom");
    ++pos;
    Atom atom;
    atom.element = *e;
    g.atoms.push_back(atom);
    return g.atom_count() - 1;
  }

  void add_bond(int a, int b, int order) {
    if (a == b) fail("self bond");
    for (const Bond& bd : g.bonds) {
      if ((bd.a == a && bd.b == b) || (bd.a == b && bd.b == a)) fail("duplicate bond");
    }
    g.bonds.push_back(Bond{a, b, static_cast<BondOrder>(order)});
  }

  void parse_chain(int from) {
    int prev = from;
    int pending_order = 0;  // 0 = default single
    while (!done()) {
      char c = peek();
      if (c == ')') return;
      if (c == '(') {
        if (prev < 0) fail("branch before any atom");
        if (pending_order != 0) fail("bond symbol before branch open");
        ++pos;
        parse_chain(prev);
        if (done() || peek() != ')') fail("unbalanced parenthesis");
        ++pos;
        continue;
      }
      if (c == '-' || c == '=' || c == '#') {
        if (pending_order != 0) fail("two consecutive bond symbols");
        pending_order = c == '-' ? 1 : (c == '=' ? 2 : 3);
        ++pos;
        continue;
      }
      if (c == ':' || c == '/' || c == '\\') unsupported("aromatic/stereo bonds are not supported");
      if (c == '.') unsupported("disconnected components are not supported");
      if (c == '%' || std::isdigit(static_cast<unsigned char>(c))) {
        if (prev < 0) fail("ring closure before any atom");
        int digit;
        if (c == '%') {
          ++pos;
          if (pos + 1 >= text.size() + 0 && pos + 1 > text.size()) fail("bad %nn ring closure");
          if (pos + 1 >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])) ||
              !std::isdigit(static_cast<unsigned char>(text[pos + 1])))
            fail("bad %nn ring closure");
          digit = (text[pos] - '0') * 10 + (text[pos + 1] - '0');
          pos += 2;
        } else {
          digit = c - '0';
          ++pos;
        }
        auto it = open_rings.find(digit);
        if (it == open_rings.end()) {
          open_rings.emplace(digit, std::make_pair(prev, pending_order));
        } else {
          auto [other, open_order] = it->second;
          open_rings.erase(it);
          int order = 1;
          if (open_order != 0 && pending_order != 0 && open_order != pending_order)
            fail("conflicting ring closure bond orders");
          if (open_order != 0) order = open_order;
          if (pending_order != 0) order = pending_order;
          add_bond(other, prev, order);
        }
        pending_order = 0;
        continue;
      }
      // an atom
      int atom = (c == '[') ? parse_bracket_atom() : parse_organic_atom();
      if (prev >= 0) add_bond(prev, atom, pending_order == 0 ? 1 : pending_order);
      pending_order = 0;
      prev = atom;
    }
    if (pending_order != 0) fail("dangling bond symbol");
  }
};

int implicit_hydrogens_for(Element e, int charge, int order_sum) {
  auto allowed = allowed_valences(e, charge);
  for (int v : allowed) {
    if (v >= order_sum) return v - order_sum;
  }
  return -1;  // exceeds every allowed valence
}

}  // namespace

MolecularGraph parse_smiles(std::string_view text) {
  Parser p;
  p.text = text;
  p.parse_chain(-1);
  if (!p.done()) throw SyntaxError("unexpected ')'", p.pos);
  if (!p.open_rings.empty())
    throw SyntaxError("unclosed ring bond " + std::to_string(p.open_rings.begin()->first), text.size());
  if (p.g.atoms.empty()) throw SyntaxError("empty SMILES", 0);

  MolecularGraph& g = p.g;
  for (int i = 0; i < g.atom_count(); ++i) {
    Atom& a = g.atoms[i];
    int order_sum = g.degree_order_sum(i);
    if (a.bracket) {
      auto allowed = allowed_valences(a.element, a.formal_charge);
      if (allowed.empty() || order_sum + a.hydrogens > allowed.back())
        throw ValenceError(std::string("valence exceeded for bracket atom ") + std::to_string(i));
    } else {
      int h = implicit_hydrogens_for(a.element, a.formal_charge, order_sum);
      if (h < 0)
        throw ValenceError(std::string("valence exceeded for ") + element_symbol(a.element) + " at atom " +
                           std::to_string(i));
      a.hydrogens = h;
    }
  }
  if (!g.connected()) throw SyntaxError("molecule must be a single component", 0);
  return g;
}

// --- SMILES writing -------------------------------------------------------

namespace {

struct Writer {
  const MolecularGraph& g;
  bool atom_maps;
  std::vector<std::vector<int>> incidence;
  std::vector<char> atom_seen;
  std::vector<char> bond_done;
  // per atom: list of (ring digit, bond id) to emit
  std::vector<std::vector<std::pair<int, int>>> ring_digits;
  std::string out;

  explicit Writer(const MolecularGraph& graph, bool maps)
      : g(graph),
        atom_maps(maps),
        incidence(graph.atom_bonds()),
        atom_seen(graph.atoms.size(), 0),
        bond_done(graph.bonds.size(), 0),
        ring_digits(graph.atoms.size()) {}

  // First pass: classify tree/ring-closure bonds along the same DFS the
  // writer uses, and allocate closure digits in opening order.
  void plan() {
    std::vector<char> visited(g.atoms.size(), 0);
    std::vector<char> edge_used(g.bonds.size(), 0);
    std::vector<std::pair<int, int>> closures;  // (open atom, bond)
    dfs_plan(0, -1, visited, edge_used, closures);
    std::set<int> free_digits;
    std::map<int, int> digit_of_bond;
    int next_digit = 1;
    // digits are emitted per atom in DFS order; allocate smallest free digit
    // when a closure opens, release when it closes.
    std::vector<int> order;
    order.reserve(g.atoms.size());
    std::vector<char> v2(g.atoms.size(), 0);
    dfs_order(0, -1, v2, order);
    std::vector<int> pos_of(g.atoms.size());
    for (std::size_t i = 0; i < order.size(); ++i) pos_of[order[i]] = static_cast<int>(i);
    std::sort(closures.begin(), closures.end(), [&](const auto& x, const auto& y) {
      if (pos_of[x.first] != pos_of[y.first]) return pos_of[x.first] < pos_of[y.first];
      return x.second < y.second;
    });
    struct Open {
      int close_pos;
      int digit;
    };
    std::vector<Open> active;
    for (const auto& [atom, bond] : closures) {
      int other = g.bonds[bond].other(atom);
      int close_pos = pos_of[other];
      int open_pos = pos_of[atom];
      // release digits whose closure happened before this opening
      for (auto it = active.begin(); it != active.end();) {
        if (it->close_pos < open_pos) {
          free_digits.insert(it->digit);
          it = active.erase(it);
        } else {
          ++it;
        }
      }
      int digit;
      if (!free_digits.empty()) {
        digit = *free_digits.begin();
        free_digits.erase(free_digits.begin());
      } else {
        digit = next_digit++;
      }
      active.push_back(Open{close_pos, digit});
      digit_of_bond[bond] = digit;
      ring_digits[atom].push_back({digit, bond});
      ring_digits[other].push_back({digit, bond});
    }
  }

  void dfs_plan(int atom, int via_bond, std::vector<char>& visited, std::vector<char>& edge_used,
                std::vector<std::pair<int, int>>& closures) {
    visited[atom] = 1;
    for (int bi : incidence[atom]) {
      if (bi == via_bond || edge_used[bi]) continue;
      int nb = g.bonds[bi].other(atom);
      edge_used[bi] = 1;
      if (visited[nb]) {
        closures.push_back({nb, bi});  // digit opens at the earlier atom
      } else {
        dfs_plan(nb, bi, visited, edge_used, closures);
      }
    }
  }

  void dfs_order(int atom, int via_bond, std::vector<char>& visited, std::vector<int>& order) {
    visited[atom] = 1;
    order.push_back(atom);
    for (int bi : incidence[atom]) {
      if (bi == via_bond) continue;
      int nb = g.bonds[bi].other(atom);
      if (!visited[nb]) dfs_order(nb, bi, visited, order);
    }
  }

  void bond_symbol(BondOrder order) {
    if (order == BondOrder::Double) out += '=';
    if (order == BondOrder::Triple) out += '#';
  }

  void atom_token(int atom) {
    const Atom& a = g.atoms[atom];
    int order_sum = g.degree_order_sum(atom);
    bool need_bracket = atom_maps || a.formal_charge != 0 ||
                        a.hydrogens != implicit_hydrogens_for(a.element, a.formal_charge, order_sum);
    if (!need_bracket) {
      out += element_symbol(a.element);
      return;
    }
    out += '[';
    out += element_symbol(a.element);
    if (!atom_maps || a.bracket || a.formal_charge != 0 ||
        a.hydrogens != implicit_hydrogens_for(a.element, a.formal_charge, order_sum)) {
      // atom-mapped encodings leave default hydrogens implicit
      if (atom_maps && a.hydrogens == implicit_hydrogens_for(a.element, a.formal_charge, order_sum) &&
          a.formal_charge == 0) {
        // nothing: [C:1] form
      } else {
        if (a.hydrogens == 1) out += 'H';
        if (a.hydrogens > 1) {
          out += 'H';
          out += std::to_string(a.hydrogens);
        }
        if (a.formal_charge > 0) out += a.formal_charge == 1 ? "+" : "+" + std::to_string(a.formal_charge);
        if (a.formal_charge < 0) out += a.formal_charge == -1 ? "-" : "-" + std::to_string(-a.formal_charge);
      }
    }
    if (atom_maps) {
      out += ':';
      out += std::to_string(atom + 1);
    }
    out += ']';
  }

  void write_atom(int atom) {
    atom_seen[atom] = 1;
    atom_token(atom);
    // ring closure digits at this atom (in planned order)
    for (const auto& [digit, bond] : ring_digits[atom]) {
      if (!bond_done[bond]) {
        // opening occurrence carries the bond symbol
        bond_symbol(g.bonds[bond].order);
        bond_done[bond] = 1;
      }
      if (digit >= 10) {
        out += '%';
        out += std::to_string(digit);
      } else {
        out += std::to_string(digit);
      }
    }
    // tree children
    std::vector<int> children;
    for (int bi : incidence[atom]) {
      int nb = g.bonds[bi].other(atom);
      bool is_ring = false;
      for (const auto& [d, b2] : ring_digits[atom]) {
        if (b2 == bi) is_ring = true;
      }
      if (!is_ring && !atom_seen[nb]) children.push_back(bi);
    }
    for (std::size_t i = 0; i < children.size(); ++i) {
      int bi = children[i];
      int nb = g.bonds[bi].other(atom);
      if (atom_seen[nb]) continue;  // may have been reached through a sibling
      bool last = true;
      for (std::size_t j = i + 1; j < children.size(); ++j) {
        if (!atom_seen[g.bonds[children[j]].other(atom)]) last = false;
      }
      if (!last) out += '(';
      bond_symbol(g.bonds[bi].order);
      write_atom(nb);
      if (!last) out += ')';
    }
  }
};

}  // namespace

std::string write_smiles(const MolecularGraph& g) {
  if (g.atoms.empty()) throw Error("cannot write an empty molecule");
  Writer w(g, false);
  w.plan();
  w.write_atom(0);
  return w.out;
}

// --- minimum cycle basis --------------------------------------------------

namespace {

using BondMask = std::vector<std::uint64_t>;

BondMask make_mask(int nbits) { return BondMask((nbits + 63) / 64, 0); }
void set_bit(BondMask& m, int i) { m[i / 64] |= std::uint64_t{1} << (i % 64); }
bool get_bit(const BondMask& m, int i) { return (m[i / 64] >> (i % 64)) & 1; }
void xor_into(BondMask& a, const BondMask& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
}
bool is_zero(const BondMask& m) {
  for (auto w : m)
    if (w) return false;
  return true;
}
int lowest_bit(const BondMask& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i]) return static_cast<int>(i) * 64 + std::countr_zero(m[i]);
  }
  return -1;
}

}  // namespace

RingSet minimal_rings(const MolecularGraph& g) {
  RingSet out;
  const int n = g.atom_count();
  const int m = g.bond_count();
  if (m == 0 || n == 0) return out;
  auto incidence = g.atom_bonds();

  // component count for the cyclomatic number
  int components = 0;
  {
    std::vector<char> seen(n, 0);
    for (int s = 0; s < n; ++s) {
      if (seen[s]) continue;
      ++components;
      std::queue<int> q;
      q.push(s);
      seen[s] = 1;
      while (!q.empty()) {
        int a = q.front();
        q.pop();
        for (int bi : incidence[a]) {
          int nb = g.bonds[bi].other(a);
          if (!seen[nb]) {
            seen[nb] = 1;
            q.push(nb);
          }
        }
      }
    }
  }
  const int target = m - n + components;
  if (target <= 0) return out;

  // Horton candidates: shortest-path trees from every vertex (BFS with
  // neighbor order by atom id for determinism), one candidate per (v, edge).
  struct Candidate {
    int length;
    std::vector<int> bonds_sorted;
    BondMask mask;
  };
  std::vector<Candidate> candidates;
  std::set<std::vector<int>> seen_cycles;

  for (int v = 0; v < n; ++v) {
    std::vector<int> parent_bond(n, -1);
    std::vector<int> dist(n, -1);
    std::queue<int> q;
    q.push(v);
    dist[v] = 0;
    while (!q.empty()) {
      int a = q.front();
      q.pop();
      // neighbors in ascending atom id
      std::vector<std::pair<int, int>> nbs;
      for (int bi : incidence[a]) nbs.push_back({g.bonds[bi].other(a), bi});
      std::sort(nbs.begin(), nbs.end());
      for (auto [nb, bi] : nbs) {
        if (dist[nb] < 0) {
          dist[nb] = dist[a] + 1;
          parent_bond[nb] = bi;
          q.push(nb);
        }
      }
    }
    auto path_bonds = [&](int x) {
      std::vector<int> path;
      while (x != v) {
        int bi = parent_bond[x];
        path.push_back(bi);
        x = g.bonds[bi].other(x);
      }
      return path;
    };
    for (int bi = 0; bi < m; ++bi) {
      int x = g.bonds[bi].a, y = g.bonds[bi].b;
      if (dist[x] < 0 || dist[y] < 0) continue;
      auto px = path_bonds(x);
      auto py = path_bonds(y);
      // paths must be disjoint except at v: their bond sets must not overlap
      BondMask mask = make_mask(m);
      bool dup = false;
      for (int b2 : px) set_bit(mask, b2);
      for (int b2 : py) {
        if (get_bit(mask, b2)) {
          dup = true;
          break;
        }
        set_bit(mask, b2);
      }
      if (dup || get_bit(mask, bi)) continue;
      set_bit(mask, bi);
      // must be a simple cycle: bond count == vertex count; each vertex
      // incident to exactly two cycle bonds
      std::vector<int> bonds_sorted;
      for (int b2 = 0; b2 < m; ++b2)
        if (get_bit(mask, b2)) bonds_sorted.push_back(b2);
      std::map<int, int> touch;
      for (int b2 : bonds_sorted) {
        touch[g.bonds[b2].a]++;
        touch[g.bonds[b2].b]++;
      }
      bool simple = true;
      for (auto [atom, cnt] : touch)
        if (cnt != 2) simple = false;
      if (!simple) continue;
      if (seen_cycles.insert(bonds_sorted).second) {
        candidates.push_back({static_cast<int>(bonds_sorted.size()), bonds_sorted, std::move(mask)});
      }
    }
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.bonds_sorted < b.bonds_sorted;
  });

  // Greedy GF(2) independence.
  std::vector<BondMask> basis;  // row-echelon reduced
  std::vector<int> pivot;
  for (const Candidate& c : candidates) {
    BondMask r = c.mask;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (get_bit(r, pivot[i])) xor_into(r, basis[i]);
    }
    if (is_zero(r)) continue;
    pivot.push_back(lowest_bit(r));
    basis.push_back(r);
    out.rings.push_back(c.bonds_sorted);
    if (static_cast<int>(out.rings.size()) == target) break;
  }
  return out;
}

// --- fingerprint ----------------------------------------------------------

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (i * 8)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}
constexpr std::uint64_t kFnvBasis = 0xcbf29ce484222325ULL;

}  // namespace

Fingerprint fingerprint(const MolecularGraph& g) {
  Fingerprint fp{};
  const int n = g.atom_count();
  auto incidence = g.atom_bonds();
  std::vector<std::uint64_t> inv(n);
  for (int i = 0; i < n; ++i) {
    const Atom& a = g.atoms[i];
    std::uint64_t h = kFnvBasis;
    h = fnv1a(h, static_cast<std::uint64_t>(a.element));
    h = fnv1a(h, static_cast<std::uint64_t>(a.formal_charge + 16));
    h = fnv1a(h, static_cast<std::uint64_t>(a.hydrogens));
    h = fnv1a(h, static_cast<std::uint64_t>(incidence[i].size()));
    h = fnv1a(h, static_cast<std::uint64_t>(g.degree_order_sum(i)));
    inv[i] = h;
  }
  auto set_fp_bit = [&](std::uint64_t h) {
    int bit = static_cast<int>(h % kFingerprintBits);
    fp[bit / 64] |= std::uint64_t{1} << (bit % 64);
  };
  for (int i = 0; i < n; ++i) set_fp_bit(inv[i]);
  for (int radius = 1; radius <= 2; ++radius) {
    std::vector<std::uint64_t> next(n);
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<std::uint64_t, std::uint64_t>> nb;
      for (int bi : incidence[i]) {
        nb.push_back({static_cast<std::uint64_t>(g.bonds[bi].order), inv[g.bonds[bi].other(i)]});
      }
      std::sort(nb.begin(), nb.end());
      std::uint64_t h = kFnvBasis;
      h = fnv1a(h, inv[i]);
      for (auto [o, v] : nb) {
        h = fnv1a(h, o);
        h = fnv1a(h, v);
      }
      next[i] = h;
    }
    inv = std::move(next);
    for (int i = 0; i < n; ++i) set_fp_bit(inv[i]);
  }
  return fp;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  int inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += std::popcount(a[i] & b[i]);
    uni += std::popcount(a[i] | b[i]);
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

// --- substructure search ---------------------------------------------------

namespace {

struct Matcher {
  const MolecularGraph& g;
  const MolecularGraph& p;
  std::vector<std::vector<std::pair<int, int>>> g_adj;  // atom -> (neighbor, order)
  std::vector<std::vector<std::pair<int, int>>> p_adj;
  std::vector<int> map;     // pattern atom -> graph atom or -1
  std::vector<char> used;   // graph atom used
  std::vector<int> order;   // pattern atoms in connected visit order

  Matcher(const MolecularGraph& graph, const MolecularGraph& pattern) : g(graph), p(pattern) {
    g_adj = adjacency(g);
    p_adj = adjacency(p);
    map.assign(p.atom_count(), -1);
    used.assign(g.atom_count(), 0);
    // BFS order so every atom after the first touches an already-mapped one
    std::vector<char> seen(p.atom_count(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
      int a = q.front();
      q.pop();
      order.push_back(a);
      for (auto [nb, o] : p_adj[a]) {
        if (!seen[nb]) {
          seen[nb] = 1;
          q.push(nb);
        }
      }
    }
  }

  static std::vector<std::vector<std::pair<int, int>>> adjacency(const MolecularGraph& m) {
    std::vector<std::vector<std::pair<int, int>>> adj(m.atom_count());
    for (const Bond& b : m.bonds) {
      adj[b.a].push_back({b.b, static_cast<int>(b.order)});
      adj[b.b].push_back({b.a, static_cast<int>(b.order)});
    }
    return adj;
  }

  bool feasible(int pa, int ga) {
    if (p.atoms[pa].element != g.atoms[ga].element) return false;
    // all pattern bonds to already-mapped atoms must exist with equal order
    for (auto [nb, o] : p_adj[pa]) {
      if (map[nb] < 0) continue;
      bool found = false;
      for (auto [gn, go] : g_adj[ga]) {
        if (gn == map[nb] && go == o) found = true;
      }
      if (!found) return false;
    }
    return true;
  }

  bool search(std::size_t idx) {
    if (idx == order.size()) return true;
    int pa = order[idx];
    for (int ga = 0; ga < g.atom_count(); ++ga) {
      if (used[ga] || !feasible(pa, ga)) continue;
      used[ga] = 1;
      map[pa] = ga;
      if (search(idx + 1)) return true;
      used[ga] = 0;
      map[pa] = -1;
    }
    return false;
  }
};

}  // namespace

bool contains_substructure(const MolecularGraph& g, const MolecularGraph& pattern) {
  if (pattern.atoms.empty()) return true;
  if (pattern.atom_count() > g.atom_count() || pattern.bond_count() > g.bond_count()) return false;
  Matcher m(g, pattern);
  return m.search(0);
}

std::vector<std::string> read_smiles_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file: " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    // trim
    auto b = line.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r\n");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace fmg
