#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "mck/errors.hpp"
#include "mck/permutohedron.hpp"

namespace mck {

// Darts: saddle v owns darts 4v..4v+3 in counterclockwise order. Even slots are outgoing,
// odd slots incoming. Edge e leaves from out-dart 2e, so saddle v owns edges 2v and 2v+1.
inline int dart_of(int v, int slot) { return 4 * v + slot; }
inline int dart_saddle(int d) { return d / 4; }
inline int dart_slot(int d) { return d % 4; }
inline bool dart_is_out(int d) { return d % 2 == 0; }
inline int dart_next(int d) { return (d & ~3) | ((d + 1) & 3); }
inline int dart_prev(int d) { return (d & ~3) | ((d + 3) & 3); }
inline int edge_tail(int e) { return 2 * e; }
inline int edge_of_out(int d) { return d / 2; }

enum class Side : std::uint8_t { lower = 0, upper = 1 };
enum class Extremum : std::uint8_t { min = 0, max = 1 };

// Marked points of each index are labels 1..hat; fixed points are labels 1..fix.
struct Marking {
  int p_hat = 0, q_hat = 0, r_hat = 0;
  int p_fix = 0, q_fix = 0, r_fix = 0;
  static Marking all(int p, int q, int r) { return {p, q, r, 0, 0, 0}; }
  int marked_total() const { return p_hat + q_hat + r_hat; }
  int fixed_total() const { return p_fix + q_fix + r_fix; }
  friend auto operator<=>(const Marking&, const Marking&) = default;
};

// A boundary circle is named by its side and the smallest edge index it runs along.
struct CircleKey {
  Side side = Side::lower;
  int edge = 0;
  friend auto operator<=>(const CircleKey&, const CircleKey&) = default;
};

struct Cap {
  CircleKey circle;
  Extremum kind = Extremum::min;
  int label = 1;
};

// bottom is an upper circle of the lower atom, top a lower circle of the upper atom.
struct Cylinder {
  CircleKey bottom;
  CircleKey top;
};

struct MorseGraph {
  int p = 0, q = 0, r = 0;
  Marking marks;
  std::vector<int> level;  // per saddle, 0-based
  std::vector<int> head;   // per edge, the incoming dart it ends at
  std::vector<Cap> caps;
  std::vector<Cylinder> cylinders;

  int levels() const;
  bool saddle_marked(int v) const { return v < marks.q_hat; }
  bool saddle_fixed(int v) const { return v < marks.q_fix; }
  bool cap_marked(const Cap& c) const {
    return c.label <= (c.kind == Extremum::min ? marks.p_hat : marks.r_hat);
  }
  bool cap_fixed(const Cap& c) const {
    return c.label <= (c.kind == Extremum::min ? marks.p_fix : marks.r_fix);
  }
};

// Successor of edge e along the upper (resp. lower) boundary circle through its head.
int up_successor(const MorseGraph& g, int e);
int down_successor(const MorseGraph& g, int e);

struct Circle {
  Side side = Side::lower;
  int atom = 0;
  std::vector<int> edges;  // traversal order, starting at the smallest edge
};

// Derived ribbon structure. Atoms are ordered by (level, smallest saddle); circles of an
// atom in tracing order (edges ascending, lower circle before upper circle).
struct Topology {
  std::vector<int> edge_into;  // incoming dart -> edge
  std::vector<std::vector<int>> atoms;
  std::vector<int> atom_of;
  std::vector<int> atom_level;
  std::vector<Circle> circles;
  std::vector<std::vector<int>> atom_circles;
  std::vector<int> upper_of_edge, lower_of_edge;
  std::vector<int> cap_at, cylinder_at;  // per circle, -1 if none

  int circle_index(const CircleKey& k) const;  // -1 when k names no circle
  CircleKey key(int circle) const;
  int circle_of(Side side, int edge) const {
    return side == Side::upper ? upper_of_edge[edge] : lower_of_edge[edge];
  }
};

enum class GraphError {
  non_alternating_vertex,
  unmatched_dart,
  euler_count,
  disconnected,
  cylinder_order,
  cap_wrong_side,
  label_collision,
  circle_attachment,
  bad_reference,
  marking,
};
std::string to_string(GraphError e);

struct ValidationError : std::runtime_error {
  ValidationError(GraphError k, const std::string& msg)
      : std::runtime_error(to_string(k) + ": " + msg), kind(k) {}
  GraphError kind;
};

// Traces atoms and circles and records attachments. Throws ValidationError when the
// dart matching is not a bijection or a circle reference is dangling.
Topology trace(const MorseGraph& g);

struct RegionReport {
  int p = 0, q = 0, r = 0, s = 0, t = 0, n = 0;
  std::vector<int> min_labels, max_labels;
  std::vector<std::pair<int, int>> cylinder_levels;
  bool main_condition = false;  // more than two marked critical points
};

RegionReport validate(const MorseGraph& g);

struct Invariants {
  int s = 0, t = 0, n = 0, q = 0, p = 0, r = 0;
  OrderedPartition J;
};
Invariants invariants(const MorseGraph& g);

// Rewrites every circle key to the canonical (side, smallest edge) name. Keys may name
// any edge on the intended circle beforehand.
void normalize_keys(MorseGraph& g);

// Renumbers saddles (perm[v] = new index) and rotates each vertex by rot[v] in {0, 2}.
MorseGraph permute_saddles(const MorseGraph& g, const std::vector<int>& perm,
                           const std::vector<int>& rot);
// The class of -f: directions flip, levels reverse, minima and maxima swap.
MorseGraph dual(const MorseGraph& g);
// The same function on the oppositely oriented sphere.
MorseGraph mirror(const MorseGraph& g);

// ---- canonical forms and symmetry ----

std::string canonical_form(const MorseGraph& g);
MorseGraph decode_canonical(const std::string& form);

// Maps are indexed by the source graph's darts, saddles, edges, circles (Topology order),
// cylinders and caps (vector order).
struct Isomorphism {
  std::vector<int> dart_map, saddle_map, edge_map, circle_map, cylinder_map, cap_map;
  bool is_identity() const;
};
Isomorphism compose(const Isomorphism& outer, const Isomorphism& inner);

std::vector<Isomorphism> isomorphisms(const MorseGraph& a, const MorseGraph& b, bool first_only = false);
std::vector<Isomorphism> automorphisms(const MorseGraph& g);

}  // namespace mck
