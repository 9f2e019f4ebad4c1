#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "mck/linalg.hpp"
#include "mck/morse_graph.hpp"
#include "mck/permutohedron.hpp"

namespace mck {

// Relative homology of (sphere minus extrema, saddles). Generators are the 2q edges and
// one transverse edge per cylinder; each cylinder gives the relation
// [bottom circle] - [top circle] = 0. Removing e_l (the first edge of the top circle of
// cylinder l) leaves the basis (te_1..te_n, kept edges).
struct HomologyModel {
  int q = 0, n = 0;
  std::vector<int> removed;      // per cylinder
  std::vector<int> kept;         // ascending
  std::vector<int> column;       // per edge: basis column (n + kept position), -1 if removed
  Mat relations;                 // n x 2q over edges
  Mat expansion;                 // 2q x 2q, row i = coordinates of [e_i]
  Mat core;                      // n x 2q, coordinates of [gamma_l]
  std::vector<std::vector<int>> bottom_edges, top_edges;  // circle traversal from its first edge
  int rank = 0;                  // dimension of the homology, always 2q

  // Coordinates of the chain sum of the given edges.
  Vec chain(const std::vector<int>& edges) const;
};

HomologyModel homology_model(const MorseGraph& g);

// Cohomology coordinates are (u(te_1..te_n), u'(kept)). The twist about gamma_l acts by
// u -> u + <gamma_l, .> u(gamma_l), i.e. adds u(gamma_l) to the te_l coordinate.
struct Transvection {
  int cylinder = 0;
  Vec core;
  Mat matrix;
};
std::vector<Transvection> transvections(const HomologyModel& m);
// Rank of the lattice spanned by the logarithms M - I.
std::size_t translation_rank(const std::vector<Transvection>& ts);

struct CircleClassification {
  int n = 0, nu0 = 0, e = 0, d = 0, c = 0;
  std::vector<std::pair<int, int>> side_fixed;  // fixed points on (bottom, top) side per cylinder
  std::vector<int> order;                       // renumbering: trivial, families, singletons
  std::vector<std::vector<int>> families;       // parallel families of size >= 2, in order
  std::vector<int> nu;                          // nu_0 < nu_1 < ... < nu_e
  std::vector<int> A, B;                        // cylinder indices
};
// Throws UnsupportedScope for non-sphere input.
CircleClassification classify_circles(const MorseGraph& g);

// (2q-1)!!/(2q-2s+1)!!
Rational edge_bound(int q, int s);

// {x in Q^{2q-n} : 1 <= row_i . x <= bound} in the kept-edge coordinates u'.
struct UPolytope {
  Rational bound;
  int ambient = 0;
  Mat rows;                           // 2q x ambient
  int dim = 0;
  std::vector<int> implicit_equalities;  // constraint ids: 2i lower, 2i+1 upper
  Vec interior;                       // a relative interior point
  bool vertices_listed = false;
  std::vector<Vec> vertices;
};
// Vertices are enumerated when ambient <= vertex_limit. Throws InvariantViolation if empty.
UPolytope u_polytope(const MorseGraph& g, const HomologyModel& m, int vertex_limit = 6);

// Range of a linear functional over {x in P : F x = x}; nullopt range when infeasible.
struct Range {
  bool feasible = false;
  Rational lo, hi;
};
Range functional_range(const UPolytope& p, const Vec& functional, const Mat& fix);

struct StabEntry {
  std::vector<int> saddle_perm, edge_perm, cylinder_perm;
  Mat action;           // columns: coordinates of sigma_* of each basis class
  Mat polytope_action;  // induced map on u'
  bool relations_preserved = false;
  FaceAutomorphismReport face;
  bool face_trivial = false, polytope_trivial = false, cylinders_trivial = false, lattice_trivial = false;
  bool shifts_trivial = false;
  bool faithful = false, pi_trivial_on_A = false, degeneracy_ok = false;
  bool admissible = false;
  bool identity = false;
  bool free = false;
  std::string freeness;
};
struct StabReport {
  std::vector<StabEntry> entries;
  bool all_admissible = true;
  bool all_free = true;
};
StabReport check_stab_action(const MorseGraph& g, const HomologyModel& m, const std::vector<Isomorphism>& autos);

nlohmann::json algebra_json(const MorseGraph& g);

}  // namespace mck
