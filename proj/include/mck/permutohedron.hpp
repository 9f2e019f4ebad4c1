#pragma once

#include <compare>
#include <string>
#include <vector>

#include "mck/linalg.hpp"

namespace mck {

// Ordered set partition of the labels {1..q}. Blocks are kept sorted internally;
// their order is significant.
class OrderedPartition {
 public:
  OrderedPartition() = default;
  OrderedPartition(int q, std::vector<std::vector<int>> blocks);
  // level[i] is the 0-based block index of label i+1; levels must cover 0..s-1.
  static OrderedPartition from_levels(const std::vector<int>& level);

  int ground() const { return q_; }
  int size() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& block(int k) const { return blocks_.at(k); }
  const std::vector<int>& levels() const { return level_; }
  int level_of(int label) const { return level_.at(label - 1); }
  std::string str() const;

  friend bool operator==(const OrderedPartition& a, const OrderedPartition& b) {
    return a.q_ == b.q_ && a.level_ == b.level_;
  }
  // Lexicographic on the level-assignment function.
  friend auto operator<=>(const OrderedPartition& a, const OrderedPartition& b) {
    if (auto c = a.q_ <=> b.q_; c != 0) return c;
    return a.level_ <=> b.level_;
  }

 private:
  int q_ = 0;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> level_;
};

// Vertex coordinates are stored doubled: coords2[v][i] = 2*x_i, an odd or even integer
// in the range [1-q, q-1]. Each vertex is listed as the sequence pi_1..pi_q of labels in
// increasing coordinate order.
struct PermFace {
  OrderedPartition partition;
  int dim = 0;
  std::vector<std::vector<int>> vertices;
  std::vector<std::vector<int>> coords2;
};

std::vector<OrderedPartition> enumerate_partitions(int q);
PermFace face_of(const OrderedPartition& J);

// Strict refinement: j1 arises from j2 by splitting blocks into ordered consecutive sub-blocks.
bool refines(const OrderedPartition& j1, const OrderedPartition& j2);
bool refines_or_equal(const OrderedPartition& j1, const OrderedPartition& j2);
// All refinements of J including J itself, sorted.
std::vector<OrderedPartition> refinements(const OrderedPartition& J);

std::vector<int> composition_signature(const OrderedPartition& J);

// values[i] is the value of label i+1.
OrderedPartition partition_of_values(const std::vector<Rational>& values);
// Smallest distance between distinct values; zero when all values coincide.
Rational value_gap(const std::vector<Rational>& values);
// Exact perturbation c' with |c' - c| < eps (Euclidean) and partition_of_values(c') = target.
std::vector<Rational> realize_refinement(const std::vector<Rational>& values,
                                         const OrderedPartition& target, const Rational& eps);

struct FaceAutomorphismReport {
  OrderedPartition image;
  bool maps_to_self = false;
  bool trivial = false;
  bool has_fixed_vertex = false;
  bool subfaces_ok = false;
  bool admissible = false;
};

// sigma[i] is the image of label i+1 (1-based values).
FaceAutomorphismReport induced_face_automorphism(const std::vector<int>& sigma,
                                                 const OrderedPartition& J);

// Face poset of the permutohedron of order q as a DOT digraph (face -> covered subface).
std::string face_poset_dot(int q);

}  // namespace mck
