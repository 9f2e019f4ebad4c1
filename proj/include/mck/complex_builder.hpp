#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mck/graph_io.hpp"
#include "mck/linalg.hpp"
#include "mck/morse_graph.hpp"
#include "mck/permutohedron.hpp"

namespace mck {

struct EnumerateOptions {
  int jobs = 1;
  // JSON file mapping a parameter key to the canonical forms of its top classes.
  std::string cache_path;
};

// All single-level classes with the given counts and marking, sorted by canonical form.
// Throws ArgumentError on parameter violations and BoundsError for q > 4.
std::vector<MorseGraph> enumerate_top_classes(int p, int q, int r, const Marking& marks,
                                              const EnumerateOptions& opts = {});
std::string params_key(int p, int q, int r, const Marking& marks);

struct HandleRecord {
  std::string id;  // canonical form
  OrderedPartition J;
  int s = 0, t = 0, n = 0, index = 0;
  int c = 0, d = 0, dim_u = 0, handle_dim = 0;
  int gamma_order = 1;
  bool admissible = true, free = true;
  std::vector<long long> poincare;  // of (S^1)^d / Gamma
};

struct Incidence {
  int source = 0;
  OrderedPartition face;
  int target = 0;
};

struct ComplexK {
  int p = 0, q = 0, r = 0;
  Marking marks;
  std::vector<MorseGraph> graphs;  // ordered by (s, canonical form)
  std::vector<HandleRecord> classes;
  std::vector<Incidence> incidence;
  int top_count = 0;

  int find(const std::string& id) const;  // -1 when absent
};

// Downward closure of the seeds under delta, with one handle record per class.
ComplexK build_complex(const std::vector<MorseGraph>& seeds, int jobs = 1);
// Closure only (no handle algebra); classes ordered as in build_complex.
std::vector<MorseGraph> closure(const std::vector<MorseGraph>& seeds, int jobs = 1);

struct EulerReport {
  long long formula = 0;
  Rational independent;
  bool compact = true;
  bool agree = false;
  std::string note;
};
EulerReport euler_characteristic(const ComplexK& k);

std::vector<long long> q_polynomial(const ComplexK& k);
int complex_dimension(const ComplexK& k);
int complex_rank(const ComplexK& k);
// Connected components of the incidence graph.
int betti0(const ComplexK& k);
// Every incidence target has strictly smaller index, and every non-top class is a target.
bool sole_stratified(const ComplexK& k);

struct MorseSmaleRow {
  int j = 0;
  long long q = 0, alt_q = 0;
  std::optional<long long> betti, alt_b;
  bool inequality = true;  // alternating sums
  bool bounded = true;     // beta_j <= q_j
  bool vanishing_slot = false;  // j >= 3q - 2
};
struct MorseSmaleReport {
  std::vector<MorseSmaleRow> rows;
  bool all_hold = true;
  std::string note;
};
// Rows past the end of betti report q_j only. Throws ArgumentError for negative Betti numbers.
MorseSmaleReport morse_smale_report(const ComplexK& k, const std::optional<std::vector<long long>>& betti);

nlohmann::json complex_to_json(const ComplexK& k);
std::string complex_to_dot(const ComplexK& k);
Catalog to_catalog(const ComplexK& k);

}  // namespace mck
