#include "mck/permutohedron.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "mck/errors.hpp"

namespace mck {

OrderedPartition::OrderedPartition(int q, std::vector<std::vector<int>> blocks)
    : q_(q), blocks_(std::move(blocks)), level_(q, -1) {
  if (q < 1) throw ArgumentError("ordered partition needs q >= 1");
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    auto& b = blocks_[k];
    if (b.empty()) throw ArgumentError("ordered partition has an empty block");
    std::sort(b.begin(), b.end());
    for (int x : b) {
      if (x < 1 || x > q) throw ArgumentError("label " + std::to_string(x) + " outside 1.." + std::to_string(q));
      if (level_[x - 1] != -1) throw ArgumentError("label " + std::to_string(x) + " appears twice");
      level_[x - 1] = static_cast<int>(k);
    }
  }
  for (int i = 0; i < q; ++i)
    if (level_[i] == -1) throw ArgumentError("label " + std::to_string(i + 1) + " missing from partition");
}

OrderedPartition OrderedPartition::from_levels(const std::vector<int>& level) {
  int s = 0;
  for (int l : level) {
    if (l < 0) throw ArgumentError("negative level");
    s = std::max(s, l + 1);
  }
  std::vector<std::vector<int>> blocks(s);
  for (std::size_t i = 0; i < level.size(); ++i) blocks[level[i]].push_back(static_cast<int>(i) + 1);
  return OrderedPartition(static_cast<int>(level.size()), std::move(blocks));
}

std::string OrderedPartition::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (k) os << ',';
    os << '{';
    for (std::size_t i = 0; i < blocks_[k].size(); ++i) os << (i ? "," : "") << blocks_[k][i];
    os << '}';
  }
  os << ')';
  return os.str();
}

std::vector<OrderedPartition> enumerate_partitions(int q) {
  if (q < 1 || q > 8) throw BoundsError("enumerate_partitions: q must lie in 1..8");
  std::vector<OrderedPartition> out;
  std::vector<int> lv(q);
  std::vector<int> used(q + 1, 0);
  // Depth-first in lexicographic order of the level tuple; prune branches that can no
  // longer hit every level up to the running maximum.
  std::function<void(int, int)> rec = [&](int pos, int mx) {
    if (pos == q) {
      std::vector<int> zero_based(q);
      for (int i = 0; i < q; ++i) zero_based[i] = lv[i] - 1;
      out.push_back(OrderedPartition::from_levels(zero_based));
      return;
    }
    for (int v = 1; v <= q; ++v) {
      int nmx = std::max(mx, v);
      int missing = 0;
      for (int l = 1; l <= nmx; ++l) missing += (used[l] == 0 && l != v);
      if (missing > q - pos - 1) continue;
      lv[pos] = v;
      ++used[v];
      rec(pos + 1, nmx);
      --used[v];
    }
  };
  rec(0, 0);
  return out;
}

PermFace face_of(const OrderedPartition& J) {
  PermFace f;
  f.partition = J;
  const int q = J.ground();
  f.dim = q - J.size();
  std::vector<std::vector<int>> parts = J.blocks();
  std::function<void(std::size_t, std::vector<int>&)> rec = [&](std::size_t k, std::vector<int>& acc) {
    if (k == parts.size()) {
      f.vertices.push_back(acc);
      return;
    }
    std::vector<int> b = parts[k];
    do {
      std::size_t base = acc.size();
      acc.insert(acc.end(), b.begin(), b.end());
      rec(k + 1, acc);
      acc.resize(base);
    } while (std::next_permutation(b.begin(), b.end()));
  };
  std::vector<int> acc;
  rec(0, acc);
  std::sort(f.vertices.begin(), f.vertices.end());
  for (const auto& pi : f.vertices) {
    std::vector<int> c(q);
    for (int k = 0; k < q; ++k) c[pi[k] - 1] = 2 * (k + 1) - (q + 1);
    f.coords2.push_back(std::move(c));
  }
  return f;
}

bool refines_or_equal(const OrderedPartition& j1, const OrderedPartition& j2) {
  if (j1.ground() != j2.ground()) throw ArgumentError("refines: ground sets differ");
  int last = -1;
  for (const auto& b : j1.blocks()) {
    const int target = j2.level_of(b.front());
    for (int x : b)
      if (j2.level_of(x) != target) return false;
    if (target < last) return false;
    last = target;
  }
  return true;
}

bool refines(const OrderedPartition& j1, const OrderedPartition& j2) {
  return refines_or_equal(j1, j2) && !(j1 == j2);
}

std::vector<OrderedPartition> refinements(const OrderedPartition& J) {
  // Every refinement splits each block independently into an ordered partition of it.
  std::vector<std::vector<std::vector<std::vector<int>>>> per_block;
  for (const auto& b : J.blocks()) {
    std::vector<std::vector<std::vector<int>>> opts;
    for (const auto& sub : enumerate_partitions(static_cast<int>(b.size()))) {
      std::vector<std::vector<int>> mapped;
      for (const auto& sb : sub.blocks()) {
        std::vector<int> m;
        for (int x : sb) m.push_back(b[x - 1]);
        mapped.push_back(std::move(m));
      }
      opts.push_back(std::move(mapped));
    }
    per_block.push_back(std::move(opts));
  }
  std::vector<OrderedPartition> out;
  std::vector<std::vector<int>> acc;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == per_block.size()) {
      out.emplace_back(J.ground(), acc);
      return;
    }
    for (const auto& opt : per_block[k]) {
      std::size_t base = acc.size();
      acc.insert(acc.end(), opt.begin(), opt.end());
      rec(k + 1);
      acc.resize(base);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> composition_signature(const OrderedPartition& J) {
  std::vector<int> sig;
  for (const auto& b : J.blocks()) sig.push_back(static_cast<int>(b.size()));
  return sig;
}

namespace {

// GMP comparisons assume lowest terms; callers may pass values built as Rational(n, d).
std::vector<Rational> reduced(const std::vector<Rational>& values) {
  std::vector<Rational> out = values;
  for (auto& x : out) x.canonicalize();
  return out;
}

}  // namespace

OrderedPartition partition_of_values(const std::vector<Rational>& raw) {
  if (raw.empty()) throw ArgumentError("partition_of_values: empty cochain");
  const std::vector<Rational> values = reduced(raw);
  std::vector<Rational> distinct = values;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<int> level(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    level[i] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), values[i]) - distinct.begin());
  return OrderedPartition::from_levels(level);
}

Rational value_gap(const std::vector<Rational>& values) {
  std::vector<Rational> d = reduced(values);
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  Rational gap = 0;
  for (std::size_t i = 1; i < d.size(); ++i) {
    Rational g = d[i] - d[i - 1];
    if (i == 1 || g < gap) gap = g;
  }
  return gap;
}

std::vector<Rational> realize_refinement(const std::vector<Rational>& values,
                                         const OrderedPartition& target, const Rational& eps) {
  if (eps <= 0) throw ArgumentError("realize_refinement: eps must be positive");
  const OrderedPartition J = partition_of_values(values);
  if (!refines_or_equal(target, J)) throw ArgumentError("realize_refinement: target does not refine J(c)");
  const int q = J.ground();
  Rational scale = eps;
  Rational gap = value_gap(values);
  if (gap > 0 && gap < scale) scale = gap;
  // Shifts are multiples of step below (q-1)*step, so every coordinate moves by less than
  // gap/2 and the Euclidean norm stays below eps.
  const Rational step = scale / (2 * q * q);
  std::vector<Rational> out = reduced(values);
  std::vector<int> first_sub(J.size(), -1);
  for (int k = 0; k < target.size(); ++k) {
    const int parent = J.level_of(target.block(k).front());
    if (first_sub[parent] == -1) first_sub[parent] = k;
    for (int x : target.block(k)) out[x - 1] += step * (k - first_sub[parent]);
  }
  return out;
}

FaceAutomorphismReport induced_face_automorphism(const std::vector<int>& sigma,
                                                 const OrderedPartition& J) {
  const int q = J.ground();
  if (static_cast<int>(sigma.size()) != q) throw ArgumentError("sigma has the wrong length");
  std::vector<int> seen(q + 1, 0);
  for (int x : sigma) {
    if (x < 1 || x > q || seen[x]++) throw ArgumentError("sigma is not a permutation");
  }
  auto apply = [&](const OrderedPartition& P) {
    std::vector<std::vector<int>> blocks;
    for (const auto& b : P.blocks()) {
      std::vector<int> m;
      for (int x : b) m.push_back(sigma[x - 1]);
      blocks.push_back(std::move(m));
    }
    return OrderedPartition(q, std::move(blocks));
  };
  FaceAutomorphismReport rep;
  rep.image = apply(J);
  rep.maps_to_self = rep.image == J;
  rep.trivial = true;
  for (int i = 0; i < q; ++i) rep.trivial = rep.trivial && sigma[i] == i + 1;
  if (!rep.maps_to_self) return rep;

  auto vertex_set = [](const OrderedPartition& P) {
    auto f = face_of(P);
    return std::set<std::vector<int>>(f.vertices.begin(), f.vertices.end());
  };
  for (const auto& pi : face_of(J).vertices) {
    std::vector<int> img(q);
    for (int k = 0; k < q; ++k) img[k] = sigma[pi[k] - 1];
    if (img == pi) rep.has_fixed_vertex = true;
  }
  rep.subfaces_ok = true;
  for (const auto& sub : refinements(J)) {
    const auto img = apply(sub);
    if (img == sub) continue;
    const auto a = vertex_set(sub), b = vertex_set(img);
    for (const auto& v : a)
      if (b.count(v)) rep.subfaces_ok = false;
  }
  rep.admissible = rep.trivial || (!rep.has_fixed_vertex && rep.subfaces_ok);
  return rep;
}

std::string face_poset_dot(int q) {
  const auto parts = enumerate_partitions(q);
  std::map<OrderedPartition, std::size_t> id;
  for (std::size_t i = 0; i < parts.size(); ++i) id[parts[i]] = i;
  std::ostringstream os;
  os << "digraph permutohedron_" << q << " {\n";
  for (std::size_t i = 0; i < parts.size(); ++i)
    os << "  f" << i << " [label=\"" << parts[i].str() << "\\ndim " << q - parts[i].size() << "\"];\n";
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = 0; j < parts.size(); ++j)
      if (parts[j].size() == parts[i].size() + 1 && refines(parts[j], parts[i]))
        os << "  f" << i << " -> f" << j << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace mck
