#include "mck/perturbation.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace mck {

namespace {

// Closed strand curves at an intermediate value: between sub-levels k and k+1 every
// saddle with sub <= k is up-resolved (continue at prev(head)), every other one
// down-resolved (continue at next(head)). Only edges of the split level take part.
struct CurveSystem {
  std::vector<int> curve_of;             // per edge, -1 off the split level
  std::vector<std::vector<int>> curves;  // strand sequences
};

CurveSystem curves_between(const MorseGraph& g, const std::vector<int>& sub, int k) {
  CurveSystem cs;
  cs.curve_of.assign(2 * g.q, -1);
  for (int e = 0; e < 2 * g.q; ++e) {
    if (sub[e / 2] < 0 || cs.curve_of[e] != -1) continue;
    std::vector<int> seq;
    int x = e;
    do {
      cs.curve_of[x] = static_cast<int>(cs.curves.size());
      seq.push_back(x);
      const int h = g.head[x];
      x = edge_of_out(sub[dart_saddle(h)] <= k ? dart_prev(h) : dart_next(h));
    } while (x != e);
    cs.curves.push_back(std::move(seq));
  }
  return cs;
}

bool visits(const MorseGraph& g, const std::vector<int>& sub, const std::vector<int>& seq, int k) {
  for (int e : seq)
    if (sub[dart_saddle(g.head[e])] == k) return true;
  return false;
}

// Circle of the new sub-level k graph that a curve traces: its new edges are the strands
// leaving saddles of block k.
CircleKey new_key(const std::vector<int>& sub, const std::vector<int>& seq, int k, Side side) {
  int best = -1;
  for (int e : seq)
    if (sub[e / 2] == k && (best == -1 || e < best)) best = e;
  if (best == -1) throw InvariantViolation("split_level: curve carries no edge of its sub-level");
  return {side, best};
}

}  // namespace

MorseGraph split_level(const MorseGraph& g, int level, const std::vector<std::vector<int>>& blocks) {
  const int s = g.levels();
  if (level < 0 || level >= s) throw ArgumentError("split_level: level out of range");
  const int m = static_cast<int>(blocks.size());
  std::vector<int> sub(g.q, -1);
  int covered = 0;
  for (int k = 0; k < m; ++k) {
    if (blocks[k].empty()) throw ArgumentError("split_level: empty sub-block");
    for (int label : blocks[k]) {
      if (label < 1 || label > g.q || g.level[label - 1] != level)
        throw ArgumentError("split_level: label " + std::to_string(label) + " is not on level " + std::to_string(level));
      if (sub[label - 1] != -1) throw ArgumentError("split_level: sub-blocks overlap");
      sub[label - 1] = k + 1;
      ++covered;
    }
  }
  if (covered != static_cast<int>(std::count(g.level.begin(), g.level.end(), level)))
    throw ArgumentError("split_level: sub-blocks do not cover the level");
  if (m == 1) return g;

  const Topology t = trace(g);
  std::vector<CurveSystem> C;
  for (int k = 0; k <= m; ++k) C.push_back(curves_between(g, sub, k));

  MorseGraph out = g;
  // New heads: follow each strand chain from a block-k out-dart to a block-k in-dart.
  for (int e = 0; e < 2 * g.q; ++e) {
    const int k = sub[e / 2];
    if (k < 0) continue;
    int x = e;
    for (int guard = 0;; ++guard) {
      if (guard > 2 * g.q) throw InvariantViolation("split_level: strand chain does not close");
      const int h = g.head[x];
      const int w = sub[dart_saddle(h)];
      if (w == k) {
        out.head[e] = h;
        break;
      }
      x = edge_of_out(w < k ? dart_prev(h) : dart_next(h));
    }
  }
  for (int v = 0; v < g.q; ++v) {
    if (sub[v] > 0)
      out.level[v] = level + sub[v] - 1;
    else if (g.level[v] > level)
      out.level[v] += m - 1;
  }

  // Attachments of old circles at the split level move to the new circle at the end of
  // the chain of identical curves starting (or ending) at them.
  std::map<CircleKey, CircleKey> moved;
  std::vector<Cylinder> fresh;
  for (int a = 0; a <= m; ++a) {
    for (std::size_t c = 0; c < C[a].curves.size(); ++c) {
      const auto& seq = C[a].curves[c];
      // Chains start where the curve is not also a curve of C[a-1].
      if (a > 0 && !visits(g, sub, seq, a)) continue;
      int b = a;
      while (b < m && !visits(g, sub, seq, b + 1)) ++b;
      std::optional<CircleKey> bottom_old, top_old, bottom_new, top_new;
      if (a == 0)
        bottom_old = t.key(t.lower_of_edge[*std::min_element(seq.begin(), seq.end())]);
      else
        bottom_new = new_key(sub, seq, a, Side::upper);
      if (b == m)
        top_old = t.key(t.upper_of_edge[*std::min_element(seq.begin(), seq.end())]);
      else
        top_new = new_key(sub, seq, b + 1, Side::lower);
      if (bottom_new && top_new)
        fresh.push_back({*bottom_new, *top_new});
      else if (bottom_old && top_new)
        moved[*bottom_old] = *top_new;
      else if (bottom_new && top_old)
        moved[*top_old] = *bottom_new;
      else
        throw InvariantViolation("split_level: curve passes no saddle of the split level");
    }
  }
  auto relocate = [&](CircleKey& k) {
    auto it = moved.find(k);
    if (it != moved.end()) k = it->second;
  };
  for (auto& c : out.caps) relocate(c.circle);
  for (auto& z : out.cylinders) {
    relocate(z.bottom);
    relocate(z.top);
  }
  for (const auto& z : fresh) out.cylinders.push_back(z);
  normalize_keys(out);
  try {
    validate(out);
  } catch (const ValidationError& e) {
    throw InvariantViolation(std::string("split_level produced an invalid graph: ") + e.what());
  }
  return out;
}

namespace {

// The J'-blocks inside block k of J, in order; a single entry when J' leaves it whole.
std::vector<std::vector<int>> sub_blocks(const OrderedPartition& J, int k, const OrderedPartition& target) {
  std::vector<std::vector<int>> out;
  const auto& block = J.block(k);
  for (const auto& b : target.blocks())
    if (std::find(block.begin(), block.end(), b.front()) != block.end()) out.push_back(b);
  return out;
}

}  // namespace

MorseGraph delta(const MorseGraph& g, const OrderedPartition& target) {
  OrderedPartition cur = OrderedPartition::from_levels(g.level);
  if (!refines_or_equal(target, cur)) throw ArgumentError("delta: " + target.str() + " does not refine " + cur.str());
  MorseGraph h = g;
  while (!(cur == target)) {
    for (int k = 0; k < cur.size(); ++k) {
      auto parts = sub_blocks(cur, k, target);
      if (parts.size() < 2) continue;
      std::vector<int> rest;
      for (std::size_t i = 1; i < parts.size(); ++i) rest.insert(rest.end(), parts[i].begin(), parts[i].end());
      std::sort(rest.begin(), rest.end());
      h = split_level(h, k, {parts.front(), rest});
      break;
    }
    cur = OrderedPartition::from_levels(h.level);
  }
  return h;
}

MorseGraph delta_along(const MorseGraph& g, const std::vector<OrderedPartition>& chain) {
  if (chain.empty() || !(chain.front() == OrderedPartition::from_levels(g.level)))
    throw ArgumentError("delta_along: chain must start at the level partition of g");
  MorseGraph h = g;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const auto& prev = chain[i - 1];
    const auto& next = chain[i];
    if (!refines(next, prev) || next.size() != prev.size() + 1)
      throw ArgumentError("delta_along: " + next.str() + " is not a hyperface of " + prev.str());
    for (int k = 0; k < prev.size(); ++k) {
      auto parts = sub_blocks(prev, k, next);
      if (parts.size() == 2) {
        h = split_level(h, k, parts);
        break;
      }
    }
  }
  return h;
}

std::vector<std::vector<OrderedPartition>> maximal_chains(const OrderedPartition& from, const OrderedPartition& to) {
  if (!refines_or_equal(to, from)) throw ArgumentError("maximal_chains: target does not refine source");
  if (from == to) return {{from}};
  std::vector<std::vector<OrderedPartition>> out;
  for (int k = 0; k < from.size(); ++k) {
    auto parts = sub_blocks(from, k, to);
    for (std::size_t cut = 1; cut < parts.size(); ++cut) {
      std::vector<std::vector<int>> blocks;
      for (int j = 0; j < from.size(); ++j) {
        if (j != k) {
          blocks.push_back(from.block(j));
          continue;
        }
        std::vector<int> lo, hi;
        for (std::size_t i = 0; i < parts.size(); ++i) {
          auto& side = i < cut ? lo : hi;
          side.insert(side.end(), parts[i].begin(), parts[i].end());
        }
        std::sort(lo.begin(), lo.end());
        std::sort(hi.begin(), hi.end());
        blocks.push_back(lo);
        blocks.push_back(hi);
      }
      const OrderedPartition step(from.ground(), blocks);
      for (auto& tail : maximal_chains(step, to)) {
        tail.insert(tail.begin(), from);
        out.push_back(std::move(tail));
      }
    }
  }
  return out;
}

MorseGraph merge_all_levels(const MorseGraph& g) {
  validate(g);
  MorseGraph h = g;
  for (int k = g.levels() - 2; k >= 0; --k) {
    const Topology t = trace(h);
    std::vector<Cylinder> kept;
    for (const auto& z : h.cylinders) {
      const int lo = t.atom_level[t.circles[t.circle_index(z.bottom)].atom];
      const int hi = t.atom_level[t.circles[t.circle_index(z.top)].atom];
      if (lo != k || hi != k + 1) {
        kept.push_back(z);
        continue;
      }
      // Zip: the two circles become one strand curve once these heads are exchanged.
      std::swap(h.head[z.bottom.edge], h.head[z.top.edge]);
    }
    h.cylinders = kept;
    for (auto& l : h.level)
      if (l > k) l = k;
    normalize_keys(h);
    try {
      validate(h);
    } catch (const ValidationError& e) {
      throw InvariantViolation(std::string("merge_all_levels produced an invalid graph: ") + e.what());
    }
  }
  return h;
}

}  // namespace mck
