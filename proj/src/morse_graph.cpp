#include "mck/morse_graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace mck {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

// Everything in Topology except attachments; assumes a well-formed dart matching.
Topology trace_circles(const MorseGraph& g) {
  const int q = g.q;
  if (q < 1) throw ValidationError(GraphError::bad_reference, "no saddles");
  if (static_cast<int>(g.level.size()) != q || static_cast<int>(g.head.size()) != 2 * q)
    throw ValidationError(GraphError::bad_reference, "level/head arrays do not match q");
  Topology t;
  t.edge_into.assign(4 * q, -1);
  for (int e = 0; e < 2 * q; ++e) {
    const int h = g.head[e];
    if (h < 0 || h >= 4 * q || dart_is_out(h))
      throw ValidationError(GraphError::unmatched_dart, "edge " + std::to_string(e) + " does not end at an incoming dart");
    if (t.edge_into[h] != -1)
      throw ValidationError(GraphError::unmatched_dart, "incoming dart " + std::to_string(h) + " is matched twice");
    t.edge_into[h] = e;
  }
  for (int d = 1; d < 4 * q; d += 2)
    if (t.edge_into[d] == -1) throw ValidationError(GraphError::unmatched_dart, "incoming dart " + std::to_string(d) + " is unmatched");
  for (int e = 0; e < 2 * q; ++e)
    if (g.level[e / 2] != g.level[dart_saddle(g.head[e])])
      throw ValidationError(GraphError::bad_reference, "edge " + std::to_string(e) + " joins saddles on different levels");

  UnionFind uf(q);
  for (int e = 0; e < 2 * q; ++e) uf.join(e / 2, dart_saddle(g.head[e]));
  std::vector<std::vector<int>> comps(q);
  for (int v = 0; v < q; ++v) comps[uf.find(v)].push_back(v);
  for (auto& c : comps)
    if (!c.empty()) t.atoms.push_back(c);
  std::sort(t.atoms.begin(), t.atoms.end(), [&](const auto& x, const auto& y) {
    return std::pair(g.level[x[0]], x[0]) < std::pair(g.level[y[0]], y[0]);
  });
  t.atom_of.assign(q, -1);
  for (std::size_t a = 0; a < t.atoms.size(); ++a) {
    for (int v : t.atoms[a]) t.atom_of[v] = static_cast<int>(a);
    t.atom_level.push_back(g.level[t.atoms[a][0]]);
  }

  t.upper_of_edge.assign(2 * q, -1);
  t.lower_of_edge.assign(2 * q, -1);
  t.atom_circles.assign(t.atoms.size(), {});
  for (std::size_t a = 0; a < t.atoms.size(); ++a) {
    for (int v : t.atoms[a]) {
      for (int e : {2 * v, 2 * v + 1}) {
        for (Side side : {Side::lower, Side::upper}) {
          auto& slot = side == Side::upper ? t.upper_of_edge : t.lower_of_edge;
          if (slot[e] != -1) continue;
          Circle c;
          c.side = side;
          c.atom = static_cast<int>(a);
          int x = e;
          do {
            slot[x] = static_cast<int>(t.circles.size());
            c.edges.push_back(x);
            x = side == Side::upper ? up_successor(g, x) : down_successor(g, x);
          } while (x != e);
          t.atom_circles[a].push_back(static_cast<int>(t.circles.size()));
          t.circles.push_back(std::move(c));
        }
      }
    }
  }
  return t;
}

}  // namespace

int MorseGraph::levels() const {
  int s = 0;
  for (int l : level) s = std::max(s, l + 1);
  return s;
}

int up_successor(const MorseGraph& g, int e) { return edge_of_out(dart_prev(g.head[e])); }
int down_successor(const MorseGraph& g, int e) { return edge_of_out(dart_next(g.head[e])); }

int Topology::circle_index(const CircleKey& k) const {
  if (k.edge < 0 || k.edge >= static_cast<int>(upper_of_edge.size())) return -1;
  const int c = circle_of(k.side, k.edge);
  return circles[c].edges.front() == k.edge ? c : -1;
}

CircleKey Topology::key(int circle) const { return {circles[circle].side, circles[circle].edges.front()}; }

std::string to_string(GraphError e) {
  switch (e) {
    case GraphError::non_alternating_vertex: return "non-alternating vertex";
    case GraphError::unmatched_dart: return "unmatched dart";
    case GraphError::euler_count: return "wrong Euler count";
    case GraphError::disconnected: return "disconnected surface";
    case GraphError::cylinder_order: return "cylinder level order";
    case GraphError::cap_wrong_side: return "circle capped on wrong side";
    case GraphError::label_collision: return "label collision";
    case GraphError::circle_attachment: return "circle attachment";
    case GraphError::bad_reference: return "bad reference";
    case GraphError::marking: return "marking";
  }
  return "unknown";
}

Topology trace(const MorseGraph& g) {
  Topology t = trace_circles(g);
  t.cap_at.assign(t.circles.size(), -1);
  t.cylinder_at.assign(t.circles.size(), -1);
  auto claim = [&](const CircleKey& k, std::vector<int>& slot, int id, const char* what) {
    const int c = t.circle_index(k);
    if (c < 0) throw ValidationError(GraphError::bad_reference, std::string(what) + " names no circle");
    if (t.cap_at[c] != -1 || t.cylinder_at[c] != -1)
      throw ValidationError(GraphError::circle_attachment, "circle " + std::to_string(c) + " is attached twice");
    slot[c] = id;
  };
  for (std::size_t i = 0; i < g.caps.size(); ++i) claim(g.caps[i].circle, t.cap_at, static_cast<int>(i), "cap");
  for (std::size_t i = 0; i < g.cylinders.size(); ++i) {
    claim(g.cylinders[i].bottom, t.cylinder_at, static_cast<int>(i), "cylinder bottom");
    claim(g.cylinders[i].top, t.cylinder_at, static_cast<int>(i), "cylinder top");
  }
  return t;
}

RegionReport validate(const MorseGraph& g) {
  if (g.p < 1 || g.r < 1 || g.q < 1)
    throw ValidationError(GraphError::euler_count, "p, q, r must be positive");
  if (g.p - g.q + g.r != 2)
    throw ValidationError(GraphError::euler_count, "p - q + r = " + std::to_string(g.p - g.q + g.r) + ", expected 2");
  const Marking& m = g.marks;
  if (m.p_fix < 0 || m.q_fix < 0 || m.r_fix < 0 || m.p_fix > m.p_hat || m.q_fix > m.q_hat ||
      m.r_fix > m.r_hat || m.p_hat > g.p || m.q_hat > g.q || m.r_hat > g.r)
    throw ValidationError(GraphError::marking, "marking counts out of range");
  int mins = 0, maxs = 0;
  for (const auto& c : g.caps) (c.kind == Extremum::min ? mins : maxs)++;
  if (mins != g.p || maxs != g.r)
    throw ValidationError(GraphError::euler_count, "cap counts " + std::to_string(mins) + "/" + std::to_string(maxs) +
                                                       " do not match p/r");
  const int s = g.levels();
  {
    std::vector<int> used(s, 0);
    for (int l : g.level)
      if (l >= 0) used[l] = 1;
    for (int l = 0; l < s; ++l)
      if (!used[l]) throw ValidationError(GraphError::bad_reference, "level " + std::to_string(l) + " is empty");
  }
  const Topology t = trace(g);

  std::set<int> min_seen, max_seen;
  for (const auto& c : g.caps) {
    const Side want = c.kind == Extremum::min ? Side::lower : Side::upper;
    if (c.circle.side != want)
      throw ValidationError(GraphError::cap_wrong_side, std::string(c.kind == Extremum::min ? "min" : "max") +
                                                           " cap on the wrong side of its circle");
    const int bound = c.kind == Extremum::min ? g.p : g.r;
    if (c.label < 1 || c.label > bound) throw ValidationError(GraphError::bad_reference, "cap label out of range");
    if (!(c.kind == Extremum::min ? min_seen : max_seen).insert(c.label).second)
      throw ValidationError(GraphError::label_collision, "cap label " + std::to_string(c.label) + " used twice");
  }
  RegionReport rep;
  for (const auto& z : g.cylinders) {
    if (z.bottom.side != Side::upper || z.top.side != Side::lower)
      throw ValidationError(GraphError::cap_wrong_side, "cylinder end on the wrong side of its circle");
    const int lo = t.atom_level[t.circles[t.circle_index(z.bottom)].atom];
    const int hi = t.atom_level[t.circles[t.circle_index(z.top)].atom];
    if (lo >= hi)
      throw ValidationError(GraphError::cylinder_order, "cylinder from level " + std::to_string(lo) + " to level " +
                                                           std::to_string(hi));
    rep.cylinder_levels.emplace_back(lo, hi);
  }
  for (std::size_t c = 0; c < t.circles.size(); ++c)
    if (t.cap_at[c] == -1 && t.cylinder_at[c] == -1)
      throw ValidationError(GraphError::circle_attachment, "circle " + std::to_string(c) + " is neither capped nor paired");

  UnionFind uf(static_cast<int>(t.atoms.size()));
  for (const auto& z : g.cylinders)
    uf.join(t.circles[t.circle_index(z.bottom)].atom, t.circles[t.circle_index(z.top)].atom);
  for (std::size_t a = 1; a < t.atoms.size(); ++a)
    if (uf.find(static_cast<int>(a)) != uf.find(0))
      throw ValidationError(GraphError::disconnected, "assembled surface has several components");

  rep.p = g.p;
  rep.q = g.q;
  rep.r = g.r;
  rep.s = s;
  rep.t = static_cast<int>(t.atoms.size());
  rep.n = static_cast<int>(g.cylinders.size());
  rep.min_labels.assign(min_seen.begin(), min_seen.end());
  rep.max_labels.assign(max_seen.begin(), max_seen.end());
  rep.main_condition = g.marks.marked_total() > 2;
  if (rep.n != rep.t - 1)
    throw InvariantViolation("connected planar assembly must have t - 1 cylinders");
  return rep;
}

Invariants invariants(const MorseGraph& g) {
  const auto rep = validate(g);
  Invariants inv;
  inv.s = rep.s;
  inv.t = rep.t;
  inv.n = rep.n;
  inv.q = rep.q;
  inv.p = rep.p;
  inv.r = rep.r;
  inv.J = OrderedPartition::from_levels(g.level);
  return inv;
}

void normalize_keys(MorseGraph& g) {
  const Topology t = trace_circles(g);
  auto fix = [&](CircleKey& k) {
    if (k.edge < 0 || k.edge >= 2 * g.q) throw ValidationError(GraphError::bad_reference, "circle key edge out of range");
    k = t.key(t.circle_of(k.side, k.edge));
  };
  for (auto& c : g.caps) fix(c.circle);
  for (auto& z : g.cylinders) {
    fix(z.bottom);
    fix(z.top);
  }
}

namespace {

// Rebuilds g under a dart bijection that preserves vertices; side_flip swaps circle sides
// and reverse_edges swaps the roles of tail and head.
MorseGraph remap(const MorseGraph& g, const std::vector<int>& dmap, const std::vector<int>& vmap, bool reverse_edges,
                 bool side_flip) {
  MorseGraph out = g;
  out.head.assign(2 * g.q, -1);
  out.level.assign(g.q, 0);
  for (int v = 0; v < g.q; ++v) out.level[vmap[v]] = g.level[v];
  std::vector<int> emap(2 * g.q);
  for (int e = 0; e < 2 * g.q; ++e) {
    int from = dmap[edge_tail(e)], to = dmap[g.head[e]];
    if (reverse_edges) std::swap(from, to);
    if (!dart_is_out(from) || dart_is_out(to)) throw InvariantViolation("remap broke dart directions");
    emap[e] = edge_of_out(from);
    out.head[emap[e]] = to;
  }
  auto key = [&](CircleKey k) {
    CircleKey n{k.side, emap[k.edge]};
    if (side_flip) n.side = k.side == Side::upper ? Side::lower : Side::upper;
    return n;
  };
  for (auto& c : out.caps) c.circle = key(c.circle);
  for (auto& z : out.cylinders) {
    z.bottom = key(z.bottom);
    z.top = key(z.top);
  }
  normalize_keys(out);
  return out;
}

}  // namespace

MorseGraph permute_saddles(const MorseGraph& g, const std::vector<int>& perm, const std::vector<int>& rot) {
  if (static_cast<int>(perm.size()) != g.q || static_cast<int>(rot.size()) != g.q)
    throw ArgumentError("permute_saddles: wrong sizes");
  std::vector<int> dmap(4 * g.q);
  for (int v = 0; v < g.q; ++v) {
    if (rot[v] % 2 != 0) throw ArgumentError("permute_saddles: rotation must preserve directions");
    for (int s = 0; s < 4; ++s) dmap[dart_of(v, s)] = dart_of(perm[v], (s + rot[v]) % 4);
  }
  return remap(g, dmap, perm, false, false);
}

MorseGraph dual(const MorseGraph& g) {
  std::vector<int> dmap(4 * g.q), vmap(g.q);
  std::iota(vmap.begin(), vmap.end(), 0);
  for (int d = 0; d < 4 * g.q; ++d) dmap[d] = dart_of(dart_saddle(d), (dart_slot(d) + 3) % 4);
  MorseGraph out = g;
  const int s = g.levels();
  for (auto& l : out.level) l = s - 1 - l;
  for (auto& c : out.caps) c.kind = c.kind == Extremum::min ? Extremum::max : Extremum::min;
  for (auto& z : out.cylinders) std::swap(z.bottom, z.top);
  std::swap(out.p, out.r);
  std::swap(out.marks.p_hat, out.marks.r_hat);
  std::swap(out.marks.p_fix, out.marks.r_fix);
  return remap(out, dmap, vmap, true, true);
}

MorseGraph mirror(const MorseGraph& g) {
  std::vector<int> dmap(4 * g.q), vmap(g.q);
  std::iota(vmap.begin(), vmap.end(), 0);
  for (int d = 0; d < 4 * g.q; ++d) dmap[d] = dart_of(dart_saddle(d), (5 - dart_slot(d)) % 4);
  return remap(g, dmap, vmap, true, false);
}

}  // namespace mck
