#include <algorithm>
#include <map>
#include <sstream>

#include "mck/morse_graph.hpp"

namespace mck {

namespace {

using Code = std::vector<int>;

constexpr int kCap = 1, kCylinder = 2, kParent = 3;

// Breadth-first numbering of an atom's saddles from a starting edge. Each visited saddle
// gets a base slot so that canonical slots keep direction parity.
struct AtomWalk {
  std::vector<int> order;      // canonical index -> saddle
  std::vector<int> index;      // saddle -> canonical index (or -1)
  std::vector<int> base;       // saddle -> base slot

  int cdart(int d) const { return 4 * index[dart_saddle(d)] + (dart_slot(d) - base[dart_saddle(d)] + 4) % 4; }
  int cedge(int e) const { return cdart(edge_tail(e)) / 2; }
};

AtomWalk walk_atom(const MorseGraph& g, const Topology& t, int start_edge) {
  AtomWalk w;
  w.index.assign(g.q, -1);
  w.base.assign(g.q, 0);
  const int v0 = start_edge / 2;
  w.index[v0] = 0;
  w.base[v0] = dart_slot(edge_tail(start_edge));
  w.order.push_back(v0);
  for (std::size_t i = 0; i < w.order.size(); ++i) {
    const int v = w.order[i];
    for (int k = 0; k < 4; ++k) {
      const int d = dart_of(v, (w.base[v] + k) % 4);
      const int partner = dart_is_out(d) ? g.head[edge_of_out(d)] : edge_tail(t.edge_into[d]);
      const int u = dart_saddle(partner);
      if (w.index[u] != -1) continue;
      w.index[u] = static_cast<int>(w.order.size());
      w.base[u] = dart_slot(partner) - dart_slot(partner) % 2;
      w.order.push_back(u);
    }
  }
  return w;
}

// Circles of an atom sorted by (smallest canonical edge, side).
std::vector<int> ordered_circles(const Topology& t, const AtomWalk& w, int atom) {
  std::vector<std::pair<std::pair<int, int>, int>> keyed;
  for (int c : t.atom_circles[atom]) {
    int best = 1 << 30;
    for (int e : t.circles[c].edges) best = std::min(best, w.cedge(e));
    keyed.push_back({{best, static_cast<int>(t.circles[c].side)}, c});
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> out;
  for (auto& k : keyed) out.push_back(k.second);
  return out;
}

class Canonizer {
 public:
  explicit Canonizer(const MorseGraph& g) : g_(g), t_(trace(g)) {}

  Code root() {
    Code best;
    bool have = false;
    for (std::size_t a = 0; a < t_.atoms.size(); ++a)
      for (int v : t_.atoms[a])
        for (int e : {2 * v, 2 * v + 1}) {
          Code c = atom_code(e, -1);
          if (!have || c < best) best = std::move(c), have = true;
        }
    return best;
  }

 private:
  int other_end(int circle) const {
    const auto& z = g_.cylinders[t_.cylinder_at[circle]];
    const int b = t_.circle_index(z.bottom), tp = t_.circle_index(z.top);
    return b == circle ? tp : b;
  }

  const Code& subtree(int circle) {
    auto it = memo_.find(circle);
    if (it != memo_.end()) return it->second;
    Code best;
    bool have = false;
    for (int e : t_.circles[circle].edges) {
      Code c = atom_code(e, circle);
      if (!have || c < best) best = std::move(c), have = true;
    }
    return memo_[circle] = std::move(best);
  }

  Code atom_code(int start_edge, int parent_circle) {
    const AtomWalk w = walk_atom(g_, t_, start_edge);
    const int atom = t_.atom_of[start_edge / 2];
    Code c;
    c.push_back(t_.atom_level[atom]);
    c.push_back(static_cast<int>(w.order.size()));
    for (int v : w.order) c.push_back(g_.saddle_marked(v) ? v + 1 : 0);
    for (int v : w.order)
      for (int k : {0, 2}) {
        const int d = dart_of(v, (w.base[v] + k) % 4);
        c.push_back(w.cdart(g_.head[edge_of_out(d)]));
      }
    for (int circ : ordered_circles(t_, w, atom)) {
      c.push_back(static_cast<int>(t_.circles[circ].side));
      if (circ == parent_circle) {
        c.push_back(kParent);
      } else if (t_.cap_at[circ] != -1) {
        const Cap& cap = g_.caps[t_.cap_at[circ]];
        c.push_back(kCap);
        c.push_back(static_cast<int>(cap.kind));
        c.push_back(g_.cap_marked(cap) ? cap.label : 0);
      } else {
        const Code& sub = subtree(other_end(circ));
        c.push_back(kCylinder);
        c.push_back(static_cast<int>(sub.size()));
        c.insert(c.end(), sub.begin(), sub.end());
      }
    }
    return c;
  }

  const MorseGraph& g_;
  Topology t_;
  std::map<int, Code> memo_;
};

class Decoder {
 public:
  explicit Decoder(Code tokens) : tok_(std::move(tokens)) {}

  MorseGraph run() {
    MorseGraph g;
    g.q = next();
    g.p = next();
    g.r = next();
    g.marks = {next(), next(), next(), next(), next(), next()};
    const int s = next();
    if (g.q < 1 || g.q > 64 || s < 1) fail("bad header");
    g.level.assign(g.q, -1);
    g.head.assign(2 * g.q, -1);
    next_unmarked_saddle_ = g.marks.q_hat;
    next_label_[0] = g.marks.p_hat + 1;
    next_label_[1] = g.marks.r_hat + 1;
    g_ = &g;
    atom(-1, {});
    if (pos_ != tok_.size()) fail("trailing tokens");
    normalize_keys(g);
    return g;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("canonical form: " + why + " at token " + std::to_string(pos_));
  }
  int next() {
    if (pos_ >= tok_.size()) fail("truncated");
    return tok_[pos_++];
  }

  // Parses one atom; returns (side, edge) naming its parent circle when parent_side is set.
  CircleKey atom(int parent_side, CircleKey parent_key) {
    MorseGraph& g = *g_;
    const int lvl = next(), nv = next();
    if (nv < 1 || nv > g.q) fail("bad atom size");
    std::vector<int> sv(nv);
    for (int i = 0; i < nv; ++i) {
      const int lab = next();
      int v;
      if (lab > 0) {
        if (lab > g.marks.q_hat) fail("unmarked saddle carries a label");
        v = lab - 1;
      } else {
        v = next_unmarked_saddle_++;
      }
      if (v >= g.q || g.level[v] != -1) fail("saddle reused");
      g.level[v] = lvl;
      sv[i] = v;
    }
    for (int i = 0; i < nv; ++i)
      for (int k : {0, 2}) {
        const int cd = next();
        if (cd < 0 || cd >= 4 * nv || cd % 2 == 0) fail("bad head dart");
        g.head[edge_of_out(dart_of(sv[i], k))] = dart_of(sv[cd / 4], cd % 4);
      }
    // Trace this atom's circles using only its own edges.
    AtomWalk w;
    w.index.assign(g.q, -1);
    w.base.assign(g.q, 0);
    for (int i = 0; i < nv; ++i) w.index[sv[i]] = i, w.order.push_back(sv[i]);
    std::vector<std::pair<std::pair<int, int>, std::vector<int>>> circles;
    std::map<std::pair<int, int>, bool> seen;
    for (int v : sv)
      for (int e : {2 * v, 2 * v + 1})
        for (int side : {0, 1}) {
          if (seen[{side, e}]) continue;
          std::vector<int> edges;
          int x = e;
          int guard = 0;
          do {
            seen[{side, x}] = true;
            edges.push_back(x);
            if (g.head[x] < 0 || w.index[dart_saddle(g.head[x])] == -1) fail("edge leaves its atom");
            x = side ? up_successor(g, x) : down_successor(g, x);
            if (++guard > 4 * g.q) fail("circle does not close");
          } while (x != e);
          int best = 1 << 30;
          for (int y : edges) best = std::min(best, w.cedge(y));
          circles.push_back({{best, side}, edges});
        }
    std::sort(circles.begin(), circles.end());
    CircleKey mine{Side::lower, -1};
    for (auto& [key, edges] : circles) {
      const int side = next();
      if (side != key.second) fail("circle side mismatch");
      const CircleKey here{static_cast<Side>(side), edges.front()};
      const int kind = next();
      if (kind == kParent) {
        if (parent_side < 0 || mine.edge != -1) fail("unexpected parent marker");
        mine = here;
      } else if (kind == kCap) {
        const int ext = next(), lab = next();
        if (ext != 0 && ext != 1) fail("bad cap kind");
        Cap cap;
        cap.circle = here;
        cap.kind = static_cast<Extremum>(ext);
        cap.label = lab > 0 ? lab : next_label_[ext]++;
        g.caps.push_back(cap);
      } else if (kind == kCylinder) {
        const int len = next();
        const std::size_t end = pos_ + static_cast<std::size_t>(len);
        const CircleKey child = atom(side, here);
        if (pos_ != end) fail("cylinder payload length mismatch");
        Cylinder z;
        z.bottom = side == 1 ? here : child;
        z.top = side == 1 ? child : here;
        g.cylinders.push_back(z);
      } else {
        fail("unknown attachment");
      }
    }
    if (parent_side >= 0 && mine.edge == -1) fail("missing parent marker");
    (void)parent_key;
    return mine;
  }

  Code tok_;
  std::size_t pos_ = 0;
  MorseGraph* g_ = nullptr;
  int next_unmarked_saddle_ = 0;
  int next_label_[2] = {1, 1};
};

// ---- isomorphism search ----

class Matcher {
 public:
  Matcher(const MorseGraph& a, const MorseGraph& b) : a_(a), b_(b), ta_(trace(a)), tb_(trace(b)) {}

  std::vector<std::vector<int>> roots(bool first_only) {
    std::vector<std::vector<int>> out;
    if (ta_.atoms.size() != tb_.atoms.size()) return out;
    const int ex = 2 * ta_.atoms[0][0];
    for (std::size_t y = 0; y < tb_.atoms.size(); ++y)
      for (int w : tb_.atoms[y])
        for (int ey : {2 * w, 2 * w + 1}) {
          auto maps = extend(ex, ey, -1);
          for (auto& m : maps) {
            out.push_back(std::move(m));
            if (first_only) return out;
          }
        }
    return out;
  }

  const Topology& ta() const { return ta_; }
  const Topology& tb() const { return tb_; }

 private:
  int other_end(const MorseGraph& g, const Topology& t, int circle) const {
    const auto& z = g.cylinders[t.cylinder_at[circle]];
    const int bt = t.circle_index(z.bottom), tp = t.circle_index(z.top);
    return bt == circle ? tp : bt;
  }

  // All dart maps of the subtree hanging from the atom of edge ex (away from parent circle
  // pa) onto the atom of ey, sending ex to ey.
  std::vector<std::vector<int>> extend(int ex, int ey, int pa) {
    const int X = ta_.atom_of[ex / 2], Y = tb_.atom_of[ey / 2];
    if (ta_.atom_level[X] != tb_.atom_level[Y] || ta_.atoms[X].size() != tb_.atoms[Y].size()) return {};
    std::vector<int> map(4 * a_.q, -1);
    std::vector<int> vmap(a_.q, -1), used(b_.q, 0);
    std::vector<int> queue;
    auto bind = [&](int da, int db) {
      const int v = dart_saddle(da), w = dart_saddle(db);
      const int off = (dart_slot(db) - dart_slot(da) + 4) % 4;
      if (off % 2) return false;
      if (vmap[v] != -1) return map[da] == db;
      if (used[w]) return false;
      if (a_.saddle_marked(v) != b_.saddle_marked(w)) return false;
      if (a_.saddle_marked(v) && v != w) return false;
      vmap[v] = w;
      used[w] = 1;
      for (int s = 0; s < 4; ++s) map[dart_of(v, s)] = dart_of(w, (s + off) % 4);
      queue.push_back(v);
      return true;
    };
    if (!bind(edge_tail(ex), edge_tail(ey))) return {};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const int v = queue[i];
      for (int s = 0; s < 4; ++s) {
        const int d = dart_of(v, s), dm = map[d];
        int pa_d, pb_d;
        if (dart_is_out(d)) {
          pa_d = a_.head[edge_of_out(d)];
          pb_d = b_.head[edge_of_out(dm)];
        } else {
          pa_d = edge_tail(ta_.edge_into[d]);
          pb_d = edge_tail(tb_.edge_into[dm]);
        }
        if (!bind(pa_d, pb_d)) return {};
      }
    }
    std::vector<std::vector<int>> results{map};
    for (int c : ta_.atom_circles[X]) {
      const Circle& C = ta_.circles[c];
      const int cimg = tb_.circle_of(C.side, edge_of_out(map[edge_tail(C.edges.front())]));
      if (c == pa) continue;
      if (ta_.cap_at[c] != -1) {
        if (tb_.cap_at[cimg] == -1) return {};
        const Cap& ca = a_.caps[ta_.cap_at[c]];
        const Cap& cb = b_.caps[tb_.cap_at[cimg]];
        if (ca.kind != cb.kind || a_.cap_marked(ca) != b_.cap_marked(cb)) return {};
        if (a_.cap_marked(ca) && ca.label != cb.label) return {};
        continue;
      }
      if (tb_.cylinder_at[cimg] == -1) return {};
      const int da = other_end(a_, ta_, c), db = other_end(b_, tb_, cimg);
      std::vector<std::vector<int>> child;
      for (int e : tb_.circles[db].edges) {
        auto sub = extend(ta_.circles[da].edges.front(), e, da);
        child.insert(child.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
      }
      if (child.empty()) return {};
      std::vector<std::vector<int>> merged;
      for (const auto& base : results)
        for (const auto& sub : child) {
          std::vector<int> m = base;
          for (std::size_t d = 0; d < m.size(); ++d)
            if (sub[d] != -1) m[d] = sub[d];
          merged.push_back(std::move(m));
        }
      results = std::move(merged);
    }
    return results;
  }

  const MorseGraph& a_;
  const MorseGraph& b_;
  Topology ta_, tb_;
};

std::string join(const Code& c) {
  std::ostringstream os;
  os << "mck1";
  for (int x : c) os << '.' << x;
  return os.str();
}

}  // namespace

std::string canonical_form(const MorseGraph& g) {
  Canonizer cz(g);
  Code c{g.q, g.p, g.r, g.marks.p_hat, g.marks.q_hat, g.marks.r_hat,
         g.marks.p_fix, g.marks.q_fix, g.marks.r_fix, g.levels()};
  Code body = cz.root();
  c.insert(c.end(), body.begin(), body.end());
  return join(c);
}

MorseGraph decode_canonical(const std::string& form) {
  if (form.rfind("mck1", 0) != 0) throw ParseError("canonical form: missing mck1 prefix");
  Code tokens;
  std::size_t i = 4;
  while (i < form.size()) {
    if (form[i] != '.') throw ParseError("canonical form: expected '.' at offset " + std::to_string(i));
    std::size_t j = i + 1;
    while (j < form.size() && form[j] != '.') ++j;
    try {
      std::size_t used = 0;
      tokens.push_back(std::stoi(form.substr(i + 1, j - i - 1), &used));
      if (used != j - i - 1) throw ParseError("");
    } catch (...) {
      throw ParseError("canonical form: bad integer at offset " + std::to_string(i + 1));
    }
    i = j;
  }
  MorseGraph g = Decoder(std::move(tokens)).run();
  try {
    validate(g);
  } catch (const ValidationError& e) {
    throw ParseError(std::string("canonical form decodes to an invalid graph: ") + e.what());
  }
  return g;
}

bool Isomorphism::is_identity() const {
  for (std::size_t i = 0; i < dart_map.size(); ++i)
    if (dart_map[i] != static_cast<int>(i)) return false;
  return true;
}

Isomorphism compose(const Isomorphism& outer, const Isomorphism& inner) {
  auto c = [](const std::vector<int>& o, const std::vector<int>& i) {
    std::vector<int> out(i.size());
    for (std::size_t k = 0; k < i.size(); ++k) out[k] = o[i[k]];
    return out;
  };
  return {c(outer.dart_map, inner.dart_map),     c(outer.saddle_map, inner.saddle_map),
          c(outer.edge_map, inner.edge_map),     c(outer.circle_map, inner.circle_map),
          c(outer.cylinder_map, inner.cylinder_map), c(outer.cap_map, inner.cap_map)};
}

std::vector<Isomorphism> isomorphisms(const MorseGraph& a, const MorseGraph& b, bool first_only) {
  if (a.q != b.q || a.p != b.p || a.r != b.r || !(a.marks == b.marks) || a.levels() != b.levels() ||
      a.cylinders.size() != b.cylinders.size())
    return {};
  Matcher m(a, b);
  std::vector<Isomorphism> out;
  const Topology& ta = m.ta();
  const Topology& tb = m.tb();
  for (auto& dm : m.roots(first_only)) {
    Isomorphism iso;
    iso.dart_map = dm;
    for (int d : dm)
      if (d < 0) throw InvariantViolation("isomorphism search left a dart unmapped");
    iso.saddle_map.resize(a.q);
    for (int v = 0; v < a.q; ++v) iso.saddle_map[v] = dart_saddle(dm[dart_of(v, 0)]);
    iso.edge_map.resize(2 * a.q);
    for (int e = 0; e < 2 * a.q; ++e) iso.edge_map[e] = edge_of_out(dm[edge_tail(e)]);
    iso.circle_map.resize(ta.circles.size());
    for (std::size_t c = 0; c < ta.circles.size(); ++c)
      iso.circle_map[c] = tb.circle_of(ta.circles[c].side, iso.edge_map[ta.circles[c].edges.front()]);
    iso.cylinder_map.resize(a.cylinders.size());
    for (std::size_t z = 0; z < a.cylinders.size(); ++z)
      iso.cylinder_map[z] = tb.cylinder_at[iso.circle_map[ta.circle_index(a.cylinders[z].bottom)]];
    iso.cap_map.resize(a.caps.size());
    for (std::size_t k = 0; k < a.caps.size(); ++k)
      iso.cap_map[k] = tb.cap_at[iso.circle_map[ta.circle_index(a.caps[k].circle)]];
    out.push_back(std::move(iso));
  }
  return out;
}

std::vector<Isomorphism> automorphisms(const MorseGraph& g) {
  auto all = isomorphisms(g, g);
  std::sort(all.begin(), all.end(), [](const Isomorphism& x, const Isomorphism& y) {
    if (x.is_identity() != y.is_identity()) return x.is_identity();
    return x.dart_map < y.dart_map;
  });
  return all;
}

}  // namespace mck
