#include "mck/twist_algebra.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace mck {

Vec HomologyModel::chain(const std::vector<int>& edges) const {
  Vec out(2 * q, Rational(0));
  for (int e : edges)
    for (int j = 0; j < 2 * q; ++j) out[j] += expansion[e][j];
  return out;
}

HomologyModel homology_model(const MorseGraph& g) {
  validate(g);
  const Topology t = trace(g);
  HomologyModel m;
  m.q = g.q;
  m.n = static_cast<int>(g.cylinders.size());
  const int E = 2 * g.q, n = m.n;
  m.relations = zeros(n, E);
  for (int l = 0; l < n; ++l) {
    const auto& z = g.cylinders[l];
    m.bottom_edges.push_back(t.circles[t.circle_index(z.bottom)].edges);
    m.top_edges.push_back(t.circles[t.circle_index(z.top)].edges);
    for (int e : m.bottom_edges[l]) m.relations[l][e] += 1;
    for (int e : m.top_edges[l]) m.relations[l][e] -= 1;
    m.removed.push_back(z.top.edge);
  }
  m.column.assign(E, -1);
  for (int e = 0; e < E; ++e)
    if (std::find(m.removed.begin(), m.removed.end(), e) == m.removed.end()) {
      m.column[e] = n + static_cast<int>(m.kept.size());
      m.kept.push_back(e);
    }
  if (static_cast<int>(rank(m.relations)) != n) throw InvariantViolation("cylinder relations are dependent");
  m.rank = E + n - n;

  Mat rem = zeros(n, n), kept = zeros(n, E - n);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) rem[l][k] = m.relations[l][m.removed[k]];
    for (int k = 0; k < E - n; ++k) kept[l][k] = m.relations[l][m.kept[k]];
  }
  Mat solved = multiply(inverse(rem), kept);
  m.expansion = zeros(E, E);
  for (int e : m.kept) m.expansion[e][m.column[e]] = 1;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < E - n; ++j) m.expansion[m.removed[k]][n + j] = -solved[k][j];
  for (int l = 0; l < n; ++l) m.core.push_back(m.chain(m.bottom_edges[l]));
  return m;
}

std::vector<Transvection> transvections(const HomologyModel& m) {
  std::vector<Transvection> out;
  for (int l = 0; l < m.n; ++l) {
    Transvection tr;
    tr.cylinder = l;
    tr.core = m.core[l];
    tr.matrix = identity(2 * m.q);
    for (int j = 0; j < 2 * m.q; ++j) tr.matrix[l][j] += m.core[l][j];
    out.push_back(std::move(tr));
  }
  return out;
}

std::size_t translation_rank(const std::vector<Transvection>& ts) {
  Mat flat;
  for (const auto& t : ts) {
    Vec row;
    for (std::size_t i = 0; i < t.matrix.size(); ++i)
      for (std::size_t j = 0; j < t.matrix.size(); ++j) row.push_back(t.matrix[i][j] - (i == j ? 1 : 0));
    flat.push_back(std::move(row));
  }
  return flat.empty() ? 0 : rank(flat);
}

CircleClassification classify_circles(const MorseGraph& g) {
  if (g.p - g.q + g.r != 2) throw UnsupportedScope("circle classification is implemented for the sphere only");
  validate(g);
  const Topology t = trace(g);
  const int T = static_cast<int>(t.atoms.size());
  const int n = static_cast<int>(g.cylinders.size());
  std::vector<int> weight(T, 0);
  for (int v = 0; v < g.q; ++v)
    if (g.saddle_fixed(v)) ++weight[t.atom_of[v]];
  for (const auto& c : g.caps)
    if (g.cap_fixed(c)) ++weight[t.circles[t.circle_index(c.circle)].atom];
  std::vector<int> lo(n), hi(n);
  for (int l = 0; l < n; ++l) {
    lo[l] = t.circles[t.circle_index(g.cylinders[l].bottom)].atom;
    hi[l] = t.circles[t.circle_index(g.cylinders[l].top)].atom;
  }
  // color[k][a]: 0 when atom a stays with the bottom side after cutting cylinder k.
  std::vector<std::vector<int>> color(n, std::vector<int>(T, 1));
  for (int k = 0; k < n; ++k) {
    std::vector<int> stack{lo[k]};
    color[k][lo[k]] = 0;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (int l = 0; l < n; ++l) {
        if (l == k) continue;
        for (auto [x, y] : {std::pair(lo[l], hi[l]), std::pair(hi[l], lo[l])})
          if (x == a && color[k][y] == 1) color[k][y] = 0, stack.push_back(y);
      }
    }
  }
  CircleClassification cc;
  cc.n = n;
  std::vector<int> trivial, nontrivial;
  for (int k = 0; k < n; ++k) {
    int side[2] = {0, 0};
    for (int a = 0; a < T; ++a) side[color[k][a]] += weight[a];
    cc.side_fixed.emplace_back(side[0], side[1]);
    (std::min(side[0], side[1]) <= 1 ? trivial : nontrivial).push_back(k);
  }
  std::map<int, std::vector<int>> adj;
  for (std::size_t i = 0; i < nontrivial.size(); ++i)
    for (std::size_t j = i + 1; j < nontrivial.size(); ++j) {
      const int l = nontrivial[i], m = nontrivial[j];
      bool between = false;
      for (int k : nontrivial)
        if (k != l && k != m && color[k][lo[l]] != color[k][lo[m]]) between = true;
      if (between) continue;
      int middle = 0;
      for (int a = 0; a < T; ++a)
        if (color[l][a] == color[l][lo[m]] && color[m][a] == color[m][lo[l]]) middle += weight[a];
      if (middle == 0) adj[l].push_back(m), adj[m].push_back(l);
    }
  std::set<int> seen;
  std::vector<int> singles;
  for (int l : nontrivial) {
    if (seen.count(l)) continue;
    if (adj[l].empty()) {
      singles.push_back(l);
      seen.insert(l);
      continue;
    }
    std::vector<int> comp{l};
    seen.insert(l);
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (int x : adj[comp[i]])
        if (seen.insert(x).second) comp.push_back(x);
    int start = -1;
    for (int x : comp) {
      if (adj[x].size() > 2) throw InvariantViolation("parallel family is not a chain");
      if (adj[x].size() == 1 && (start == -1 || x < start)) start = x;
    }
    if (start == -1) throw InvariantViolation("parallel family closes up");
    std::vector<int> path{start};
    while (path.size() < comp.size()) {
      int next = -1;
      for (int x : adj[path.back()])
        if (path.size() < 2 || x != path[path.size() - 2]) next = x;
      path.push_back(next);
    }
    cc.families.push_back(path);
  }
  cc.nu0 = static_cast<int>(trivial.size());
  cc.order = trivial;
  cc.nu.push_back(cc.nu0);
  for (const auto& f : cc.families) {
    cc.order.insert(cc.order.end(), f.begin(), f.end());
    cc.nu.push_back(cc.nu.back() + static_cast<int>(f.size()));
    cc.A.push_back(f.back());
  }
  cc.order.insert(cc.order.end(), singles.begin(), singles.end());
  cc.A.insert(cc.A.end(), singles.begin(), singles.end());
  cc.e = static_cast<int>(cc.families.size());
  cc.d = cc.nu.back() - cc.e;
  cc.c = n - cc.d;
  std::sort(cc.A.begin(), cc.A.end());
  for (int k = 0; k < n; ++k)
    if (!std::binary_search(cc.A.begin(), cc.A.end(), k)) cc.B.push_back(k);
  return cc;
}

Rational edge_bound(int q, int s) {
  if (s < 1 || s > q) throw ArgumentError("edge_bound: need 1 <= s <= q");
  Rational b = 1;
  for (int k = 2 * q - 2 * s + 3; k <= 2 * q - 1; k += 2) b *= k;
  return b;
}

namespace {

// Constraints in the shifted variable y = x - 1 >= 0: rows 2i (lower) and 2i+1 (upper).
void shifted_system(const UPolytope& p, Mat& A, Vec& b) {
  A.clear();
  b.clear();
  for (const auto& row : p.rows) {
    Rational ones = 0;
    for (const auto& x : row) ones += x;
    Vec neg = row;
    for (auto& x : neg) x = -x;
    A.push_back(neg);
    b.push_back(ones - 1);
    A.push_back(row);
    b.push_back(p.bound - ones);
  }
}

void enumerate_vertices(UPolytope& p) {
  const int D = p.ambient;
  const int C = 2 * static_cast<int>(p.rows.size());
  std::set<std::vector<std::string>> seen;
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(pick.size()) == D) {
      Mat a;
      Vec rhs;
      for (int id : pick) {
        a.push_back(p.rows[id / 2]);
        rhs.push_back(id % 2 == 0 ? Rational(1) : p.bound);
      }
      auto x = solve_square(a, rhs);
      if (!x) return;
      for (const auto& row : p.rows) {
        const Rational v = dot(row, *x);
        if (v < 1 || v > p.bound) return;
      }
      std::vector<std::string> key;
      for (const auto& xi : *x) key.push_back(xi.get_str());
      if (seen.insert(key).second) p.vertices.push_back(*x);
      return;
    }
    for (int id = from; id < C; ++id) {
      pick.push_back(id);
      rec(id + 1);
      pick.pop_back();
    }
  };
  rec(0);
  std::sort(p.vertices.begin(), p.vertices.end());
  p.vertices_listed = true;
}

}  // namespace

UPolytope u_polytope(const MorseGraph& g, const HomologyModel& m, int vertex_limit) {
  UPolytope p;
  p.bound = edge_bound(g.q, g.levels());
  p.ambient = 2 * m.q - m.n;
  for (int i = 0; i < 2 * m.q; ++i) p.rows.emplace_back(m.expansion[i].begin() + m.n, m.expansion[i].end());
  Mat A;
  Vec b;
  shifted_system(p, A, b);
  const Vec zero(p.ambient, Rational(0));
  const LpResult feas = lp_maximize(A, b, zero);
  if (feas.status != LpStatus::optimal) throw InvariantViolation("U' polytope is empty");
  Vec sum = feas.x;
  int samples = 1;
  Mat tight;
  for (std::size_t j = 0; j < A.size(); ++j) {
    Vec obj = A[j];
    for (auto& x : obj) x = -x;
    const LpResult r = lp_maximize(A, b, obj);
    if (r.status != LpStatus::optimal) throw InvariantViolation("U' polytope is unbounded");
    if (r.value + b[j] == 0) {
      p.implicit_equalities.push_back(static_cast<int>(j));
      tight.push_back(A[j]);
    } else {
      for (int k = 0; k < p.ambient; ++k) sum[k] += r.x[k];
      ++samples;
    }
  }
  p.dim = p.ambient - static_cast<int>(tight.empty() ? 0 : rank(tight));
  p.interior.resize(p.ambient);
  for (int k = 0; k < p.ambient; ++k) p.interior[k] = 1 + sum[k] / samples;
  if (p.ambient <= vertex_limit) enumerate_vertices(p);
  return p;
}

Range functional_range(const UPolytope& p, const Vec& functional, const Mat& fix) {
  Mat A;
  Vec b;
  shifted_system(p, A, b);
  // (F - I)(1 + y) = 0 as two inequalities.
  for (std::size_t i = 0; i < fix.size(); ++i) {
    Vec row(p.ambient);
    Rational ones = 0;
    for (int k = 0; k < p.ambient; ++k) {
      row[k] = fix[i][k] - (static_cast<int>(i) == k ? 1 : 0);
      ones += row[k];
    }
    Vec neg = row;
    for (auto& x : neg) x = -x;
    A.push_back(row);
    b.push_back(-ones);
    A.push_back(neg);
    b.push_back(ones);
  }
  Rational base = 0;
  for (const auto& x : functional) base += x;
  Range r;
  const LpResult hi = lp_maximize(A, b, functional);
  if (hi.status != LpStatus::optimal) return r;
  Vec neg = functional;
  for (auto& x : neg) x = -x;
  const LpResult lo = lp_maximize(A, b, neg);
  r.feasible = true;
  r.hi = hi.value + base;
  r.lo = -lo.value + base;
  return r;
}

namespace {

struct ActionData {
  Mat action, polytope;
  std::vector<std::vector<int>> plus, minus;  // per cylinder, arcs for sigma_* te_l
};

std::vector<int> arc_from(const std::vector<int>& circle, int edge) {
  const auto it = std::find(circle.begin(), circle.end(), edge);
  if (it == circle.end()) throw InvariantViolation("automorphism does not map cylinder circles to each other");
  return {it, circle.end()};
}

ActionData action_of(const HomologyModel& m, const Isomorphism& iso) {
  const int E = 2 * m.q, n = m.n;
  ActionData a;
  a.action = zeros(E, E);
  for (int e : m.kept) {
    const auto& img = m.expansion[iso.edge_map[e]];
    for (int k = 0; k < E; ++k) a.action[k][m.column[e]] = img[k];
  }
  for (int l = 0; l < n; ++l) {
    const int pl = iso.cylinder_map[l];
    a.plus.push_back(arc_from(m.bottom_edges[pl], iso.edge_map[m.bottom_edges[l].front()]));
    a.minus.push_back(arc_from(m.top_edges[pl], iso.edge_map[m.top_edges[l].front()]));
    const Vec p = m.chain(a.plus[l]), q = m.chain(a.minus[l]);
    for (int k = 0; k < E; ++k) a.action[k][l] = p[k] - q[k];
    a.action[pl][l] += 1;
  }
  a.polytope = zeros(E - n, E - n);
  for (int j = 0; j < E - n; ++j)
    for (int k = 0; k < E - n; ++k) a.polytope[j][k] = m.expansion[iso.edge_map[m.kept[j]]][n + k];
  return a;
}

Vec kept_part(const HomologyModel& m, const Vec& v) { return Vec(v.begin() + m.n, v.end()); }

}  // namespace

StabReport check_stab_action(const MorseGraph& g, const HomologyModel& m, const std::vector<Isomorphism>& autos) {
  const OrderedPartition J = OrderedPartition::from_levels(g.level);
  const CircleClassification cc = classify_circles(g);
  const UPolytope poly = u_polytope(g, m, 0);
  const int E = 2 * m.q;
  StabReport rep;
  for (const auto& iso : autos) {
    StabEntry s;
    s.saddle_perm = iso.saddle_map;
    s.edge_perm = iso.edge_map;
    s.cylinder_perm = iso.cylinder_map;
    s.identity = iso.is_identity();
    const ActionData ad = action_of(m, iso);
    s.action = ad.action;
    s.polytope_action = ad.polytope;

    s.relations_preserved = true;
    for (int i = 0; i < E && s.relations_preserved; ++i)
      for (int k = 0; k < E; ++k) {
        Rational lhs = 0;
        for (int j = 0; j < E; ++j) lhs += m.expansion[i][j] * s.action[k][j];
        if (lhs != m.expansion[iso.edge_map[i]][k]) {
          s.relations_preserved = false;
          break;
        }
      }

    std::vector<int> sigma(g.q);
    for (int v = 0; v < g.q; ++v) sigma[v] = iso.saddle_map[v] + 1;
    s.face = induced_face_automorphism(sigma, J);
    s.face_trivial = s.face.trivial;
    s.polytope_trivial = is_identity(s.polytope_action);
    s.cylinders_trivial = true;
    s.lattice_trivial = true;
    s.shifts_trivial = true;
    for (int l = 0; l < m.n; ++l) {
      if (iso.cylinder_map[l] != l) {
        s.cylinders_trivial = false;
        if (std::find(cc.B.begin(), cc.B.end(), l) != cc.B.end()) s.lattice_trivial = false;
      } else if (!ad.plus[l].empty() || !ad.minus[l].empty()) {
        s.shifts_trivial = false;
      }
    }
    s.faithful = s.identity || !(s.face_trivial && s.polytope_trivial && s.cylinders_trivial && s.shifts_trivial);
    s.pi_trivial_on_A = std::all_of(cc.A.begin(), cc.A.end(), [&](int l) { return iso.cylinder_map[l] == l; });
    const bool a_squared = is_identity(multiply(s.polytope_action, s.polytope_action));
    s.degeneracy_ok = (!s.polytope_trivial || s.face_trivial) && (!s.face_trivial || (s.lattice_trivial && a_squared));
    s.admissible = s.relations_preserved && s.face.admissible && s.faithful && s.pi_trivial_on_A && s.degeneracy_ok;

    if (s.identity) {
      s.free = true;
      s.freeness = "identity";
    } else {
      Isomorphism power = iso;
      for (int k = 1; !power.is_identity() && !s.free && k <= 64; ++k) {
        const ActionData pd = action_of(m, power);
        for (int l = 0; l < m.n && !s.free; ++l) {
          if (power.cylinder_map[l] != l) continue;
          const bool p_empty = pd.plus[l].empty(), m_empty = pd.minus[l].empty();
          if (p_empty && m_empty) continue;
          if (p_empty != m_empty) {
            s.free = true;
            s.freeness = "power " + std::to_string(k) + " rotates cylinder " + std::to_string(l);
            break;
          }
          const Vec L = kept_part(m, m.chain(pd.plus[l])), R = kept_part(m, m.chain(pd.minus[l]));
          Vec diff(L.size());
          for (std::size_t j = 0; j < L.size(); ++j) diff[j] = L[j] - R[j];
          const Range r = functional_range(poly, diff, pd.polytope);
          if (r.feasible && (r.lo > 0 || r.hi < 0)) {
            s.free = true;
            s.freeness = "power " + std::to_string(k) + " shifts cylinder " + std::to_string(l) + " by a nonzero fraction";
          }
        }
        power = compose(iso, power);
      }
      if (!s.free) s.freeness = "not certified";
    }
    rep.all_admissible = rep.all_admissible && s.admissible;
    rep.all_free = rep.all_free && s.free;
    rep.entries.push_back(std::move(s));
  }
  return rep;
}

namespace {

nlohmann::json rat(const Rational& x) { return nlohmann::json::array({x.get_num().get_str(), x.get_den().get_str()}); }

nlohmann::json mat_json(const Mat& a) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : a) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& x : row) r.push_back(rat(x));
    out.push_back(r);
  }
  return out;
}

}  // namespace

nlohmann::json algebra_json(const MorseGraph& g) {
  const HomologyModel m = homology_model(g);
  const auto ts = transvections(m);
  const auto cc = classify_circles(g);
  const auto p = u_polytope(g, m);
  nlohmann::json j;
  j["removed_edges"] = m.removed;
  j["kept_edges"] = m.kept;
  j["expansion"] = mat_json(m.expansion);
  j["core_classes"] = mat_json(m.core);
  nlohmann::json tj = nlohmann::json::array();
  for (const auto& t : ts) tj.push_back({{"cylinder", t.cylinder}, {"matrix", mat_json(t.matrix)}});
  j["transvections"] = tj;
  j["circles"] = {{"nu", cc.nu}, {"e", cc.e},     {"d", cc.d},        {"c", cc.c},
                  {"A", cc.A},   {"B", cc.B},     {"order", cc.order}, {"families", cc.families}};
  j["polytope"] = {{"bound", rat(p.bound)},
                   {"ambient", p.ambient},
                   {"rows", mat_json(p.rows)},
                   {"dim", p.dim},
                   {"vertices", p.vertices_listed ? mat_json(p.vertices) : nlohmann::json()}};
  return j;
}

}  // namespace mck
