#include "mck/graph_io.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace mck {

using nlohmann::json;

namespace {

json circle_ref(const Topology& t, const CircleKey& k) {
  const int c = t.circle_index(k);
  const int atom = t.circles[c].atom;
  const auto& list = t.atom_circles[atom];
  const int local = static_cast<int>(std::find(list.begin(), list.end(), c) - list.begin());
  return json::array({atom, local});
}

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing key '") + key + "'");
  return j.at(key);
}

int need_int(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("key '") + key + "' must be an integer");
  return v.get<int>();
}

std::vector<int> int_list(const json& v, const std::string& what) {
  if (!v.is_array()) throw ParseError(what + " must be an array");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw ParseError(what + " must hold integers");
    out.push_back(x.get<int>());
  }
  return out;
}

}  // namespace

json to_json(const MorseGraph& g) {
  const Topology t = trace(g);
  json j;
  j["q"] = g.q;
  j["p"] = g.p;
  j["r"] = g.r;
  json levels = json::array();
  for (int l = 0; l < g.levels(); ++l) {
    json ids = json::array();
    for (std::size_t a = 0; a < t.atoms.size(); ++a)
      if (t.atom_level[a] == l) ids.push_back(a);
    levels.push_back(ids);
  }
  j["levels"] = levels;
  json atoms = json::array();
  for (const auto& sad : t.atoms) {
    json a;
    std::map<int, int> local;
    json saddles = json::array(), darts = json::array(), edges = json::array();
    for (std::size_t i = 0; i < sad.size(); ++i) {
      local[sad[i]] = static_cast<int>(i);
      saddles.push_back(sad[i] + 1);
    }
    for (int v : sad)
      for (int s = 0; s < 4; ++s) darts.push_back(json::array({v + 1, s, s % 2 == 0 ? "out" : "in"}));
    for (int v : sad)
      for (int k : {0, 2}) {
        const int h = g.head[edge_of_out(dart_of(v, k))];
        edges.push_back(json::array({4 * local[v] + k, 4 * local[dart_saddle(h)] + dart_slot(h)}));
      }
    a["saddles"] = saddles;
    a["darts"] = darts;
    a["edges"] = edges;
    atoms.push_back(a);
  }
  j["atoms"] = atoms;
  json caps = json::array();
  for (const auto& c : g.caps)
    caps.push_back({{"circle", circle_ref(t, c.circle)},
                    {"kind", c.kind == Extremum::min ? "min" : "max"},
                    {"label", c.label},
                    {"marked", g.cap_marked(c)},
                    {"fixed", g.cap_fixed(c)}});
  j["caps"] = caps;
  json cyl = json::array();
  for (const auto& z : g.cylinders) cyl.push_back(json::array({circle_ref(t, z.bottom), circle_ref(t, z.top)}));
  j["cylinders"] = cyl;
  json ms = json::array(), fs = json::array();
  for (int v = 0; v < g.marks.q_hat; ++v) ms.push_back(v + 1);
  for (int v = 0; v < g.marks.q_fix; ++v) fs.push_back(v + 1);
  j["marked_saddles"] = ms;
  j["fixed_saddles"] = fs;
  return j;
}

MorseGraph from_json(const json& j) {
  try {
    MorseGraph g;
    g.q = need_int(j, "q");
    g.p = need_int(j, "p");
    g.r = need_int(j, "r");
    const json& levels = need(j, "levels");
    const json& atoms = need(j, "atoms");
    const json& caps = need(j, "caps");
    const json& cylinders = need(j, "cylinders");
    const auto marked = int_list(need(j, "marked_saddles"), "marked_saddles");
    const auto fixed = int_list(need(j, "fixed_saddles"), "fixed_saddles");
    if (g.q < 1 || g.q > 64) throw ParseError("q out of range");
    if (!atoms.is_array() || !levels.is_array() || !caps.is_array() || !cylinders.is_array())
      throw ParseError("levels, atoms, caps and cylinders must be arrays");

    g.level.assign(g.q, -1);
    g.head.assign(2 * g.q, -1);
    std::vector<int> atom_level(atoms.size(), -1);
    for (std::size_t l = 0; l < levels.size(); ++l)
      for (int a : int_list(levels[l], "levels entry")) {
        if (a < 0 || a >= static_cast<int>(atoms.size())) throw ParseError("level names unknown atom");
        if (atom_level[a] != -1) throw ParseError("atom listed on two levels");
        atom_level[a] = static_cast<int>(l);
      }
    std::vector<std::vector<int>> atom_saddles;
    std::vector<int> seen(g.q, 0);
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      if (atom_level[a] == -1) throw ParseError("atom " + std::to_string(a) + " has no level");
      const json& A = atoms[a];
      const auto sad = int_list(need(A, "saddles"), "saddles");
      const json& darts = need(A, "darts");
      const json& edges = need(A, "edges");
      if (sad.empty()) throw ParseError("atom without saddles");
      if (!darts.is_array() || darts.size() != 4 * sad.size()) throw ParseError("darts must list 4 entries per saddle");
      // shift[i] maps the listed slot numbering of saddle i onto one with slot 0 outgoing.
      std::vector<int> shift(sad.size());
      std::vector<int> dirs(darts.size());
      for (std::size_t i = 0; i < sad.size(); ++i) {
        const int v = sad[i] - 1;
        if (v < 0 || v >= g.q || seen[v]++) throw ValidationError(GraphError::bad_reference, "saddle label reused or out of range");
        g.level[v] = atom_level[a];
        for (int s = 0; s < 4; ++s) {
          const json& d = darts[4 * i + s];
          if (!d.is_array() || d.size() != 3 || !d[0].is_number_integer() || !d[1].is_number_integer() || !d[2].is_string())
            throw ParseError("dart entry must be [saddle, slot, \"out\"|\"in\"]");
          if (d[0].get<int>() != sad[i] || d[1].get<int>() != s) throw ParseError("dart entries out of order");
          const std::string dir = d[2].get<std::string>();
          if (dir != "out" && dir != "in") throw ParseError("dart direction must be out or in");
          dirs[4 * i + s] = dir == "out";
        }
        for (int s = 0; s < 4; ++s)
          if (dirs[4 * i + s] == dirs[4 * i + (s + 1) % 4])
            throw ValidationError(GraphError::non_alternating_vertex, "saddle " + std::to_string(sad[i]) + " does not alternate");
        shift[i] = dirs[4 * i] ? 0 : 3;
      }
      auto global = [&](int local) {
        if (local < 0 || local >= static_cast<int>(darts.size())) throw ParseError("edge dart index out of range");
        const int i = local / 4;
        return dart_of(sad[i] - 1, (local % 4 + shift[i]) % 4);
      };
      if (!edges.is_array()) throw ParseError("edges must be an array");
      for (const auto& e : edges) {
        const auto pr = int_list(e, "edge");
        if (pr.size() != 2) throw ParseError("edge must have two darts");
        if (!dirs.at(pr[0]) || dirs.at(pr[1]))
          throw ValidationError(GraphError::unmatched_dart, "edge must join an outgoing dart to an incoming dart");
        const int from = global(pr[0]), to = global(pr[1]);
        if (g.head[edge_of_out(from)] != -1) throw ValidationError(GraphError::unmatched_dart, "outgoing dart used twice");
        g.head[edge_of_out(from)] = to;
      }
      atom_saddles.push_back(sad);
    }
    for (int v = 0; v < g.q; ++v)
      if (!seen[v]) throw ValidationError(GraphError::bad_reference, "saddle " + std::to_string(v + 1) + " missing");
    for (int e = 0; e < 2 * g.q; ++e)
      if (g.head[e] == -1) throw ValidationError(GraphError::unmatched_dart, "outgoing dart unmatched");

    g.marks.q_hat = static_cast<int>(marked.size());
    g.marks.q_fix = static_cast<int>(fixed.size());
    for (std::size_t i = 0; i < marked.size(); ++i)
      if (marked[i] != static_cast<int>(i) + 1) throw ValidationError(GraphError::marking, "marked saddles must be 1..k");
    for (std::size_t i = 0; i < fixed.size(); ++i)
      if (fixed[i] != static_cast<int>(i) + 1) throw ValidationError(GraphError::marking, "fixed saddles must be 1..k");

    // Circle references resolve against the bare ribbon structure; attachments come later.
    const Topology t = trace(g);
    std::map<int, int> atom_by_min;
    for (std::size_t a = 0; a < t.atoms.size(); ++a) atom_by_min[t.atoms[a][0]] = static_cast<int>(a);
    auto resolve = [&](const json& ref) -> CircleKey {
      const auto pr = int_list(ref, "circle reference");
      if (pr.size() != 2 || pr[0] < 0 || pr[0] >= static_cast<int>(atom_saddles.size()))
        throw ValidationError(GraphError::bad_reference, "circle reference must be [atom, index]");
      const int mn = *std::min_element(atom_saddles[pr[0]].begin(), atom_saddles[pr[0]].end()) - 1;
      auto it = atom_by_min.find(mn);
      if (it == atom_by_min.end() || t.atoms[it->second].size() != atom_saddles[pr[0]].size())
        throw ValidationError(GraphError::bad_reference, "atom " + std::to_string(pr[0]) + " is not connected as listed");
      const auto& list = t.atom_circles[it->second];
      if (pr[1] < 0 || pr[1] >= static_cast<int>(list.size()))
        throw ValidationError(GraphError::bad_reference, "circle index out of range");
      return t.key(list[pr[1]]);
    };
    int pm = 0, rm = 0, pf = 0, rf = 0;
    std::set<int> pmarked, rmarked, pfixed, rfixed;
    for (const auto& c : caps) {
      Cap cap;
      cap.circle = resolve(need(c, "circle"));
      const json& kind = need(c, "kind");
      if (!kind.is_string() || (kind != "min" && kind != "max")) throw ParseError("cap kind must be min or max");
      cap.kind = kind == "min" ? Extremum::min : Extremum::max;
      cap.label = need_int(c, "label");
      const json& mk = need(c, "marked");
      const json& fx = need(c, "fixed");
      if (!mk.is_boolean() || !fx.is_boolean()) throw ParseError("marked/fixed must be booleans");
      if (fx.get<bool>() && !mk.get<bool>()) throw ValidationError(GraphError::marking, "fixed cap must be marked");
      auto& m = cap.kind == Extremum::min ? pmarked : rmarked;
      auto& f = cap.kind == Extremum::min ? pfixed : rfixed;
      if (mk.get<bool>()) m.insert(cap.label), ++(cap.kind == Extremum::min ? pm : rm);
      if (fx.get<bool>()) f.insert(cap.label), ++(cap.kind == Extremum::min ? pf : rf);
      g.caps.push_back(cap);
    }
    auto prefix = [](const std::set<int>& s, int n) {
      if (static_cast<int>(s.size()) != n) return false;
      int k = 1;
      for (int x : s)
        if (x != k++) return false;
      return true;
    };
    if (!prefix(pmarked, pm) || !prefix(rmarked, rm) || !prefix(pfixed, pf) || !prefix(rfixed, rf))
      throw ValidationError(GraphError::marking, "marked and fixed extrema must carry labels 1..k");
    g.marks.p_hat = pm;
    g.marks.r_hat = rm;
    g.marks.p_fix = pf;
    g.marks.r_fix = rf;
    for (const auto& z : cylinders) {
      if (!z.is_array() || z.size() != 2) throw ParseError("cylinder must be [bottom, top]");
      g.cylinders.push_back({resolve(z[0]), resolve(z[1])});
    }
    validate(g);
    return g;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed graph JSON: ") + e.what());
  }
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

MorseGraph from_json_text(const std::string& text) { return from_json(parse_json_text(text)); }

namespace {

void dot_body(std::ostream& os, const MorseGraph& g, const std::string& pfx, const std::string& indent) {
  const Topology t = trace(g);
  for (int l = 0; l < g.levels(); ++l) {
    os << indent << "subgraph cluster_" << pfx << "level_" << l << " {\n";
    os << indent << "  label=\"level " << l << "\";\n";
    for (int v = 0; v < g.q; ++v)
      if (g.level[v] == l)
        os << indent << "  " << pfx << "s" << v + 1 << " [shape=box,label=\"s" << v + 1
           << (g.saddle_marked(v) ? "*" : "") << "\"];\n";
    os << indent << "}\n";
  }
  for (int e = 0; e < 2 * g.q; ++e)
    os << indent << pfx << "s" << e / 2 + 1 << " -> " << pfx << "s" << dart_saddle(g.head[e]) + 1 << " [label=\"e"
       << e << "\"];\n";
  for (std::size_t k = 0; k < g.caps.size(); ++k) {
    const Cap& c = g.caps[k];
    const int v = c.circle.edge / 2 + 1;
    os << indent << pfx << "c" << k << " [shape=circle,label=\"" << (c.kind == Extremum::min ? "min " : "max ")
       << c.label << (g.cap_marked(c) ? "*" : "") << "\"];\n";
    os << indent << pfx << "c" << k << " -> " << pfx << "s" << v << " [style=dotted,arrowhead=none];\n";
  }
  for (std::size_t z = 0; z < g.cylinders.size(); ++z)
    os << indent << pfx << "s" << g.cylinders[z].bottom.edge / 2 + 1 << " -> " << pfx << "s"
       << g.cylinders[z].top.edge / 2 + 1 << " [style=dashed,label=\"Z" << z << "\"];\n";
}

}  // namespace

std::string to_dot(const MorseGraph& g, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=BT;\n";
  dot_body(os, g, "", "  ");
  os << "}\n";
  return os.str();
}

json catalog_to_json(const Catalog& c) {
  json j;
  j["params"] = {{"p", c.p},
                 {"q", c.q},
                 {"r", c.r},
                 {"marked", {c.marks.p_hat, c.marks.q_hat, c.marks.r_hat}},
                 {"fixed", {c.marks.p_fix, c.marks.q_fix, c.marks.r_fix}}};
  json classes = json::array();
  for (const auto& g : c.classes) classes.push_back(to_json(g));
  j["classes"] = classes;
  return j;
}

Catalog catalog_from_json(const json& j) {
  Catalog c;
  const json& params = need(j, "params");
  c.p = need_int(params, "p");
  c.q = need_int(params, "q");
  c.r = need_int(params, "r");
  const auto mk = int_list(need(params, "marked"), "marked");
  const auto fx = int_list(need(params, "fixed"), "fixed");
  if (mk.size() != 3 || fx.size() != 3) throw ParseError("marked/fixed must have three entries");
  c.marks = {mk[0], mk[1], mk[2], fx[0], fx[1], fx[2]};
  const json& classes = need(j, "classes");
  if (!classes.is_array()) throw ParseError("classes must be an array");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    MorseGraph g;
    try {
      g = from_json(classes[i]);
    } catch (const ParseError& e) {
      throw ParseError("class " + std::to_string(i) + ": " + e.what());
    }
    if (g.p != c.p || g.q != c.q || g.r != c.r || !(g.marks == c.marks))
      throw ValidationError(GraphError::marking, "class " + std::to_string(i) + " disagrees with catalog parameters");
    c.classes.push_back(std::move(g));
  }
  return c;
}

std::string catalog_to_dot(const Catalog& c) {
  std::ostringstream os;
  os << "digraph catalog {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < c.classes.size(); ++i) {
    os << "  subgraph cluster_class_" << i << " {\n    label=\"class " << i << "\";\n";
    dot_body(os, c.classes[i], "k" + std::to_string(i) + "_", "    ");
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace mck
