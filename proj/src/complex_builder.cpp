#include "mck/complex_builder.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "mck/perturbation.hpp"
#include "mck/twist_algebra.hpp"

namespace mck {

namespace {

// Runs body(i) for i in [0, count) on up to `jobs` threads; the first exception wins.
void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (int i; (i = next++) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void check_params(int p, int q, int r, const Marking& m) {
  if (q > 4) throw BoundsError("enumeration is limited to q <= 4");
  if (p < 1 || q < 1 || r < 1) throw ArgumentError("p, q, r must be positive");
  if (p - q + r != 2) throw ArgumentError("p - q + r = " + std::to_string(p - q + r) + ", the sphere needs 2");
  if (m.p_hat < 0 || m.q_hat < 0 || m.r_hat < 0 || m.p_hat > p || m.q_hat > q || m.r_hat > r)
    throw ArgumentError("marked counts out of range");
  if (m.p_fix < 0 || m.q_fix < 0 || m.r_fix < 0 || m.p_fix > m.p_hat || m.q_fix > m.q_hat || m.r_fix > m.r_hat)
    throw ArgumentError("fixed counts must not exceed marked counts");
  if (m.marked_total() <= 2) throw ArgumentError("need more than two marked critical points");
}

// Ordered selections of k items out of n (injective maps {0..k-1} -> {0..n-1}).
std::vector<std::vector<int>> arrangements(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::vector<bool> used(n, false);
  std::function<void()> rec = [&] {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      cur.push_back(i);
      rec();
      cur.pop_back();
      used[i] = false;
    }
  };
  rec();
  return out;
}

// Caps every circle of a single-level graph; marked labels go to the chosen circles and
// the remaining labels follow circle order.
void attach_caps(MorseGraph& g, const Topology& t, const std::vector<int>& lower, const std::vector<int>& upper,
                 const std::vector<int>& lower_marked, const std::vector<int>& upper_marked) {
  g.caps.clear();
  auto place = [&](const std::vector<int>& circles, const std::vector<int>& marked, Extremum kind) {
    std::vector<int> label(circles.size(), 0);
    for (std::size_t k = 0; k < marked.size(); ++k) label[marked[k]] = static_cast<int>(k) + 1;
    int next = static_cast<int>(marked.size());
    for (std::size_t i = 0; i < circles.size(); ++i) {
      if (label[i] == 0) label[i] = ++next;
      g.caps.push_back({t.key(circles[i]), kind, label[i]});
    }
  };
  place(lower, lower_marked, Extremum::min);
  place(upper, upper_marked, Extremum::max);
}

std::vector<std::string> read_cache(const std::string& path, const std::string& key) {
  std::ifstream in(path);
  if (!in) return {};
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.contains(key)) return {};
    return j.at(key).get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("seen-set cache " + path + " is unreadable: " + e.what());
  }
}

void write_cache(const std::string& path, const std::string& key, const std::vector<std::string>& forms) {
  nlohmann::json j = nlohmann::json::object();
  {
    std::ifstream in(path);
    if (in) {
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception&) {
        j = nlohmann::json::object();
      }
    }
  }
  j[key] = forms;
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write seen-set cache " + path);
  out << j.dump(1) << '\n';
}

}  // namespace

std::string params_key(int p, int q, int r, const Marking& m) {
  return "p" + std::to_string(p) + "q" + std::to_string(q) + "r" + std::to_string(r) + "m" + std::to_string(m.p_hat) +
         "." + std::to_string(m.q_hat) + "." + std::to_string(m.r_hat) + "f" + std::to_string(m.p_fix) + "." +
         std::to_string(m.q_fix) + "." + std::to_string(m.r_fix);
}

std::vector<MorseGraph> enumerate_top_classes(int p, int q, int r, const Marking& marks, const EnumerateOptions& opts) {
  check_params(p, q, r, marks);
  const std::string key = params_key(p, q, r, marks);
  if (!opts.cache_path.empty()) {
    const auto cached = read_cache(opts.cache_path, key);
    if (!cached.empty()) {
      std::vector<MorseGraph> out;
      for (const auto& f : cached) {
        MorseGraph g = decode_canonical(f);
        if (g.p != p || g.q != q || g.r != r || !(g.marks == marks) || g.levels() != 1)
          throw ParseError("seen-set cache entry does not match " + key);
        out.push_back(std::move(g));
      }
      return out;
    }
  }

  // Stage 1: connected planar single-level atoms up to isomorphism, caps unlabeled.
  Marking bare = marks;
  bare.p_hat = bare.r_hat = bare.p_fix = bare.r_fix = 0;
  std::vector<int> in_darts;
  for (int d = 1; d < 4 * q; d += 2) in_darts.push_back(d);
  const int E = 2 * q;
  std::mutex mu;
  std::map<std::string, MorseGraph> structures;
  // Split the matchings by the head of edge 0 so threads work on disjoint slices.
  parallel_for(E, opts.jobs, [&](int first) {
    std::vector<int> rest;
    for (int i = 0; i < E; ++i)
      if (i != first) rest.push_back(in_darts[i]);
    std::map<std::string, MorseGraph> local;
    do {
      MorseGraph g;
      g.p = p;
      g.q = q;
      g.r = r;
      g.marks = bare;
      g.level.assign(q, 0);
      g.head.resize(E);
      g.head[0] = in_darts[first];
      std::copy(rest.begin(), rest.end(), g.head.begin() + 1);
      const Topology t = trace(g);
      if (t.atoms.size() != 1) continue;
      std::vector<int> lower, upper;
      for (std::size_t c = 0; c < t.circles.size(); ++c)
        (t.circles[c].side == Side::lower ? lower : upper).push_back(static_cast<int>(c));
      if (static_cast<int>(lower.size()) != p || static_cast<int>(upper.size()) != r) continue;
      attach_caps(g, t, lower, upper, {}, {});
      local.emplace(canonical_form(g), g);
    } while (std::next_permutation(rest.begin(), rest.end()));
    std::lock_guard lock(mu);
    structures.merge(local);
  });

  // Stage 2: every placement of the marked extremum labels.
  std::vector<MorseGraph> reps;
  for (auto& [_, g] : structures) reps.push_back(g);
  const auto low_arr = arrangements(p, marks.p_hat);
  const auto up_arr = arrangements(r, marks.r_hat);
  std::map<std::string, MorseGraph> found;
  parallel_for(static_cast<int>(reps.size()), opts.jobs, [&](int i) {
    MorseGraph g = reps[i];
    g.marks = marks;
    const Topology t = trace(g);
    std::vector<int> lower, upper;
    for (std::size_t c = 0; c < t.circles.size(); ++c)
      (t.circles[c].side == Side::lower ? lower : upper).push_back(static_cast<int>(c));
    std::map<std::string, MorseGraph> local;
    for (const auto& lm : low_arr)
      for (const auto& um : up_arr) {
        attach_caps(g, t, lower, upper, lm, um);
        validate(g);
        local.emplace(canonical_form(g), g);
      }
    std::lock_guard lock(mu);
    found.merge(local);
  });
  std::vector<MorseGraph> out;
  std::vector<std::string> forms;
  for (auto& [form, g] : found) {
    forms.push_back(form);
    out.push_back(decode_canonical(form));
  }
  if (!opts.cache_path.empty()) write_cache(opts.cache_path, key, forms);
  return out;
}

int ComplexK::find(const std::string& id) const {
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i].id == id) return static_cast<int>(i);
  return -1;
}

namespace {

struct Closure {
  std::vector<MorseGraph> graphs;
  std::vector<std::string> forms;
  std::vector<Incidence> incidence;
};

Closure close_under_delta(const std::vector<MorseGraph>& seeds, int jobs) {
  std::map<std::string, int> index;
  std::vector<MorseGraph> graphs;
  std::vector<std::string> forms;
  std::vector<Incidence> inc;
  auto add = [&](const MorseGraph& g, const std::string& f) {
    auto [it, fresh] = index.emplace(f, static_cast<int>(graphs.size()));
    if (fresh) {
      graphs.push_back(g);
      forms.push_back(f);
    }
    return it->second;
  };
  for (const auto& s : seeds) {
    if (s.levels() != 1) throw ArgumentError("build_complex: seeds must be single-level classes");
    add(s, canonical_form(s));
  }
  std::size_t done = 0;
  while (done < graphs.size()) {
    const std::size_t end = graphs.size();
    struct Result {
      std::vector<std::pair<OrderedPartition, MorseGraph>> faces;
      std::vector<std::string> forms;
    };
    std::vector<Result> results(end - done);
    parallel_for(static_cast<int>(end - done), jobs, [&](int i) {
      const MorseGraph& g = graphs[done + i];
      const OrderedPartition J = OrderedPartition::from_levels(g.level);
      for (const auto& face : refinements(J)) {
        if (face == J) continue;
        MorseGraph h = delta(g, face);
        results[i].forms.push_back(canonical_form(h));
        results[i].faces.emplace_back(face, std::move(h));
      }
    });
    for (std::size_t i = 0; i < results.size(); ++i)
      for (std::size_t k = 0; k < results[i].faces.size(); ++k) {
        const int target = add(results[i].faces[k].second, results[i].forms[k]);
        inc.push_back({static_cast<int>(done + i), results[i].faces[k].first, target});
      }
    done = end;
  }
  // Deterministic order: (s, canonical form).
  std::vector<int> perm(graphs.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    return std::pair(graphs[a].levels(), forms[a]) < std::pair(graphs[b].levels(), forms[b]);
  });
  std::vector<int> where(graphs.size());
  Closure c;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    where[perm[i]] = static_cast<int>(i);
    c.graphs.push_back(decode_canonical(forms[perm[i]]));
    c.forms.push_back(forms[perm[i]]);
  }
  for (auto& x : inc) c.incidence.push_back({where[x.source], x.face, where[x.target]});
  std::sort(c.incidence.begin(), c.incidence.end(), [](const Incidence& a, const Incidence& b) {
    return std::pair(a.source, a.face) < std::pair(b.source, b.face);
  });
  return c;
}

std::vector<long long> poly_mul(const std::vector<long long>& a, const std::vector<long long>& b) {
  std::vector<long long> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

HandleRecord handle_record(const MorseGraph& g, const std::string& id) {
  HandleRecord h;
  h.id = id;
  const auto inv = invariants(g);
  h.J = inv.J;
  h.s = inv.s;
  h.t = inv.t;
  h.n = inv.n;
  h.index = g.q - inv.s;
  const HomologyModel m = homology_model(g);
  const CircleClassification cc = classify_circles(g);
  h.c = cc.c;
  h.d = cc.d;
  h.dim_u = u_polytope(g, m, 0).dim;
  h.handle_dim = h.index + h.n + h.dim_u;
  const auto autos = automorphisms(g);
  h.gamma_order = static_cast<int>(autos.size());
  const StabReport rep = check_stab_action(g, m, autos);
  h.admissible = rep.all_admissible;
  h.free = rep.all_free;
  // Invariants of the exterior algebra on the torus lattice: average of det(I + t rho).
  std::vector<long long> total(h.d + 1, 0);
  for (const auto& a : autos) {
    std::vector<long long> f{1};
    std::vector<bool> seen(g.cylinders.size(), false);
    for (int l : cc.B) {
      if (seen[l]) continue;
      int len = 0;
      for (int x = l; !seen[x]; x = a.cylinder_map[x]) seen[x] = true, ++len;
      std::vector<long long> factor(len + 1, 0);
      factor[0] = 1;
      factor[len] = len % 2 == 1 ? 1 : -1;  // 1 - (-t)^len
      f = poly_mul(f, factor);
    }
    for (std::size_t i = 0; i < f.size() && i < total.size(); ++i) total[i] += f[i];
  }
  for (auto& x : total) {
    if (x % h.gamma_order != 0) throw InvariantViolation("Poincare polynomial of a handle is not integral");
    x /= h.gamma_order;
  }
  h.poincare = total;
  return h;
}

}  // namespace

std::vector<MorseGraph> closure(const std::vector<MorseGraph>& seeds, int jobs) {
  return close_under_delta(seeds, jobs).graphs;
}

ComplexK build_complex(const std::vector<MorseGraph>& seeds, int jobs) {
  if (seeds.empty()) throw ArgumentError("build_complex: no seeds");
  ComplexK k;
  k.p = seeds.front().p;
  k.q = seeds.front().q;
  k.r = seeds.front().r;
  k.marks = seeds.front().marks;
  for (const auto& s : seeds)
    if (s.p != k.p || s.q != k.q || s.r != k.r || !(s.marks == k.marks))
      throw ArgumentError("build_complex: seeds have different parameters");
  Closure c = close_under_delta(seeds, jobs);
  k.graphs = std::move(c.graphs);
  k.incidence = std::move(c.incidence);
  k.classes.resize(k.graphs.size());
  parallel_for(static_cast<int>(k.graphs.size()), jobs,
               [&](int i) { k.classes[i] = handle_record(k.graphs[i], c.forms[i]); });
  for (const auto& h : k.classes)
    if (h.s == 1) ++k.top_count;
  return k;
}

EulerReport euler_characteristic(const ComplexK& k) {
  EulerReport r;
  r.formula = (k.q % 2 == 1 ? 1 : -1) * static_cast<long long>(k.top_count);
  for (const auto& h : k.classes)
    if (h.c > 0) r.compact = false;
  if (!r.compact) {
    r.note = "non-compact scope: some handle has c > 0; independent sum skipped";
    return r;
  }
  r.independent = 0;
  std::string odd;
  for (const auto& h : k.classes) {
    if (h.d != 0) continue;
    r.independent += Rational((h.index % 2 == 0 ? 1 : -1), h.gamma_order);
    if (h.gamma_order > 1) odd += " " + h.id + " (|Gamma| = " + std::to_string(h.gamma_order) + ")";
  }
  r.agree = r.independent == Rational(static_cast<long>(r.formula));
  if (!r.agree) r.note = "disagreement; classes with d = 0 and nontrivial Gamma:" + (odd.empty() ? " none" : odd);
  return r;
}

std::vector<long long> q_polynomial(const ComplexK& k) {
  std::vector<long long> Q;
  for (const auto& h : k.classes) {
    if (Q.size() < h.index + h.poincare.size()) Q.resize(h.index + h.poincare.size(), 0);
    for (std::size_t i = 0; i < h.poincare.size(); ++i) Q[h.index + i] += h.poincare[i];
  }
  return Q;
}

int complex_dimension(const ComplexK& k) {
  int d = 0;
  for (const auto& h : k.classes) d = std::max(d, h.handle_dim);
  return d;
}

int complex_rank(const ComplexK& k) {
  int d = 0;
  for (const auto& h : k.classes) d = std::max(d, h.index);
  return d;
}

int betti0(const ComplexK& k) {
  std::vector<int> parent(k.classes.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& i : k.incidence) parent[find(i.source)] = find(i.target);
  int comps = 0;
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (find(static_cast<int>(i)) == static_cast<int>(i)) ++comps;
  return comps;
}

bool sole_stratified(const ComplexK& k) {
  std::vector<bool> hit(k.classes.size(), false);
  for (const auto& i : k.incidence) {
    if (k.classes[i.target].index >= k.classes[i.source].index) return false;
    if (k.classes[i.target].index != k.q - i.face.size()) return false;
    hit[i.target] = true;
  }
  for (std::size_t i = 0; i < k.classes.size(); ++i)
    if (k.classes[i].s > 1 && !hit[i]) return false;
  return true;
}

MorseSmaleReport morse_smale_report(const ComplexK& k, const std::optional<std::vector<long long>>& betti) {
  if (betti)
    for (long long b : *betti)
      if (b < 0) throw ArgumentError("Betti numbers must be nonnegative");
  const auto Q = q_polynomial(k);
  const int vanish = 3 * k.q - 2;
  std::size_t len = std::max<std::size_t>(Q.size(), static_cast<std::size_t>(std::max(vanish, 0)) + 1);
  if (betti) len = std::max(len, betti->size());
  MorseSmaleReport rep;
  long long alt_q = 0, alt_b = 0;
  for (std::size_t j = 0; j < len; ++j) {
    MorseSmaleRow row;
    row.j = static_cast<int>(j);
    row.q = j < Q.size() ? Q[j] : 0;
    alt_q = row.q - alt_q;
    row.alt_q = alt_q;
    row.vanishing_slot = static_cast<int>(j) >= vanish && k.q >= 1;
    // Only the listed Betti numbers are evaluated; the rest are unknown, not zero.
    if (betti && j < betti->size()) {
      const long long b = (*betti)[j];
      alt_b = b - alt_b;
      row.betti = b;
      row.alt_b = alt_b;
      row.inequality = alt_b <= alt_q;
      row.bounded = b <= row.q;
      if (row.vanishing_slot && b != 0) row.bounded = false;
      rep.all_hold = rep.all_hold && row.inequality && row.bounded;
    }
    if (row.q < 0) rep.all_hold = false;
    rep.rows.push_back(row);
  }
  rep.note = "Betti numbers beyond beta_0 are not computed: no cell structure is built for the skew handles";
  return rep;
}

Catalog to_catalog(const ComplexK& k) {
  Catalog c;
  c.p = k.p;
  c.q = k.q;
  c.r = k.r;
  c.marks = k.marks;
  c.classes = k.graphs;
  return c;
}

}  // namespace mck
