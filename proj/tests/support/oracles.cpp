#include "oracles.hpp"

#include <functional>
#include <map>
#include <mutex>

namespace oracle {

using namespace mck;

long long factorial(int q) {
  long long f = 1;
  for (int i = 2; i <= q; ++i) f *= i;
  return f;
}

long long ordered_bell(int q) {
  std::vector<long long> a(q + 1, 0);
  a[0] = 1;
  for (int n = 1; n <= q; ++n) {
    long long binom = 1;  // C(n, k)
    for (int k = 1; k <= n; ++k) {
      binom = binom * (n - k + 1) / k;
      a[n] += binom * a[n - k];
    }
  }
  return a[q];
}

std::vector<std::vector<int>> level_functions(int q) {
  std::vector<std::vector<int>> out;
  std::vector<int> f(q, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == q) {
      std::vector<bool> used(q, false);
      int top = 0;
      for (int x : f) used[x] = true, top = std::max(top, x);
      for (int x = 0; x <= top; ++x)
        if (!used[x]) return;
      out.push_back(f);
      return;
    }
    for (int x = 0; x < q; ++x) {
      f[i] = x;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

bool geometric_contains(const OrderedPartition& j1, const OrderedPartition& j2) {
  const int q = j2.ground();
  const PermFace f = face_of(j1);
  for (const auto& c2 : f.coords2) {
    // Doubled coordinates: each prefix union of blocks must attain the smallest possible sum.
    int prefix = 0;
    long long have = 0, want = 0;
    for (const auto& block : j2.blocks()) {
      for (int label : block) {
        ++prefix;
        have += c2[label - 1];
        want += 2 * prefix - (q + 1);
      }
      if (have != want) return false;
    }
  }
  return true;
}

namespace {

std::vector<std::vector<int>> injections(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::vector<bool> used(n, false);
  std::function<void()> rec = [&] {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = 0; i < n; ++i)
      if (!used[i]) {
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

}  // namespace

std::set<std::string> direct_enumeration(int p, int q, int r, const Marking& marks, bool top_only) {
  std::set<std::string> forms;
  const auto low_inj = injections(p, marks.p_hat);
  const auto up_inj = injections(r, marks.r_hat);
  for (const auto& level : level_functions(q)) {
    if (top_only && *std::max_element(level.begin(), level.end()) != 0) continue;
    MorseGraph g;
    g.p = p;
    g.q = q;
    g.r = r;
    g.marks = marks;
    g.level = level;
    g.head.assign(2 * q, -1);
    std::vector<bool> taken(4 * q, false);
    std::function<void(int)> match = [&](int e) {
      if (e == 2 * q) {
        const Topology t = trace(g);
        std::vector<int> lower, upper;
        for (std::size_t c = 0; c < t.circles.size(); ++c)
          (t.circles[c].side == Side::lower ? lower : upper).push_back(static_cast<int>(c));
        if (static_cast<int>(lower.size() + upper.size()) != p + r + 2 * (static_cast<int>(t.atoms.size()) - 1)) return;
        // Each upper circle is capped or glued to a free lower circle on a higher level.
        std::vector<int> partner(upper.size(), -1);
        std::vector<bool> used(lower.size(), false);
        std::function<void(std::size_t)> attach = [&](std::size_t i) {
          if (i == upper.size()) {
            std::vector<int> mins, maxs;
            for (std::size_t k = 0; k < lower.size(); ++k)
              if (!used[k]) mins.push_back(lower[k]);
            for (std::size_t k = 0; k < upper.size(); ++k)
              if (partner[k] == -1) maxs.push_back(upper[k]);
            if (static_cast<int>(mins.size()) != p || static_cast<int>(maxs.size()) != r) return;
            MorseGraph h = g;
            for (std::size_t k = 0; k < upper.size(); ++k)
              if (partner[k] != -1) h.cylinders.push_back({t.key(upper[k]), t.key(lower[partner[k]])});
            for (const auto& lm : low_inj)
              for (const auto& um : up_inj) {
                h.caps.clear();
                auto place = [&](const std::vector<int>& circles, const std::vector<int>& marked, Extremum kind) {
                  std::vector<int> label(circles.size(), 0);
                  for (std::size_t k = 0; k < marked.size(); ++k) label[marked[k]] = static_cast<int>(k) + 1;
                  int next = static_cast<int>(marked.size());
                  for (std::size_t k = 0; k < circles.size(); ++k)
                    h.caps.push_back({t.key(circles[k]), kind, label[k] ? label[k] : ++next});
                };
                place(mins, lm, Extremum::min);
                place(maxs, um, Extremum::max);
                try {
                  validate(h);
                } catch (const ValidationError&) {
                  continue;
                }
                forms.insert(canonical_form(h));
              }
            return;
          }
          attach(i + 1);
          const int lvl = t.atom_level[t.circles[upper[i]].atom];
          for (std::size_t k = 0; k < lower.size(); ++k) {
            if (used[k] || t.atom_level[t.circles[lower[k]].atom] <= lvl) continue;
            used[k] = true;
            partner[i] = static_cast<int>(k);
            attach(i + 1);
            partner[i] = -1;
            used[k] = false;
          }
        };
        attach(0);
        return;
      }
      for (int d = 1; d < 4 * q; d += 2) {
        if (taken[d] || level[d / 4] != level[e / 2]) continue;
        taken[d] = true;
        g.head[e] = d;
        match(e + 1);
        taken[d] = false;
      }
      g.head[e] = -1;
    };
    match(0);
  }
  return forms;
}

MorseGraph figure_eight(const Marking& marks) {
  MorseGraph g;
  g.p = 2;
  g.q = 1;
  g.r = 1;
  g.marks = marks;
  g.level = {0};
  g.head = {3, 1};
  g.caps = {{{Side::lower, 0}, Extremum::min, 1}, {{Side::lower, 1}, Extremum::min, 2}, {{Side::upper, 0}, Extremum::max, 1}};
  return g;
}

MorseGraph two_level_example(const Marking& marks) {
  MorseGraph g;
  g.p = 2;
  g.q = 2;
  g.r = 2;
  g.marks = marks;
  g.level = {0, 1};
  g.head = {3, 1, 5, 7};
  g.caps = {{{Side::lower, 0}, Extremum::min, 1},
            {{Side::lower, 1}, Extremum::min, 2},
            {{Side::upper, 2}, Extremum::max, 1},
            {{Side::upper, 3}, Extremum::max, 2}};
  g.cylinders = {{{Side::upper, 0}, {Side::lower, 2}}};
  return g;
}

std::vector<std::pair<int, int>> sphere_counts(int q) {
  std::vector<std::pair<int, int>> out;
  for (int p = 1; p <= q + 1; ++p) out.emplace_back(p, q + 2 - p);
  return out;
}

const std::vector<MorseGraph>& catalog(int p, int q, int r, const Marking& marks) {
  static std::mutex mu;
  static std::map<std::string, std::vector<MorseGraph>> memo;
  const std::string key = params_key(p, q, r, marks);
  std::lock_guard lock(mu);
  auto it = memo.find(key);
  if (it == memo.end()) it = memo.emplace(key, closure(enumerate_top_classes(p, q, r, marks))).first;
  return it->second;
}

std::vector<MorseGraph> full_catalog(int q) {
  std::vector<MorseGraph> out;
  for (auto [p, r] : sphere_counts(q)) {
    const auto& c = catalog(p, q, r, Marking::all(p, q, r));
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

}  // namespace oracle
