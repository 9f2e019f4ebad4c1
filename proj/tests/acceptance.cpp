// One PASS/FAIL line per acceptance criterion, with wall time. Exit status is nonzero if any fails.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "mck/perturbation.hpp"
#include "mck/twist_algebra.hpp"
#include "oracles.hpp"

using namespace mck;

namespace {

// Collects the first few failure messages of a criterion.
struct Check {
  int failures = 0;
  std::vector<std::string> notes;
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (++failures <= 5) notes.push_back(what);
  }
};

int failed_criteria = 0;

void criterion(int id, const std::string& title, double limit_seconds, const std::function<void(Check&)>& body) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0) {
    std::ostringstream os;
    os << "took " << secs << " s, limit " << limit_seconds << " s";
    c.expect(secs <= limit_seconds, os.str());
  }
  const bool pass = c.failures == 0;
  if (!pass) ++failed_criteria;
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << std::fixed
            << std::setprecision(2) << secs << " s)\n";
  for (const auto& n : c.notes) std::cout << "    " << n << "\n";
  if (c.failures > static_cast<int>(c.notes.size()))
    std::cout << "    ... " << c.failures - static_cast<int>(c.notes.size()) << " more\n";
  std::cout.flush();
}

std::string label(int p, int q, int r) {
  return "(p,q,r)=(" + std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(r) + ")";
}

std::vector<MorseGraph> catalogs_up_to(int q) {
  std::vector<MorseGraph> out;
  for (int k = 1; k <= q; ++k) {
    auto c = oracle::full_catalog(k);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

// Markings with more than two marked points and no fixed points.
std::vector<Marking> partial_markings(int p, int q, int r) {
  std::vector<Marking> out;
  for (int a = 0; a <= p; ++a)
    for (int b = 0; b <= q; ++b)
      for (int c = 0; c <= r; ++c)
        if (a + b + c > 2 && !(a == p && b == q && c == r)) out.push_back({a, b, c, 0, 0, 0});
  return out;
}

}  // namespace

int main() {
  criterion(1, "permutohedron census q = 1..6 and face-signature injectivity", 5.0, [](Check& c) {
    for (int q = 1; q <= 6; ++q) {
      const auto parts = enumerate_partitions(q);
      long long vertices = 0;
      for (const auto& J : parts) vertices += J.size() == q;
      c.expect(vertices == oracle::factorial(q), "vertex count at q=" + std::to_string(q));
      const long long brute = static_cast<long long>(oracle::level_functions(q).size());
      c.expect(static_cast<long long>(parts.size()) == brute, "face count vs brute force at q=" + std::to_string(q));
      c.expect(brute == oracle::ordered_bell(q), "brute force vs ordered Bell at q=" + std::to_string(q));
      std::map<OrderedPartition, std::set<std::vector<int>>> sigs;
      std::size_t pairs = 0;
      for (const auto& tau : parts)
        for (const auto& hat : refinements(tau)) {
          sigs[hat].insert(composition_signature(tau));
          ++pairs;
        }
      std::size_t distinct = 0;
      for (const auto& [hat, s] : sigs) distinct += s.size();
      c.expect(distinct == pairs, "signature collision at q=" + std::to_string(q));
    }
  });

  criterion(2, "partition-of-values stability, 10^4 exact randomized trials", 0, [](Check& c) {
    std::mt19937 rng(20261015);
    for (int trial = 0; trial < 10000; ++trial) {
      const int q = 1 + static_cast<int>(rng() % 6);
      std::vector<Rational> v(q);
      for (auto& x : v) x = Rational(static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 3));
      const auto J = partition_of_values(v);
      const Rational gap = value_gap(v);
      const Rational eps = gap == 0 ? Rational(1) : gap / 2;
      std::vector<Rational> w = v;
      for (auto& x : w) x += Rational(static_cast<int>(rng() % 2001) - 1000, 1001) * eps / q;
      c.expect(refines_or_equal(partition_of_values(w), J), "perturbation refined nothing coarser");
      const auto refs = refinements(J);
      const auto& target = refs[rng() % refs.size()];
      const auto u = realize_refinement(v, target, eps);
      Rational dist2 = 0;
      for (int i = 0; i < q; ++i) dist2 += (u[i] - v[i]) * (u[i] - v[i]);
      c.expect(partition_of_values(u) == target && dist2 < eps * eps, "refinement not realized: " + target.str());
    }
  });

  criterion(3, "q = 1 sphere, all marked: one class, dim 0, chi 1 = 1", 1.0, [](Check& c) {
    const auto top = enumerate_top_classes(2, 1, 1, Marking::all(2, 1, 1));
    c.expect(top.size() == 1, "class count " + std::to_string(top.size()));
    const ComplexK k = build_complex(top);
    c.expect(k.classes.size() == 1, "closure size");
    c.expect(complex_dimension(k) == 0, "dimension");
    const auto chi = euler_characteristic(k);
    c.expect(chi.formula == 1 && chi.independent == 1 && chi.agree, "euler characteristic");
  });

  for (int q = 2; q <= 3; ++q) {
    const std::string title = "q = " + std::to_string(q) +
                              " catalogs: closure vs direct enumeration, chi AGREE, dim 3q-2, rank q-1";
    criterion(4, title, q == 2 ? 10.0 : 600.0, [q](Check& c) {
      for (auto [p, r] : oracle::sphere_counts(q)) {
        const Marking m = Marking::all(p, q, r);
        const ComplexK k = build_complex(enumerate_top_classes(p, q, r, m), 1);
        if (q == 2) {
          std::set<std::string> closed;
          for (const auto& g : k.graphs) closed.insert(canonical_form(g));
          c.expect(closed == oracle::direct_enumeration(p, q, r, m), "closure != direct enumeration " + label(p, q, r));
        }
        const auto chi = euler_characteristic(k);
        c.expect(chi.agree, "chi " + label(p, q, r) + ": formula " + std::to_string(chi.formula) + ", independent " +
                                chi.independent.get_str());
        c.expect(complex_dimension(k) == 3 * q - 2, "dim " + label(p, q, r));
        c.expect(complex_rank(k) == q - 1, "rank " + label(p, q, r));
      }
    });
  }

  criterion(5, "twist algebra properties over the q <= 3 catalog", 0, [](Check& c) {
    for (const auto& g : catalogs_up_to(3)) {
      const std::string id = canonical_form(g);
      const HomologyModel m = homology_model(g);
      const auto ts = transvections(m);
      for (const auto& a : ts)
        for (const auto& b : ts)
          c.expect(multiply(a.matrix, b.matrix) == multiply(b.matrix, a.matrix), "transvections commute: " + id);
      c.expect(translation_rank(ts) == static_cast<std::size_t>(m.n), "lattice rank: " + id);
      for (const auto& a : ts) c.expect(multiply(m.expansion, a.matrix) == m.expansion, "constraint vector: " + id);
      for (int i = 0; i < 2 * g.q; ++i)
        for (int l = 0; l < m.n; ++l) c.expect(m.expansion[i][l] == 0, "[e_i] outside kept span: " + id);
      for (int l = 0; l < m.n; ++l)
        c.expect(m.chain(m.bottom_edges[l]) == m.chain(m.top_edges[l]), "cylinder relation: " + id);
      const auto cc = classify_circles(g);
      const auto inv = invariants(g);
      c.expect(cc.c + cc.d == cc.n, "c + d = n: " + id);
      c.expect(cc.d == cc.nu.back() - cc.e, "d = nu_e - e: " + id);
      c.expect(cc.d == inv.t - 1, "d = t - 1: " + id);
      c.expect(cc.d <= std::min(g.p + g.r, inv.t - 1), "d bound: " + id);
      if (inv.s == 1) c.expect(u_polytope(g, m, 0).dim == 0, "s = 1 polytope not a point: " + id);
    }
  });

  criterion(6, "delta coherence: identity fixpoint and transitivity over the q <= 3 catalog", 0, [](Check& c) {
    for (const auto& g : catalogs_up_to(3)) {
      const std::string id = canonical_form(g);
      const auto J = invariants(g).J;
      c.expect(canonical_form(delta(g, J)) == id, "identity refinement moved " + id);
      for (const auto& J1 : refinements(J)) {
        const MorseGraph h = delta(g, J1);
        for (const auto& J2 : refinements(J1))
          c.expect(canonical_form(delta(h, J2)) == canonical_form(delta(g, J2)),
                   "transitivity " + J.str() + " > " + J1.str() + " > " + J2.str() + " at " + id);
      }
    }
  });

  criterion(7, "stabilizer admissibility and freeness over q <= 3", 0, [](Check& c) {
    auto run = [&](const std::vector<MorseGraph>& gs, const std::string& tag) {
      for (const auto& g : gs) {
        const StabReport rep = check_stab_action(g, homology_model(g), automorphisms(g));
        c.expect(rep.all_admissible, "not admissible (" + tag + "): " + canonical_form(g));
        if (!rep.all_free)
          for (const auto& e : rep.entries)
            c.expect(e.free, "not free (" + tag + "): " + canonical_form(g) + ": " + e.freeness);
      }
    };
    run(catalogs_up_to(3), "all marked");
    // Smaller markings give nontrivial symmetry groups.
    for (int q = 1; q <= 3; ++q)
      for (auto [p, r] : oracle::sphere_counts(q))
        for (const auto& m : partial_markings(p, q, r)) {
          std::ostringstream tag;
          tag << label(p, q, r) << " marked " << m.p_hat << "," << m.q_hat << "," << m.r_hat;
          run(oracle::catalog(p, q, r, m), tag.str());
        }
  });

  criterion(8, "Morse-Smale reporting: beta_0 <= q_0, j = 0 inequality, q_j >= 0, vanishing slots", 0, [](Check& c) {
    for (int q = 1; q <= 3; ++q)
      for (auto [p, r] : oracle::sphere_counts(q)) {
        const ComplexK k = build_complex(enumerate_top_classes(p, q, r, Marking::all(p, q, r)));
        const auto Q = q_polynomial(k);
        for (long long x : Q) c.expect(x >= 0, "negative q_j " + label(p, q, r));
        const long long b0 = betti0(k);
        c.expect(!Q.empty() && b0 <= Q[0], "beta_0 > q_0 " + label(p, q, r));
        const auto rep = morse_smale_report(k, std::vector<long long>{b0});
        c.expect(!rep.rows.empty() && rep.rows[0].inequality && rep.rows[0].bounded, "j = 0 row " + label(p, q, r));
        for (const auto& row : rep.rows)
          c.expect(row.vanishing_slot == (row.j >= 3 * q - 2), "vanishing slot flag " + label(p, q, r));
        c.expect(!rep.note.empty(), "report lacks the scope note");
      }
  });

  std::cout << (failed_criteria == 0 ? "all criteria passed" : std::to_string(failed_criteria) + " criteria failed")
            << "\n";
  return failed_criteria == 0 ? 0 : 1;
}
