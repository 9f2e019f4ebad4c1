#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "mck/complex_builder.hpp"
#include "mck/graph_io.hpp"
#include "mck/permutohedron.hpp"

namespace {

using namespace mck;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  int p = 0, q = 0, r = 0;
  std::string marked = "all", fixed = "none";
  std::string in, out, dot, betti;
  int jobs = 1;
  bool poset = false;
};

std::vector<int> triple(const std::string& text, const char* what) {
  std::vector<int> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ArgumentError(std::string(what) + " must be 'all', 'none' or three integers a,b,c");
    }
  }
  if (v.size() != 3) throw ArgumentError(std::string(what) + " must list three counts");
  return v;
}

Marking marking_of(const Config& c) {
  Marking m;
  std::vector<int> mk, fx;
  if (c.marked == "all")
    mk = {c.p, c.q, c.r};
  else if (c.marked == "none")
    mk = {0, 0, 0};
  else
    mk = triple(c.marked, "--marked");
  if (c.fixed == "none")
    fx = {0, 0, 0};
  else if (c.fixed == "all")
    fx = mk;
  else
    fx = triple(c.fixed, "--fixed");
  m.p_hat = mk[0];
  m.q_hat = mk[1];
  m.r_hat = mk[2];
  m.p_fix = fx[0];
  m.q_fix = fx[1];
  m.r_fix = fx[2];
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + path);
}

EnumerateOptions enum_opts(const Config& c) {
  EnumerateOptions o;
  o.jobs = c.jobs;
  if (const char* cache = std::getenv("MCK_SEEN_CACHE")) o.cache_path = cache;
  return o;
}

std::set<std::string> forms_of(const std::vector<MorseGraph>& gs) {
  std::set<std::string> out;
  for (const auto& g : gs) out.insert(canonical_form(g));
  return out;
}

// A catalog file must hold exactly the delta-closure of its single-level classes.
ComplexK complex_from(const Config& c) {
  if (!c.in.empty()) {
    const Catalog cat = catalog_from_json(parse_json_text(read_file(c.in)));
    std::vector<MorseGraph> seeds;
    for (const auto& g : cat.classes)
      if (g.levels() == 1) seeds.push_back(g);
    if (seeds.empty()) throw ParseError("catalog holds no single-level classes");
    ComplexK k = build_complex(seeds, c.jobs);
    if (forms_of(cat.classes) != forms_of(k.graphs))
      throw ParseError("catalog is not the delta-closure of its single-level classes");
    return k;
  }
  if (c.q == 0) throw ArgumentError("give --in CATALOG or --p/--q/--r");
  return build_complex(enumerate_top_classes(c.p, c.q, c.r, marking_of(c), enum_opts(c)), c.jobs);
}

int cmd_enumerate(const Config& c) {
  const auto top = enumerate_top_classes(c.p, c.q, c.r, marking_of(c), enum_opts(c));
  const auto all = closure(top, c.jobs);
  Catalog cat;
  cat.p = c.p;
  cat.q = c.q;
  cat.r = c.r;
  cat.marks = marking_of(c);
  cat.classes = all;
  write_file(c.out.empty() ? "catalog.json" : c.out, catalog_to_json(cat).dump(1) + "\n");
  std::map<int, int> hist;
  for (const auto& g : all) ++hist[g.levels()];
  std::cout << "classes: " << all.size() << "\n";
  for (auto [s, n] : hist) std::cout << "s=" << s << ": " << n << "\n";
  return 0;
}

int cmd_complex(const Config& c) {
  const ComplexK k = complex_from(c);
  write_file(c.out.empty() ? "complex.json" : c.out, complex_to_json(k).dump(1) + "\n");
  if (!c.dot.empty()) write_file(c.dot, complex_to_dot(k));
  std::cout << "classes: " << k.classes.size() << "\n"
            << "top classes: " << k.top_count << "\n"
            << "incidences: " << k.incidence.size() << "\n"
            << "dim: " << complex_dimension(k) << "\n"
            << "rank: " << complex_rank(k) << "\n";
  return 0;
}

int cmd_euler(const Config& c) {
  const auto chi = euler_characteristic(complex_from(c));
  if (!chi.compact) {
    std::cout << "formula: " << chi.formula << ", independent: skipped, DISAGREE\n" << chi.note << "\n";
    return 0;
  }
  std::cout << "formula: " << chi.formula << ", independent: " << chi.independent.get_str() << ", "
            << (chi.agree ? "AGREE" : "DISAGREE") << "\n";
  if (!chi.note.empty()) std::cout << chi.note << "\n";
  return 0;
}

int cmd_qpoly(const Config& c) {
  const ComplexK k = complex_from(c);
  std::optional<std::vector<long long>> betti;
  if (!c.betti.empty()) {
    betti.emplace();
    std::stringstream ss(c.betti);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        betti->push_back(std::stoll(item));
      } catch (const std::exception&) {
        throw ArgumentError("--betti must be a comma-separated list of integers");
      }
    }
  } else {
    betti = std::vector<long long>{betti0(k)};
  }
  const auto rep = morse_smale_report(k, betti);
  std::cout << "Q:";
  for (long long x : q_polynomial(k)) std::cout << " " << x;
  std::cout << "\n";
  if (c.betti.empty()) std::cout << "beta0 (incidence components): " << betti0(k) << "\n";
  std::cout << "j q_j alt_q beta_j alt_beta holds\n";
  for (const auto& row : rep.rows) {
    std::cout << row.j << " " << row.q << " " << row.alt_q << " ";
    if (row.betti)
      std::cout << *row.betti << " " << *row.alt_b << " " << (row.inequality && row.bounded ? "yes" : "NO");
    else
      std::cout << "- - -";
    if (row.vanishing_slot) std::cout << " (beta_j = 0 slot)";
    std::cout << "\n";
  }
  std::cout << (rep.all_hold ? "inequalities hold" : "inequality VIOLATED") << "\n" << rep.note << "\n";
  return 0;
}

int cmd_dim(const Config& c) {
  std::cout << complex_dimension(complex_from(c)) << "\n";
  return 0;
}

int cmd_facelattice(const Config& c) {
  const auto parts = enumerate_partitions(c.q);
  long long vertices = 0;
  for (const auto& J : parts)
    if (J.size() == c.q) ++vertices;
  std::cout << "vertices: " << vertices << ", faces: " << parts.size() << "\n";
  if (!c.dot.empty()) write_file(c.dot, face_poset_dot(c.q));
  return 0;
}

int cmd_export_dot(const Config& c) {
  std::string text;
  if (c.poset) {
    text = complex_to_dot(complex_from(c));
  } else if (!c.in.empty()) {
    text = catalog_to_dot(catalog_from_json(parse_json_text(read_file(c.in))));
  } else {
    const ComplexK k = complex_from(c);
    text = catalog_to_dot(to_catalog(k));
  }
  if (c.out.empty())
    std::cout << text;
  else
    write_file(c.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combinatorial census of Morse functions on the sphere"};
  app.require_subcommand(1);
  Config cfg;
  auto params = [&](CLI::App* sub, bool required) {
    auto* p = sub->add_option("--p", cfg.p, "number of minima");
    auto* q = sub->add_option("--q", cfg.q, "number of saddles");
    auto* r = sub->add_option("--r", cfg.r, "number of maxima");
    if (required) {
      p->required();
      q->required();
      r->required();
    }
    sub->add_option("--marked", cfg.marked, "all | none | p,q,r marked counts")->capture_default_str();
    sub->add_option("--fixed", cfg.fixed, "none | all | p,q,r fixed counts")->capture_default_str();
    sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1, 256));
  };
  auto* enumerate = app.add_subcommand("enumerate", "enumerate classes and write a catalog");
  params(enumerate, true);
  enumerate->add_option("--out", cfg.out, "catalog path (default catalog.json)");
  auto* complex = app.add_subcommand("complex", "assemble the complex and write its JSON");
  params(complex, false);
  complex->add_option("--in", cfg.in, "catalog file");
  complex->add_option("--out", cfg.out, "complex JSON path (default complex.json)");
  complex->add_option("--dot", cfg.dot, "class poset DOT path");
  auto* euler = app.add_subcommand("euler", "Euler characteristic: formula vs independent sum");
  params(euler, false);
  euler->add_option("--in", cfg.in, "catalog file");
  auto* qpoly = app.add_subcommand("qpoly", "Q(t) and Morse-Smale table");
  params(qpoly, false);
  qpoly->add_option("--in", cfg.in, "catalog file");
  qpoly->add_option("--betti", cfg.betti, "comma-separated Betti numbers");
  auto* dim = app.add_subcommand("dim", "dimension of the complex");
  params(dim, false);
  dim->add_option("--in", cfg.in, "catalog file");
  auto* face = app.add_subcommand("facelattice", "permutohedron vertex and face counts");
  face->add_option("--q", cfg.q, "order")->required();
  face->add_option("--dot", cfg.dot, "face poset DOT path");
  auto* dot = app.add_subcommand("export-dot", "DOT export of a catalog or the class poset");
  params(dot, false);
  dot->add_option("--in", cfg.in, "catalog file");
  dot->add_option("--out", cfg.out, "output path (default stdout)");
  dot->add_flag("--poset", cfg.poset, "export the class poset instead of the graphs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (*enumerate) return cmd_enumerate(cfg);
    if (*complex) return cmd_complex(cfg);
    if (*euler) return cmd_euler(cfg);
    if (*qpoly) return cmd_qpoly(cfg);
    if (*dim) return cmd_dim(cfg);
    if (*face) return cmd_facelattice(cfg);
    if (*dot) return cmd_export_dot(cfg);
  } catch (const ArgumentError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const BoundsError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedScope& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 3;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n"
              << "config: p=" << cfg.p << " q=" << cfg.q << " r=" << cfg.r << " marked=" << cfg.marked
              << " fixed=" << cfg.fixed << " in=" << cfg.in << "\n";
    return 4;
  }
  return 0;
}
