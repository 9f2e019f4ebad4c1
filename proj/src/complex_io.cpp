#include <set>
#include <sstream>

#include "mck/complex_builder.hpp"

namespace mck {

nlohmann::json complex_to_json(const ComplexK& k) {
  using nlohmann::json;
  json j;
  j["params"] = {{"p", k.p},
                 {"q", k.q},
                 {"r", k.r},
                 {"marked", {k.marks.p_hat, k.marks.q_hat, k.marks.r_hat}},
                 {"fixed", {k.marks.p_fix, k.marks.q_fix, k.marks.r_fix}}};
  json classes = json::array();
  for (const auto& h : k.classes)
    classes.push_back({{"id", h.id},
                       {"J", h.J.str()},
                       {"s", h.s},
                       {"t", h.t},
                       {"n", h.n},
                       {"index", h.index},
                       {"c", h.c},
                       {"d", h.d},
                       {"dim_U", h.dim_u},
                       {"handle_dim", h.handle_dim},
                       {"gamma_order", h.gamma_order},
                       {"admissible", h.admissible},
                       {"free", h.free},
                       {"poincare", h.poincare}});
  j["classes"] = classes;
  json inc = json::array();
  for (const auto& i : k.incidence) inc.push_back(json::array({i.source, i.face.str(), i.target}));
  j["incidence"] = inc;
  const auto chi = euler_characteristic(k);
  j["chi"] = {{"formula", chi.formula},
              {"independent", chi.compact ? json(chi.independent.get_str()) : json()},
              {"agree", chi.agree},
              {"compact", chi.compact}};
  j["Q"] = q_polynomial(k);
  j["dim"] = complex_dimension(k);
  j["rank"] = complex_rank(k);
  j["beta0"] = betti0(k);
  return j;
}

std::string complex_to_dot(const ComplexK& k) {
  std::ostringstream os;
  os << "digraph complex {\n  rankdir=TB;\n";
  for (std::size_t i = 0; i < k.classes.size(); ++i) {
    const auto& h = k.classes[i];
    os << "  c" << i << " [label=\"" << i << ": J=" << h.J.str() << "\\nindex " << h.index << ", dim " << h.handle_dim
       << "\"];\n";
  }
  std::set<std::pair<int, int>> drawn;
  for (const auto& inc : k.incidence)
    if (drawn.insert({inc.source, inc.target}).second) os << "  c" << inc.source << " -> c" << inc.target << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace mck
