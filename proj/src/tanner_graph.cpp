#include "nbp/tanner_graph.hpp"

#include <stdexcept>

namespace nbp {

TannerGraph build_tanner(const BinaryMatrix& h) {
  TannerGraph g;
  g.n_vars = h.cols();
  g.n_checks = h.rows();

  g.check_offset.assign(g.n_checks + 1, 0);
  for (int c = 0; c < g.n_checks; ++c) {
    for (int v = 0; v < g.n_vars; ++v) {
      if (h.at(c, v)) {
        g.edge_check.push_back(c);
        g.edge_var.push_back(v);
      }
    }
    g.check_offset[c + 1] = static_cast<std::int32_t>(g.edge_var.size());
  }
  g.n_edges = static_cast<int>(g.edge_var.size());
  if (g.n_edges == 0) throw std::invalid_argument("build_tanner: matrix has no nonzero entries");

  g.var_offset.assign(g.n_vars + 1, 0);
  for (int e = 0; e < g.n_edges; ++e) ++g.var_offset[g.edge_var[e] + 1];
  for (int v = 0; v < g.n_vars; ++v) g.var_offset[v + 1] += g.var_offset[v];
  g.var_edges.assign(g.n_edges, 0);
  std::vector<std::int32_t> cursor(g.var_offset.begin(), g.var_offset.end() - 1);
  for (int e = 0; e < g.n_edges; ++e) g.var_edges[cursor[g.edge_var[e]]++] = e;
  return g;
}

}  // namespace nbp
