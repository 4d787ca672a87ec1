#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nbp/binary_matrix.hpp"

namespace nbp {

// Bipartite adjacency of a parity-check matrix. Edges are numbered in
// ascending (check, variable) order, so the edges of one check are contiguous.
struct TannerGraph {
  int n_vars = 0;
  int n_checks = 0;
  int n_edges = 0;

  std::vector<std::int32_t> edge_var;    // edge id -> variable
  std::vector<std::int32_t> edge_check;  // edge id -> check

  std::vector<std::int32_t> check_offset;  // size n_checks + 1, ranges of edge ids
  std::vector<std::int32_t> var_offset;    // size n_vars + 1, into var_edges
  std::vector<std::int32_t> var_edges;     // edge ids grouped per variable, ascending

  int check_degree(int c) const { return check_offset[c + 1] - check_offset[c]; }
  int var_degree(int v) const { return var_offset[v + 1] - var_offset[v]; }

  std::span<const std::int32_t> edges_of_var(int v) const {
    return {var_edges.data() + var_offset[v], static_cast<std::size_t>(var_degree(v))};
  }
};

TannerGraph build_tanner(const BinaryMatrix& h);

}  // namespace nbp
