#pragma once

#include <string>

#include "nbp/binary_matrix.hpp"

namespace nbp {

// Sparse parity-check matrix exchange format.
// Layout: "N M", max column and row degree, N column degrees, M row degrees,
// then per-column 1-based row indices and per-row column indices, both
// optionally zero-padded to the maximum degree.
//
// The matrix is built from the column section; the row section must agree.
// Parse errors carry the 1-based line number of the offending token.
BinaryMatrix parse_alist(const std::string& text);

// Canonical padded form; parse_alist(emit_alist(h)) == h.
std::string emit_alist(const BinaryMatrix& h);

BinaryMatrix load_alist_file(const std::string& path);
void save_alist_file(const BinaryMatrix& h, const std::string& path);

}  // namespace nbp
