#pragma once

#include <string>
#include <vector>

#include "nbp/linear_code.hpp"

namespace nbp {

// Built-in codes, constructed on demand:
//   hamming74, rep3, spc4, bch_7_4, bch_15_11, bch_63_36, bch_63_45,
//   bch_127_64, bch_127_99
// The BCH parity-check matrices are in cyclic form (rows are shifts of the
// reversed check polynomial); hamming74 uses the binary-counting column order.
std::vector<std::string> builtin_code_names();
bool is_builtin_code(const std::string& name);
LinearCode make_builtin_code(const std::string& name);

// Accepts a built-in name, a .alist path, or a manifest path. A manifest is
// a key-value text file with at least "code_id" and "alist" (path relative to
// the manifest); optional n, k and h_hash entries are checked when present.
LinearCode load_code(const std::string& name_or_path);

// Writes <id>.alist and <id>.manifest under dir; returns the manifest path.
std::string write_code_bundle(const LinearCode& code, const std::string& dir);

}  // namespace nbp
