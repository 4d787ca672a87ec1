#include "doctest.h"

#include <stdexcept>
#include "nbp/code_registry.hpp"
#include "nbp/channel.hpp"

#include <filesystem>
#include <fstream>
#include <set>

using namespace nbp;

TEST_CASE("dimension accounts for redundant parity rows") {
  // Three rows, rank 2: the repetition code with a full circulant check set.
  const LinearCode rep3 = make_builtin_code("rep3");
  CHECK(rep3.n() == 3);
  CHECK(rep3.k() == 1);
  CHECK(rep3.num_checks() == 3);
  const auto ones = rep3.encode(std::vector<std::uint8_t>{1});
  CHECK(ones == std::vector<std::uint8_t>{1, 1, 1});

  const LinearCode dup("dup", BinaryMatrix::from_rows({{1, 1, 0}, {0, 1, 1}, {1, 1, 0}}));
  CHECK(dup.k() == 1);
}

TEST_CASE("every generator combination is a codeword and encodings are distinct") {
  for (const char* name : {"hamming74", "bch_15_11", "spc4"}) {
    const LinearCode code = make_builtin_code(name);
    std::set<std::vector<std::uint8_t>> seen;
    const int count = 1 << code.k();
    for (int w = 0; w < count; ++w) {
      std::vector<std::uint8_t> info(code.k());
      for (int j = 0; j < code.k(); ++j) info[j] = (w >> j) & 1;
      const auto cw = code.encode(info);
      CHECK(code.is_codeword(cw));
      seen.insert(cw);
    }
    CHECK(static_cast<int>(seen.size()) == count);
  }
}

TEST_CASE("syndrome flags non-codewords") {
  const LinearCode code = make_builtin_code("hamming74");
  std::vector<std::uint8_t> w{1, 0, 0, 0, 0, 0, 0};
  CHECK_FALSE(code.is_codeword(w));
  const auto s = code.syndrome(w);
  CHECK(s == std::vector<std::uint8_t>{1, 0, 0});
}

TEST_CASE("built-in registry") {
  CHECK(is_builtin_code("bch_63_45"));
  CHECK_FALSE(is_builtin_code("bch_63_44"));
  const LinearCode c45 = make_builtin_code("bch_63_45");
  CHECK(c45.n() == 63);
  CHECK(c45.k() == 45);
  CHECK(c45.num_checks() == 18);
  const LinearCode c36 = make_builtin_code("bch_63_36");
  CHECK(c36.k() == 36);
  CHECK_THROWS_AS((void)make_builtin_code("nope"), std::invalid_argument);
}

TEST_CASE("code bundles round trip through disk") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "nbp_bundle_test";
  fs::remove_all(dir);
  const LinearCode code = make_builtin_code("bch_15_11");
  const std::string manifest = write_code_bundle(code, dir.string());

  const LinearCode loaded = load_code(manifest);
  CHECK(loaded.id() == code.id());
  CHECK(loaded.h() == code.h());
  CHECK(loaded.h_hash() == code.h_hash());

  // Loading the alist directly also works; the id comes from the file name.
  const LinearCode from_alist = load_code((dir / "bch_15_11.alist").string());
  CHECK(from_alist.h() == code.h());

  // A manifest whose stated k disagrees with the alist must be rejected.
  std::ofstream bad(dir / "bad.manifest");
  bad << "code_id bch_15_11\nn 15\nk 10\nalist bch_15_11.alist\n";
  bad.close();
  CHECK_THROWS_WITH_AS((void)load_code((dir / "bad.manifest").string()),
                       doctest::Contains("k disagrees"), std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("tanner graph edge ordering is check-major ascending") {
  const LinearCode code = make_builtin_code("hamming74");
  const TannerGraph& g = code.graph();
  CHECK(g.n_vars == 7);
  CHECK(g.n_checks == 3);
  CHECK(g.n_edges == 12);
  for (int e = 1; e < g.n_edges; ++e) {
    const bool ascending = g.edge_check[e - 1] < g.edge_check[e] ||
                           (g.edge_check[e - 1] == g.edge_check[e] && g.edge_var[e - 1] < g.edge_var[e]);
    CHECK(ascending);
  }
  CHECK(g.check_degree(0) == 4);
  CHECK(g.var_degree(2) == 2);   // column 3 sits in checks 1 and 2
  CHECK(g.var_degree(6) == 3);
}
