#include "nbp/alist.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nbp {

namespace {

class Tokenizer {
 public:
  explicit Tokenizer(const std::string& text) : text_(text) {}

  // Returns false at end of input; on success fills value and its line.
  bool next(long& value, int& line) {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= text_.size()) return false;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string tok = text_.substr(start, pos_ - start);
    line = line_;
    std::size_t used = 0;
    try {
      value = std::stol(tok, &used);
    } catch (const std::exception&) {
      fail(line, "expected an integer, got '" + tok + "'");
    }
    if (used != tok.size()) fail(line, "expected an integer, got '" + tok + "'");
    return true;
  }

  long require(const char* what) {
    long v = 0;
    int line = 0;
    if (!next(v, line)) fail(line_, std::string("unexpected end of input while reading ") + what);
    last_line_ = line;
    return v;
  }

  // Peeks whether the next token is the literal 0 (padding); consumes it if so.
  bool consume_zero() {
    const std::size_t save_pos = pos_;
    const int save_line = line_;
    long v = 0;
    int line = 0;
    if (next(v, line) && v == 0) return true;
    pos_ = save_pos;
    line_ = save_line;
    return false;
  }

  bool at_end() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
    return pos_ >= text_.size();
  }

  int last_line() const { return last_line_; }

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw std::runtime_error("alist parse error at line " + std::to_string(line) + ": " + msg);
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int last_line_ = 1;
};

}  // namespace

BinaryMatrix parse_alist(const std::string& text) {
  Tokenizer tok(text);
  const long n = tok.require("the variable count");
  const long m = tok.require("the check count");
  if (n <= 0 || m <= 0) tok.fail(tok.last_line(), "matrix dimensions must be positive");
  const long cmax = tok.require("the maximum column degree");
  const long rmax = tok.require("the maximum row degree");
  if (cmax < 0 || rmax < 0) tok.fail(tok.last_line(), "maximum degrees must be nonnegative");

  std::vector<long> col_deg(n), row_deg(m);
  for (long i = 0; i < n; ++i) {
    col_deg[i] = tok.require("a column degree");
    if (col_deg[i] < 0 || col_deg[i] > cmax)
      tok.fail(tok.last_line(), "column degree out of range");
  }
  for (long i = 0; i < m; ++i) {
    row_deg[i] = tok.require("a row degree");
    if (row_deg[i] < 0 || row_deg[i] > rmax)
      tok.fail(tok.last_line(), "row degree out of range");
  }

  BinaryMatrix h(static_cast<int>(m), static_cast<int>(n));

  // Column section defines the matrix. Entries are 1-based row indices;
  // zero padding up to cmax is accepted but not required.
  for (long c = 0; c < n; ++c) {
    for (long j = 0; j < col_deg[c]; ++j) {
      const long r = tok.require("a column entry");
      if (r < 1 || r > m) tok.fail(tok.last_line(), "row index out of range in column section");
      if (h.at(static_cast<int>(r - 1), static_cast<int>(c)))
        tok.fail(tok.last_line(), "duplicate entry in column " + std::to_string(c + 1));
      h.set(static_cast<int>(r - 1), static_cast<int>(c), 1);
    }
    for (long j = col_deg[c]; j < cmax && tok.consume_zero(); ++j) {
    }
  }

  // Row section must describe the same matrix.
  for (long r = 0; r < m; ++r) {
    std::vector<std::uint8_t> seen(n, 0);
    for (long j = 0; j < row_deg[r]; ++j) {
      const long c = tok.require("a row entry");
      if (c < 1 || c > n) tok.fail(tok.last_line(), "column index out of range in row section");
      if (!h.at(static_cast<int>(r), static_cast<int>(c - 1)))
        tok.fail(tok.last_line(), "row section lists an entry absent from the column section");
      if (seen[c - 1]) tok.fail(tok.last_line(), "duplicate entry in row " + std::to_string(r + 1));
      seen[c - 1] = 1;
    }
    if (static_cast<long>(h.row_weight(static_cast<int>(r))) != row_deg[r])
      tok.fail(tok.last_line(), "row degree disagrees with the column section");
    for (long j = row_deg[r]; j < rmax && tok.consume_zero(); ++j) {
    }
  }

  long v = 0;
  int line = 0;
  if (tok.next(v, line)) tok.fail(line, "trailing data after the row section");

  for (long c = 0; c < n; ++c) {
    if (static_cast<long>(h.col_weight(static_cast<int>(c))) != col_deg[c])
      throw std::runtime_error("alist parse error: column degree list disagrees with entries");
  }
  return h;
}

std::string emit_alist(const BinaryMatrix& h) {
  const int m = h.rows(), n = h.cols();
  int cmax = 0, rmax = 0;
  for (int c = 0; c < n; ++c) cmax = std::max(cmax, h.col_weight(c));
  for (int r = 0; r < m; ++r) rmax = std::max(rmax, h.row_weight(r));

  std::ostringstream out;
  out << n << ' ' << m << '\n' << cmax << ' ' << rmax << '\n';
  for (int c = 0; c < n; ++c) out << h.col_weight(c) << (c + 1 < n ? ' ' : '\n');
  for (int r = 0; r < m; ++r) out << h.row_weight(r) << (r + 1 < m ? ' ' : '\n');
  for (int c = 0; c < n; ++c) {
    int written = 0;
    for (int r = 0; r < m; ++r) {
      if (h.at(r, c)) out << (written++ ? " " : "") << (r + 1);
    }
    for (; written < cmax; ++written) out << (written ? " 0" : "0");
    out << '\n';
  }
  for (int r = 0; r < m; ++r) {
    int written = 0;
    for (int c = 0; c < n; ++c) {
      if (h.at(r, c)) out << (written++ ? " " : "") << (c + 1);
    }
    for (; written < rmax; ++written) out << (written ? " 0" : "0");
    out << '\n';
  }
  return out.str();
}

BinaryMatrix load_alist_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open alist file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_alist(ss.str());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_alist_file(const BinaryMatrix& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << emit_alist(h);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace nbp
