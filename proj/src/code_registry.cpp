#include "nbp/code_registry.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "nbp/alist.hpp"
#include "nbp/bch.hpp"

namespace nbp {

namespace {

namespace fs = std::filesystem;

struct BchSpec {
  int m;
  int t;
};

const std::map<std::string, BchSpec>& bch_table() {
  static const std::map<std::string, BchSpec> table = {
      {"bch_7_4", {3, 1}},    {"bch_15_11", {4, 1}},  {"bch_63_36", {6, 5}},
      {"bch_63_45", {6, 3}},  {"bch_127_64", {7, 10}}, {"bch_127_99", {7, 4}},
  };
  return table;
}

int expected_k(const std::string& name) {
  const auto us = name.rfind('_');
  return std::stoi(name.substr(us + 1));
}

std::map<std::string, std::string> parse_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key) || key[0] == '#') continue;
    std::string value;
    std::getline(ss, value);
    const auto start = value.find_first_not_of(" \t");
    if (start == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": key '" + key + "' has no value");
    value = value.substr(start, value.find_last_not_of(" \t\r") - start + 1);
    kv[key] = value;
  }
  return kv;
}

}  // namespace

std::vector<std::string> builtin_code_names() {
  std::vector<std::string> names = {"hamming74", "rep3", "spc4"};
  for (const auto& [name, spec] : bch_table()) names.push_back(name);
  return names;
}

bool is_builtin_code(const std::string& name) {
  if (name == "hamming74" || name == "rep3" || name == "spc4") return true;
  return bch_table().count(name) > 0;
}

LinearCode make_builtin_code(const std::string& name) {
  if (name == "hamming74") {
    return LinearCode(name, BinaryMatrix::from_rows({{1, 0, 1, 0, 1, 0, 1},
                                                     {0, 1, 1, 0, 0, 1, 1},
                                                     {0, 0, 0, 1, 1, 1, 1}}));
  }
  if (name == "rep3") {
    // Full circulant instead of a 2-row chain: every variable then sees both
    // others through one check and single-iteration marginals are exact.
    return LinearCode(name, BinaryMatrix::from_rows({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}));
  }
  if (name == "spc4") {
    return LinearCode(name, BinaryMatrix::from_rows({{1, 1, 1, 1}}));
  }
  const auto it = bch_table().find(name);
  if (it == bch_table().end()) throw std::invalid_argument("unknown code: " + name);
  const BchCode bch = make_bch(it->second.m, it->second.t);
  if (bch.k != expected_k(name))
    throw std::logic_error("code " + name + ": construction yields k=" + std::to_string(bch.k));
  return LinearCode(name, bch.h);
}

LinearCode load_code(const std::string& name_or_path) {
  if (is_builtin_code(name_or_path)) return make_builtin_code(name_or_path);
  const fs::path p(name_or_path);
  if (!fs::exists(p)) throw std::runtime_error("not a built-in code and no such file: " + name_or_path);
  if (p.extension() == ".alist") return LinearCode(p.stem().string(), load_alist_file(p.string()));

  const auto kv = parse_manifest(p.string());
  const auto need = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error(p.string() + ": manifest is missing '" + key + "'");
    return it->second;
  };
  fs::path alist_path(need("alist"));
  if (alist_path.is_relative()) alist_path = p.parent_path() / alist_path;
  LinearCode code(need("code_id"), load_alist_file(alist_path.string()));
  if (auto it = kv.find("n"); it != kv.end() && std::stoi(it->second) != code.n())
    throw std::runtime_error(p.string() + ": n disagrees with the alist");
  if (auto it = kv.find("k"); it != kv.end() && std::stoi(it->second) != code.k())
    throw std::runtime_error(p.string() + ": k disagrees with the alist");
  if (auto it = kv.find("h_hash"); it != kv.end()) {
    const std::uint64_t want = std::stoull(it->second, nullptr, 16);
    if (want != code.h_hash()) throw std::runtime_error(p.string() + ": h_hash disagrees with the alist");
  }
  return code;
}

std::string write_code_bundle(const LinearCode& code, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path alist_path = fs::path(dir) / (code.id() + ".alist");
  save_alist_file(code.h(), alist_path.string());

  const fs::path manifest_path = fs::path(dir) / (code.id() + ".manifest");
  std::ofstream out(manifest_path);
  if (!out) throw std::runtime_error("cannot open for writing: " + manifest_path.string());
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(code.h_hash()));
  out << "code_id " << code.id() << "\n"
      << "n " << code.n() << "\n"
      << "k " << code.k() << "\n"
      << "alist " << code.id() << ".alist\n"
      << "h_hash " << hash << "\n";
  if (!out) throw std::runtime_error("write failed: " + manifest_path.string());
  return manifest_path.string();
}

}  // namespace nbp
