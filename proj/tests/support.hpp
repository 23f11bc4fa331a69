#pragma once

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "flm/modelfile.hpp"
#include "oracle.hpp"

namespace support {

inline std::string models_dir() { return FLM_MODELS_DIR; }
inline std::string golden_dir() { return FLM_GOLDEN_DIR; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline flm::ModelBundle load_model(const std::string& file) {
  flm::ParseResult r = flm::parse_model_file(read_file(models_dir() + "/" + file));
  if (!r.ok()) {
    std::string msg = file + " failed to parse:";
    for (const auto& d : r.diagnostics) msg += "\n  " + flm::format_diagnostic(d);
    throw std::runtime_error(msg);
  }
  return std::move(*r.bundle);
}

inline std::vector<std::string> names(const flm::LingMatrix& m) { return m.names(); }

inline oracle::Grid grid(const flm::LingMatrix& m) {
  oracle::Grid g(m.rows(), std::vector<std::string>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) g[i][j] = m.name_at(i, j);
  return g;
}

// Ascending term names of a chain or signed chain.
inline oracle::Chain chain_of(const flm::LinguisticSpace& s) {
  std::vector<flm::Term> ts = s.terms();
  std::sort(ts.begin(), ts.end(), [&](flm::Term a, flm::Term b) {
    return s.compare(a, b) == flm::Ordering::Less;
  });
  oracle::Chain c;
  for (auto t : ts) c.ascending.push_back(s.name_of(t));
  return c;
}

// Chain "0 < t1 < ... < t{n-1}".
inline flm::SpacePtr numbered_chain(const std::string& name, std::size_t n) {
  std::vector<std::string> ts{"0"};
  for (std::size_t i = 1; i < n; ++i) ts.push_back("t" + std::to_string(i));
  return flm::LinguisticSpace::chain(name, ts);
}

inline flm::LingMatrix random_matrix(std::mt19937& rng, const flm::SpacePtr& s,
                                     std::size_t rows, std::size_t cols) {
  std::uniform_int_distribution<std::size_t> pick(0, s->size() - 1);
  flm::LingMatrix m(s, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, s->at(pick(rng)));
  return m;
}

}  // namespace support
