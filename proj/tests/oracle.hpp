#pragma once

// Reference implementations used to derive expected values in tests. They
// work on plain names and an ascending list of a chain's terms, and share no
// code with the library.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using Grid = std::vector<std::vector<std::string>>;

struct Chain {
  std::vector<std::string> ascending;

  std::size_t rank(const std::string& name) const {
    auto it = std::find(ascending.begin(), ascending.end(), name);
    if (it == ascending.end()) throw std::invalid_argument("oracle: unknown term " + name);
    return static_cast<std::size_t>(it - ascending.begin());
  }
  const std::string& lo(const std::string& a, const std::string& b) const {
    return rank(a) <= rank(b) ? a : b;
  }
  const std::string& hi(const std::string& a, const std::string& b) const {
    return rank(a) >= rank(b) ? a : b;
  }
};

// C(i,j) = outer over t of inner(A(i,t), B(t,j)), written as three loops.
inline Grid compose(const Chain& c, const Grid& a, const Grid& b, bool outer_max,
                    bool inner_max) {
  const std::size_t n = a.size(), m = b.front().size(), k = b.size();
  Grid out(n, std::vector<std::string>(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      std::string acc;
      for (std::size_t t = 0; t < k; ++t) {
        const std::string v = inner_max ? c.hi(a[i][t], b[t][j]) : c.lo(a[i][t], b[t][j]);
        if (t == 0)
          acc = v;
        else
          acc = outer_max ? c.hi(acc, v) : c.lo(acc, v);
      }
      out[i][j] = acc;
    }
  }
  return out;
}

inline Grid transpose(const Grid& a) {
  Grid out(a.front().size(), std::vector<std::string>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
  return out;
}

// Cognitive-map iteration: compose, then restore every coordinate that was
// nonzero initially. Returns all states up to and including the first repeat.
inline std::vector<std::vector<std::string>> run_map(const Chain& c, const Grid& m,
                                                     const std::vector<std::string>& x0,
                                                     bool outer_max, bool inner_max,
                                                     std::size_t cap = 1000) {
  std::vector<std::vector<std::string>> states{x0};
  for (std::size_t step = 0; step < cap; ++step) {
    std::vector<std::string> next = compose(c, Grid{states.back()}, m, outer_max, inner_max)[0];
    for (std::size_t j = 0; j < x0.size(); ++j)
      if (x0[j] != "0") next[j] = x0[j];
    const bool seen = std::find(states.begin(), states.end(), next) != states.end();
    states.push_back(next);
    if (seen) return states;
  }
  throw std::runtime_error("oracle: no repetition");
}

}  // namespace oracle
