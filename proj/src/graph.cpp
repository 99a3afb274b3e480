#include "cutofflab/graph.hpp"

#include <algorithm>
#include <set>

#include "cutofflab/error.hpp"

namespace cutofflab {

Graph::Graph(int vertices, std::vector<std::pair<int, int>> edges) : n_(vertices), adj_(static_cast<std::size_t>(vertices)) {
  if (vertices <= 0) throw Error(ErrorCode::InvalidInput, "graph needs at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n_ || b >= n_) throw Error(ErrorCode::InvalidInput, "edge endpoint out of range");
    if (a == b) throw Error(ErrorCode::InvalidInput, "graph must be simple: loop at " + std::to_string(a));
    auto key = std::minmax(a, b);
    if (!seen.insert(key).second) {
      throw Error(ErrorCode::InvalidInput,
                  "graph must be simple: duplicate edge " + std::to_string(key.first) + "-" + std::to_string(key.second));
    }
    edges_.emplace_back(key.first, key.second);
    adj_[static_cast<std::size_t>(a)].push_back(b);
    adj_[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& list : adj_) std::sort(list.begin(), list.end());
}

int Graph::max_degree() const {
  std::size_t best = 0;
  for (const auto& list : adj_) best = std::max(best, list.size());
  return static_cast<int>(best);
}

bool Graph::adjacent(int i, int j) const {
  const auto& list = adj_[static_cast<std::size_t>(i)];
  return std::binary_search(list.begin(), list.end(), j);
}

Graph Graph::cycle(int n) {
  if (n < 3) throw Error(ErrorCode::InvalidInput, "cycle needs at least 3 vertices");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}

Graph Graph::path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

Graph Graph::complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

Graph Graph::star(int leaves) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph(leaves + 1, e);
}

Graph Graph::empty(int n) { return Graph(n, {}); }

Graph Graph::grid(int rows, int cols) {
  std::vector<std::pair<int, int>> e;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int v = r * cols + c;
      if (c + 1 < cols) e.emplace_back(v, v + 1);
      if (r + 1 < rows) e.emplace_back(v, v + cols);
    }
  }
  return Graph(rows * cols, e);
}

Graph Graph::petersen() {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return Graph(10, e);
}

Graph Graph::family(const std::string& name, int n) {
  if (name == "cycle") return cycle(n);
  if (name == "path") return path(n);
  if (name == "complete") return complete(n);
  if (name == "star") return star(n - 1);
  if (name == "empty") return empty(n);
  if (name == "petersen") return petersen();
  throw Error(ErrorCode::InvalidInput, "unknown graph family '" + name + "'");
}

}  // namespace cutofflab
