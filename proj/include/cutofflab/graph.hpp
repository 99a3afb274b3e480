#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cutofflab {

/// Simple undirected graph on vertices 0..n-1.
class Graph {
 public:
  Graph() = default;
  /// Throws InvalidInput on loops, duplicate edges or out-of-range endpoints.
  Graph(int vertices, std::vector<std::pair<int, int>> edges);

  int vertices() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }
  int max_degree() const;
  bool adjacent(int i, int j) const;

  static Graph cycle(int n);
  static Graph path(int n);
  static Graph complete(int n);
  static Graph star(int leaves);
  static Graph empty(int n);
  static Graph grid(int rows, int cols);
  static Graph petersen();

  /// Named family lookup: cycle, path, complete, star (n = vertex count), empty, petersen.
  static Graph family(const std::string& name, int n);

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

}  // namespace cutofflab
