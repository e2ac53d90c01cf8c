#ifndef CCRCP_GRAPH_H_
#define CCRCP_GRAPH_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace ccrcp {

using Edge = std::pair<int, int>;  // i -> j: i transmits to j

// Strongly connected directed communication graph on nodes 0..n-1.
class DirectedGraph {
 public:
  // Self loops are ignored and duplicate edges merged. Throws
  // InvalidArgument for out-of-range endpoints and NotStronglyConnected.
  DirectedGraph(int n, std::vector<Edge> edges);

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& in_neighbors(int i) const { return in_[i]; }
  const std::vector<int>& out_neighbors(int i) const { return out_[i]; }
  bool HasEdge(int from, int to) const;
  // Longest shortest directed path, from all-pairs BFS at construction.
  int diameter() const { return diameter_; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> in_;
  std::vector<std::vector<int>> out_;
  int diameter_ = 0;
};

// Hop distances from `source` along edge direction; -1 when unreachable.
std::vector<int> BfsDistances(int n, const std::vector<std::vector<int>>& out,
                              int source);
bool IsStronglyConnected(int n, const std::vector<Edge>& edges);

// Bidirectional path 0 - 1 - ... - (n-1).
DirectedGraph GenChain(int n);
// Every ordered pair of distinct nodes.
DirectedGraph GenComplete(int n);
// Directed cycle 0 -> 1 -> ... -> n-1 -> 0.
DirectedGraph GenRing(int n);

// 2 sqrt(2) sqrt(log n / n) (1 + margin); the connectivity threshold for
// points uniform in the unit square, padded by `margin`.
double DefaultGeometricRadius(int n, double margin = 0.1);

struct GeometricGraph {
  DirectedGraph graph;
  Eigen::MatrixXd positions;  // 2 x n
  double radius = 0.0;
  int attempts = 0;
};

// Nodes uniform in [0,1]^2, bidirectional edges between nodes closer than
// `radius` (the default radius when radius <= 0). Resamples until the graph
// is strongly connected; throws GenerationFailed after `max_attempts`.
GeometricGraph GenGeometric(int n, double radius, std::mt19937_64& rng,
                            int max_attempts = 100);

}  // namespace ccrcp

#endif  // CCRCP_GRAPH_H_
