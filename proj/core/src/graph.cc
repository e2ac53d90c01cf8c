#include "ccrcp/graph.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "ccrcp/errors.h"

namespace ccrcp {

std::vector<int> BfsDistances(int n, const std::vector<std::vector<int>>& out,
                              int source) {
  std::vector<int> dist(n, -1);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : out[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

namespace {

std::vector<std::vector<int>> Adjacency(int n, const std::vector<Edge>& edges,
                                        bool reverse) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [from, to] : edges) {
    if (reverse) {
      adj[to].push_back(from);
    } else {
      adj[from].push_back(to);
    }
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

}  // namespace

bool IsStronglyConnected(int n, const std::vector<Edge>& edges) {
  if (n <= 1) return n == 1;
  auto reaches_all = [n](const std::vector<std::vector<int>>& adj) {
    const std::vector<int> d = BfsDistances(n, adj, 0);
    return std::none_of(d.begin(), d.end(), [](int v) { return v < 0; });
  };
  return reaches_all(Adjacency(n, edges, false)) &&
         reaches_all(Adjacency(n, edges, true));
}

DirectedGraph::DirectedGraph(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 1) throw InvalidArgument("graph needs at least one node");
  for (const auto& [from, to] : edges) {
    if (from < 0 || from >= n || to < 0 || to >= n) {
      throw InvalidArgument("edge endpoint outside 0.." +
                            std::to_string(n - 1));
    }
  }
  edges.erase(std::remove_if(edges.begin(), edges.end(),
                             [](const Edge& e) { return e.first == e.second; }),
              edges.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
  out_ = Adjacency(n, edges_, false);
  in_ = Adjacency(n, edges_, true);

  for (int s = 0; s < n; ++s) {
    const std::vector<int> d = BfsDistances(n, out_, s);
    for (int v : d) {
      if (v < 0) throw NotStronglyConnected("graph is not strongly connected");
      diameter_ = std::max(diameter_, v);
    }
  }
}

bool DirectedGraph::HasEdge(int from, int to) const {
  const auto& list = out_[from];
  return std::binary_search(list.begin(), list.end(), to);
}

DirectedGraph GenChain(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) {
    edges.emplace_back(i, i + 1);
    edges.emplace_back(i + 1, i);
  }
  return DirectedGraph(n, std::move(edges));
}

DirectedGraph GenComplete(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) edges.emplace_back(i, j);
    }
  }
  return DirectedGraph(n, std::move(edges));
}

DirectedGraph GenRing(int n) {
  std::vector<Edge> edges;
  if (n > 1) {
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  }
  return DirectedGraph(n, std::move(edges));
}

double DefaultGeometricRadius(int n, double margin) {
  if (n <= 1) return std::sqrt(2.0);
  const double dn = static_cast<double>(n);
  return 2.0 * std::sqrt(2.0) * std::sqrt(std::log(dn) / dn) * (1.0 + margin);
}

GeometricGraph GenGeometric(int n, double radius, std::mt19937_64& rng,
                            int max_attempts) {
  if (n < 1) throw InvalidArgument("graph needs at least one node");
  if (radius <= 0.0) radius = DefaultGeometricRadius(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd pos(2, n);
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    for (int i = 0; i < n; ++i) {
      pos(0, i) = unit(rng);
      pos(1, i) = unit(rng);
    }
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if ((pos.col(i) - pos.col(j)).norm() <= radius) {
          edges.emplace_back(i, j);
          edges.emplace_back(j, i);
        }
      }
    }
    if (IsStronglyConnected(n, edges)) {
      return GeometricGraph{DirectedGraph(n, std::move(edges)), pos, radius,
                            attempt};
    }
  }
  throw GenerationFailed("no strongly connected geometric graph after " +
                         std::to_string(max_attempts) + " attempts");
}

}  // namespace ccrcp
