#pragma once

#include "apnet/common.hpp"

#include <cstddef>
#include <random>
#include <utility>
#include <vector>

namespace apnet {

struct Edge {
  int u;
  int v;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected, unweighted communication graph over agents 0..n-1.
///
/// Construction validates the edge list (no self-loops, endpoints in range,
/// no duplicates in either orientation) and caches adjacency lists. Values are
/// immutable afterwards.
class Graph {
 public:
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(std::size_t i) const { return neighbors_[i]; }
  int degree(std::size_t i) const { return static_cast<int>(neighbors_[i].size()); }

  Matrix adjacency() const;
  Matrix degree_matrix() const;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> neighbors_;
};

Graph build_graph(std::size_t n, std::vector<Edge> edges);

/// L = D - A.
Matrix laplacian(const Graph& g);

/// Breadth-first reachability from node 0.
bool is_connected(const Graph& g);

struct SpectralData {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // column k pairs with eigenvalues[k]
};

/// Symmetric eigendecomposition. Throws std::invalid_argument if `m` is not
/// symmetric within 1e-10.
SpectralData spectrum(const Matrix& m);

/// Moore-Penrose pseudoinverse of a connected graph's Laplacian, built from the
/// eigendecomposition with eigenvalues below 1e-9 * lambda_max truncated.
Matrix laplacian_pseudoinverse(const Matrix& L, const Graph& g);

/// lambda_min(L + diag(k)).
double f_matrix_min_eig(const Matrix& L, const Vector& k);

// Common topologies.
Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph complete_graph(std::size_t n);
Graph grid_graph(std::size_t rows, std::size_t cols);

/// Random connected graph: a random spanning tree plus each remaining pair
/// with probability `extra_edge_p`.
Graph random_connected_graph(std::size_t n, double extra_edge_p, std::mt19937_64& rng);

}  // namespace apnet
