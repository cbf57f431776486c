#include "apnet/graph.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <string>

namespace apnet {

Graph::Graph(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)), neighbors_(n) {
  if (n_ == 0) throw std::invalid_argument("graph must have at least one node");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n_ ||
        static_cast<std::size_t>(e.v) >= n_) {
      throw std::invalid_argument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  ") has an endpoint outside [0, " + std::to_string(n_) + ")");
    }
    if (e.u == e.v) throw std::invalid_argument("self-loop at node " + std::to_string(e.u));
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
      throw std::invalid_argument("duplicate edge (" + std::to_string(e.u) + "," +
                                  std::to_string(e.v) + ")");
    }
    neighbors_[e.u].push_back(e.v);
    neighbors_[e.v].push_back(e.u);
  }
}

Matrix Graph::adjacency() const {
  Matrix a = Matrix::Zero(n_, n_);
  for (const Edge& e : edges_) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

Matrix Graph::degree_matrix() const {
  Vector d(n_);
  for (std::size_t i = 0; i < n_; ++i) d(i) = degree(i);
  return d.asDiagonal();
}

Graph build_graph(std::size_t n, std::vector<Edge> edges) { return Graph(n, std::move(edges)); }

Matrix laplacian(const Graph& g) { return g.degree_matrix() - g.adjacency(); }

bool is_connected(const Graph& g) {
  std::vector<char> visited(g.size(), 0);
  std::queue<int> frontier;
  frontier.push(0);
  visited[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    int i = frontier.front();
    frontier.pop();
    for (int j : g.neighbors(i)) {
      if (!visited[j]) {
        visited[j] = 1;
        ++reached;
        frontier.push(j);
      }
    }
  }
  return reached == g.size();
}

SpectralData spectrum(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("spectrum: matrix is not square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("spectrum: matrix is not symmetric");
  }
  // Householder tridiagonalization followed by implicit symmetric QR;
  // Eigen returns eigenvalues in ascending order.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) throw Error("spectrum: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix laplacian_pseudoinverse(const Matrix& L, const Graph& g) {
  if (!is_connected(g)) {
    throw std::invalid_argument("laplacian_pseudoinverse: graph is not connected");
  }
  const SpectralData sd = spectrum(L);
  const double cutoff = 1e-9 * std::max(0.0, sd.eigenvalues.maxCoeff());
  Vector inv = Vector::Zero(sd.eigenvalues.size());
  for (Eigen::Index k = 0; k < inv.size(); ++k) {
    if (sd.eigenvalues(k) > cutoff) inv(k) = 1.0 / sd.eigenvalues(k);
  }
  Matrix pinv = sd.eigenvectors * inv.asDiagonal() * sd.eigenvectors.transpose();
  return 0.5 * (pinv + pinv.transpose());
}

double f_matrix_min_eig(const Matrix& L, const Vector& k) {
  if (k.size() != L.rows()) throw std::invalid_argument("f_matrix_min_eig: size mismatch");
  if ((k.array() < 0.0).any()) throw std::invalid_argument("f_matrix_min_eig: negative gain");
  Matrix f = L;
  f.diagonal() += k;
  return spectrum(f).eigenvalues(0);
}

Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({int(i), int(i + 1)});
  return Graph(n, std::move(edges));
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) return path_graph(n);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) edges.push_back({int(i), int((i + 1) % n)});
  return Graph(n, std::move(edges));
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({int(i), int(j)});
  return Graph(n, std::move(edges));
}

Graph grid_graph(std::size_t rows, std::size_t cols) {
  std::vector<Edge> edges;
  auto id = [cols](std::size_t r, std::size_t c) { return int(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
    }
  }
  return Graph(rows * cols, std::move(edges));
}

Graph random_connected_graph(std::size_t n, double extra_edge_p, std::mt19937_64& rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::set<std::pair<int, int>> present;
  std::vector<Edge> edges;
  auto add = [&](int a, int b) {
    if (present.emplace(std::min(a, b), std::max(a, b)).second) edges.push_back({a, b});
  };
  for (std::size_t k = 1; k < n; ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    add(order[k], order[pick(rng)]);
  }
  std::bernoulli_distribution coin(extra_edge_p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) add(int(i), int(j));
  return Graph(n, std::move(edges));
}

}  // namespace apnet
