#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ftc {

/// Weighted undirected interaction graph over n agents.
///
/// Stored as a dense symmetric matrix with zero diagonal; the agent counts
/// involved are small, so density keeps the protocol loops simple. Immutable
/// after construction and safe to share across concurrent simulations.
class Graph {
  public:
    struct Edge {
        int i = 0;
        int j = 0;
        double weight = 1.0;
    };

    /// A neighbor index together with the coupling weight a_ij.
    using Neighbor = std::pair<int, double>;

    Graph() = default;  // empty placeholder; rejected by scenario validation

    /// Builds a graph from an undirected edge list. Rejects self-loops,
    /// duplicate unordered pairs, nonpositive weights, and bad indices.
    static Graph from_edges(int n, const std::vector<Edge>& edges) {
        if (n <= 0) throw std::invalid_argument("graph: agent count must be positive, got " + std::to_string(n));
        Graph g;
        g.n_ = n;
        g.w_.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (const auto& e : edges) {
            if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n)
                throw std::invalid_argument("graph: edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                                            ") out of range for n=" + std::to_string(n));
            if (e.i == e.j)
                throw std::invalid_argument("graph: self-loop at node " + std::to_string(e.i));
            if (!(e.weight > 0.0))
                throw std::invalid_argument("graph: edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                                            ") has nonpositive weight " + std::to_string(e.weight));
            if (g.at(e.i, e.j) != 0.0)
                throw std::invalid_argument("graph: duplicate edge (" + std::to_string(e.i) + ", " +
                                            std::to_string(e.j) + ")");
            g.at(e.i, e.j) = e.weight;
            g.at(e.j, e.i) = e.weight;
        }
        g.build_adjacency();
        return g;
    }

    /// Builds a graph from a full matrix, validating symmetry, zero diagonal
    /// and nonnegativity. Symmetry is checked exactly: weights are inputs,
    /// not computed quantities.
    static Graph from_matrix(const std::vector<std::vector<double>>& m) {
        const int n = static_cast<int>(m.size());
        if (n == 0) throw std::invalid_argument("graph: matrix is empty");
        Graph g;
        g.n_ = n;
        g.w_.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(m[i].size()) != n)
                throw std::invalid_argument("graph: matrix row " + std::to_string(i) + " has length " +
                                            std::to_string(m[i].size()) + ", expected " + std::to_string(n));
            for (int j = 0; j < n; ++j) {
                const double v = m[i][j];
                if (v < 0.0)
                    throw std::invalid_argument("graph: negative weight at (" + std::to_string(i) + ", " +
                                                std::to_string(j) + ")");
                if (i == j && v != 0.0)
                    throw std::invalid_argument("graph: nonzero diagonal at (" + std::to_string(i) + ", " +
                                                std::to_string(i) + ")");
                if (j < i && m[j][i] != v)
                    throw std::invalid_argument("graph: matrix not symmetric at (" + std::to_string(j) + ", " +
                                                std::to_string(i) + ")");
                g.at(i, j) = v;
            }
        }
        g.build_adjacency();
        return g;
    }

    int size() const { return n_; }

    double weight(int i, int j) const {
        check_index(i);
        check_index(j);
        return at(i, j);
    }

    /// Neighbors of node i with their weights, in ascending index order.
    const std::vector<Neighbor>& neighbors(int i) const {
        check_index(i);
        return adj_[static_cast<std::size_t>(i)];
    }

    bool has_edges() const {
        for (double v : w_)
            if (v > 0.0) return true;
        return false;
    }

    /// True iff every node is reachable from node 0 over positive-weight edges.
    bool is_connected() const {
        if (n_ == 0) return false;
        std::vector<char> seen(static_cast<std::size_t>(n_), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            for (const auto& [j, w] : neighbors(i)) {
                if (!seen[static_cast<std::size_t>(j)]) {
                    seen[static_cast<std::size_t>(j)] = 1;
                    ++count;
                    stack.push_back(j);
                }
            }
        }
        return count == n_;
    }

    /// Minimum over all strictly positive weights (kappa in the consensus
    /// time bounds). Errors on an edgeless graph.
    double min_positive_weight() const {
        double best = 0.0;
        bool found = false;
        for (double v : w_) {
            if (v > 0.0 && (!found || v < best)) {
                best = v;
                found = true;
            }
        }
        if (!found) throw std::invalid_argument("graph: min_positive_weight undefined on an edgeless graph");
        return best;
    }

    /// Flat row-major weight matrix.
    const std::vector<double>& weights() const { return w_; }

    friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.w_ == b.w_; }

  private:
    double& at(int i, int j) { return w_[static_cast<std::size_t>(i) * n_ + j]; }
    double at(int i, int j) const { return w_[static_cast<std::size_t>(i) * n_ + j]; }

    void check_index(int i) const {
        if (i < 0 || i >= n_)
            throw std::invalid_argument("graph: node index " + std::to_string(i) + " out of range for n=" +
                                        std::to_string(n_));
    }

    void build_adjacency() {
        adj_.assign(static_cast<std::size_t>(n_), {});
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (at(i, j) > 0.0) adj_[static_cast<std::size_t>(i)].emplace_back(j, at(i, j));
    }

    int n_ = 0;
    std::vector<double> w_;
    std::vector<std::vector<Neighbor>> adj_;
};

}  // namespace ftc
