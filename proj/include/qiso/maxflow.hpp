#pragma once

#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "qiso/numeric.hpp"

namespace qiso {

/// Edmonds-Karp on a small dense graph. Capacities are exact in rational mode.
template <Field R>
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes, Tolerance tol = {})
      : n_(nodes), tol_(tol), cap_(nodes * nodes, R(0)), flow_(nodes * nodes, R(0)) {}

  void add_capacity(std::size_t from, std::size_t to, const R& c) { cap_[from * n_ + to] += c; }

  R run(std::size_t source, std::size_t sink) {
    R total(0);
    std::vector<std::size_t> parent(n_);
    for (;;) {
      std::fill(parent.begin(), parent.end(), n_);
      parent[source] = source;
      std::queue<std::size_t> q;
      q.push(source);
      while (!q.empty() && parent[sink] == n_) {
        std::size_t v = q.front();
        q.pop();
        for (std::size_t w = 0; w < n_; ++w)
          if (parent[w] == n_ && has_residual(v, w)) {
            parent[w] = v;
            q.push(w);
          }
      }
      if (parent[sink] == n_) break;
      R bottleneck = residual(parent[sink], sink);
      for (std::size_t v = sink; v != source; v = parent[v]) {
        R r = residual(parent[v], v);
        if (r < bottleneck) bottleneck = r;
      }
      for (std::size_t v = sink; v != source; v = parent[v]) push(parent[v], v, bottleneck);
      total += bottleneck;
    }
    return total;
  }

  /// Net flow on arc from -> to after run().
  R flow(std::size_t from, std::size_t to) const { return flow_[from * n_ + to]; }

  /// Nodes reachable from the source in the residual graph (the source side of a min cut).
  std::vector<bool> source_side(std::size_t source) const {
    std::vector<bool> seen(n_, false);
    std::queue<std::size_t> q;
    q.push(source);
    seen[source] = true;
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop();
      for (std::size_t w = 0; w < n_; ++w)
        if (!seen[w] && has_residual(v, w)) {
          seen[w] = true;
          q.push(w);
        }
    }
    return seen;
  }

 private:
  R residual(std::size_t v, std::size_t w) const { return cap_[v * n_ + w] - flow_[v * n_ + w]; }
  bool has_residual(std::size_t v, std::size_t w) const {
    return definitely_lt<R>(R(0), residual(v, w), tol_);
  }
  void push(std::size_t v, std::size_t w, const R& amount) {
    flow_[v * n_ + w] += amount;
    flow_[w * n_ + v] -= amount;
  }

  std::size_t n_;
  Tolerance tol_;
  std::vector<R> cap_;
  std::vector<R> flow_;
};

}  // namespace qiso
