#pragma once

// Dense tableau simplex for  max c.x  s.t.  A x <= b, x >= 0  with b >= 0, so the
// slack basis is feasible from the start. Bland's rule on both pivot choices.

#include <cstddef>
#include <vector>

#include "qiso/errors.hpp"
#include "qiso/matrix.hpp"
#include "qiso/numeric.hpp"

namespace qiso {

template <Field R>
struct LpSolution {
  R value{0};
  std::vector<R> x;
  std::vector<R> dual;  // one multiplier per constraint row
  std::size_t pivots = 0;
};

template <Field R>
LpSolution<R> simplex_max(const Mat<R>& a, const std::vector<R>& b, const std::vector<R>& c,
                          const Tolerance& tol = {}) {
  const std::size_t m = a.rows(), n = a.cols();
  require(b.size() == m && c.size() == n, "ShapeMismatch", "lp dimensions disagree");
  for (const auto& bi : b) require(approx_le<R>(R(0), bi, tol), "InvalidInput", "lp needs b >= 0");

  // columns: n structural, m slack, then rhs
  const std::size_t width = n + m + 1;
  Mat<R> t(m + 1, width);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t(i, j) = a(i, j);
    t(i, n + i) = R(1);
    t(i, width - 1) = b[i];
    basis[i] = n + i;
  }
  // objective row holds -c; optimal once all entries are >= 0
  for (std::size_t j = 0; j < n; ++j) t(m, j) = -c[j];

  LpSolution<R> out;
  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j)
      if (definitely_lt<R>(t(m, j), R(0), tol)) {
        enter = j;
        break;
      }
    if (enter == width) break;

    std::size_t leave = m;
    R best_ratio{0};
    for (std::size_t i = 0; i < m; ++i) {
      if (!definitely_lt<R>(R(0), t(i, enter), tol)) continue;
      R ratio = t(i, width - 1) / t(i, enter);
      if (leave == m || definitely_lt<R>(ratio, best_ratio, tol) ||
          (approx_eq<R>(ratio, best_ratio, tol) && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) throw StructureError("Unbounded", "linear program is unbounded");

    R inv = R(1) / t(leave, enter);
    for (std::size_t j = 0; j < width; ++j) t(leave, j) *= inv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t(i, enter) == 0) continue;
      R f = t(i, enter);
      for (std::size_t j = 0; j < width; ++j) t(i, j) -= f * t(leave, j);
    }
    basis[leave] = enter;
    ++out.pivots;
  }

  out.x.assign(n, R(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) out.x[basis[i]] = t(i, width - 1);
  out.value = t(m, width - 1);
  out.dual.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.dual[i] = t(m, n + i);
  return out;
}

}  // namespace qiso
