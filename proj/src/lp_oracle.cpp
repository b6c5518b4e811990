#include "mgoig/lp_oracle.hpp"

#include <vector>

namespace mgoig {

namespace {

struct SimplexOut {
  Rat value;
  std::vector<Rat> x;
};

// max c^T x s.t. A x <= b, x >= 0, all b >= 0 (slack basis is feasible).
// Dense tableau, Bland's rule.
SimplexOut simplex_max(const std::vector<std::vector<Rat>>& A, const std::vector<Rat>& b,
                       const std::vector<Rat>& c) {
  size_t m = A.size(), n = c.size();
  size_t cols = n + m + 1;
  std::vector<std::vector<Rat>> t(m + 1, std::vector<Rat>(cols, Rat(0)));
  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) t[i][j] = A[i][j];
    t[i][n + i] = Rat(1);
    t[i][cols - 1] = b[i];
    basis[i] = n + i;
  }
  for (size_t j = 0; j < n; ++j) t[m][j] = -c[j];

  for (;;) {
    // entering: lowest-index column with negative reduced cost (Bland)
    size_t enter = cols;
    for (size_t j = 0; j + 1 < cols; ++j)
      if (t[m][j] < Rat(0)) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    // leaving: min ratio, ties by lowest basis index (Bland)
    size_t leave = m;
    Rat best;
    for (size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= Rat(0)) continue;
      Rat ratio = t[i][cols - 1] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave == m) throw std::runtime_error("lp: unbounded instance");
    Rat piv = t[leave][enter];
    for (auto& entry : t[leave]) entry /= piv;
    for (size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      Rat factor = t[i][enter];
      if (factor == Rat(0)) continue;
      for (size_t j = 0; j < cols; ++j) t[i][j] -= factor * t[leave][j];
    }
    basis[leave] = enter;
  }

  SimplexOut out;
  out.value = t[m][cols - 1];
  out.x.assign(n, Rat(0));
  for (size_t i = 0; i < m; ++i)
    if (basis[i] < n) out.x[basis[i]] = t[i][cols - 1];
  return out;
}

}  // namespace

LpMatchingSolution lp_solve_matching(const MgNetwork& net, size_t max_rows) {
  size_t nvars = 2 * net.n_edges();  // arc (e, u-side), (e, v-side)
  std::vector<std::vector<Rat>> A;
  std::vector<Rat> b;
  for (size_t e = 0; e < net.n_edges(); ++e) {
    std::vector<Rat> row(nvars, Rat(0));
    row[2 * e] = Rat(1);
    row[2 * e + 1] = Rat(1);
    A.push_back(std::move(row));
    b.push_back(Rat(1));
  }
  for (size_t g = 0; g < net.n_groups(); ++g) {
    for (int v = 0; v < net.n_vertices; ++v) {
      std::vector<Rat> row(nvars, Rat(0));
      bool touched = false;
      for (int e : net.group_edges[g]) {
        if (net.edges[static_cast<size_t>(e)].u == v) {
          row[2 * static_cast<size_t>(e)] = Rat(1);
          touched = true;
        } else if (net.edges[static_cast<size_t>(e)].v == v) {
          row[2 * static_cast<size_t>(e) + 1] = Rat(1);
          touched = true;
        }
      }
      if (!touched) continue;
      if (net.capacity(g, v) < Rat(0))
        throw std::invalid_argument("lp: negative capacity");
      A.push_back(std::move(row));
      b.push_back(net.capacity(g, v));
    }
  }
  if (A.size() > max_rows)
    throw Error(Errc::InstanceTooLarge, "lp tableau exceeds the row guard");

  std::vector<Rat> c(nvars, Rat(1));
  SimplexOut out = simplex_max(A, b, c);
  LpMatchingSolution sol;
  sol.value = out.value;
  sol.matching.f.resize(net.n_edges());
  for (size_t e = 0; e < net.n_edges(); ++e) {
    sol.matching.f[e][0] = out.x[2 * e];
    sol.matching.f[e][1] = out.x[2 * e + 1];
  }
  return sol;
}

Rat lp_optimum_oracle(const MgNetwork& net, size_t max_edges) {
  if (net.n_edges() > max_edges)
    throw Error(Errc::InstanceTooLarge, "lp oracle accepts only small instances");
  return lp_solve_matching(net).value;
}

}  // namespace mgoig
