#pragma once

#include <vector>

namespace lcf {

/// Compressed sparse row matrix with a fixed symmetric pattern.
struct CsrMatrix {
  int n = 0;
  std::vector<int> row_ptr;  // size n + 1
  std::vector<int> cols;     // sorted within each row
  std::vector<double> vals;

  /// Adds v at (r, c); the slot must exist in the pattern.
  void add(int r, int c, double v);
  double get(int r, int c) const;
  void multiply(const double* x, double* y) const;  // y = A x
};

struct CgResult {
  int iterations = 0;
  double relative_residual = 0;
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients for SPD systems. Deterministic:
/// fixed traversal order, no reductions that depend on thread count.
/// x is used as the starting iterate (zero it for a cold start).
CgResult conjugate_gradient(const CsrMatrix& a, const std::vector<double>& b,
                            std::vector<double>& x, double rel_tol, int max_iter);

}  // namespace lcf
