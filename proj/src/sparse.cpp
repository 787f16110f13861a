#include "sparse.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace lcf {

void CsrMatrix::add(int r, int c, double v) {
  const auto begin = cols.begin() + row_ptr[r];
  const auto end = cols.begin() + row_ptr[r + 1];
  const auto it = std::lower_bound(begin, end, c);
  if (it == end || *it != c) fail(ErrorCode::kInternal, "csr: slot missing from pattern");
  vals[it - cols.begin()] += v;
}

double CsrMatrix::get(int r, int c) const {
  const auto begin = cols.begin() + row_ptr[r];
  const auto end = cols.begin() + row_ptr[r + 1];
  const auto it = std::lower_bound(begin, end, c);
  return (it == end || *it != c) ? 0.0 : vals[it - cols.begin()];
}

void CsrMatrix::multiply(const double* x, double* y) const {
  for (int r = 0; r < n; ++r) {
    double acc = 0;
    for (int s = row_ptr[r]; s < row_ptr[r + 1]; ++s) acc += vals[s] * x[cols[s]];
    y[r] = acc;
  }
}

CgResult conjugate_gradient(const CsrMatrix& a, const std::vector<double>& b,
                            std::vector<double>& x, double rel_tol, int max_iter) {
  const int n = a.n;
  if (static_cast<int>(b.size()) != n || static_cast<int>(x.size()) != n)
    fail(ErrorCode::kInvalidArgument, "cg: dimension mismatch");

  auto dot = [n](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += u[i] * v[i];
    return s;
  };

  const double b_norm = std::sqrt(dot(b, b));
  CgResult res;
  if (b_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }

  std::vector<double> inv_diag(n);
  for (int r = 0; r < n; ++r) {
    const double d = a.get(r, r);
    if (!(d > 0)) fail(ErrorCode::kSolver, "cg: non-positive diagonal entry");
    inv_diag[r] = 1.0 / d;
  }

  std::vector<double> rvec(n), z(n), p(n), ap(n);
  a.multiply(x.data(), ap.data());
  for (int i = 0; i < n; ++i) rvec[i] = b[i] - ap[i];
  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * rvec[i];
  p = z;
  double rz = dot(rvec, z);

  for (int it = 0; it < max_iter; ++it) {
    res.relative_residual = std::sqrt(dot(rvec, rvec)) / b_norm;
    if (res.relative_residual <= rel_tol) {
      res.converged = true;
      res.iterations = it;
      return res;
    }
    a.multiply(p.data(), ap.data());
    const double p_ap = dot(p, ap);
    if (!(p_ap > 0)) fail(ErrorCode::kSolver, "cg: matrix is not positive definite");
    const double alpha = rz / p_ap;
    for (int i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (int i = 0; i < n; ++i) rvec[i] -= alpha * ap[i];
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * rvec[i];
    const double rz_next = dot(rvec, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  res.iterations = max_iter;
  res.relative_residual = std::sqrt(dot(rvec, rvec)) / b_norm;
  fail(ErrorCode::kSolver, "cg: no convergence within iteration budget (residual " +
                               std::to_string(res.relative_residual) + ")");
}

}  // namespace lcf
