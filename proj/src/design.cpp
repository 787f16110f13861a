#include "design.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace lcf {

namespace {

constexpr int kMaxOrder = 8;

// Binomial coefficients C(d, j) for the difference stencils.
double binom(int d, int j) {
  double r = 1;
  for (int i = 0; i < j; ++i) r = r * (d - i) / (i + 1);
  return r;
}

// d-th order finite difference along one axis of a 2D array, divided by h^d.
// Centered where the (d+1)-point window fits symmetrically (averaging the two
// half-offset windows for odd d), one-sided windows at the boundary.
void axis_difference(const std::vector<double>& in, int n_axis, int n_other, int stride_axis,
                     int stride_other, int d, double h, std::vector<double>& out) {
  if (d == 0) {
    out = in;
    return;
  }
  const double scale = 1.0 / std::pow(h, d);
  std::vector<double> coef(d + 1);
  for (int j = 0; j <= d; ++j) coef[j] = ((d - j) % 2 ? -1.0 : 1.0) * binom(d, j);

  auto window_sum = [&](int base, int start) {
    double s = 0;
    for (int j = 0; j <= d; ++j) s += coef[j] * in[base + (start + j) * stride_axis];
    return s;
  };

  out.assign(in.size(), 0.0);
  const int last_start = n_axis - 1 - d;
  for (int o = 0; o < n_other; ++o) {
    const int base = o * stride_other;
    for (int i = 0; i < n_axis; ++i) {
      double v;
      if (d % 2 == 0 && i - d / 2 >= 0 && i - d / 2 <= last_start) {
        v = window_sum(base, i - d / 2);
      } else if (d % 2 == 1 && i - (d + 1) / 2 >= 0 && i + (d + 1) / 2 <= n_axis - 1) {
        v = 0.5 * (window_sum(base, i - (d + 1) / 2) + window_sum(base, i - (d - 1) / 2));
      } else {
        v = window_sum(base, std::clamp(i - d / 2, 0, last_start));
      }
      out[base + i * stride_axis] = v * scale;
    }
  }
}

void require_grid_supports(const DesignField& a, int k) {
  if (a.n1 < 3 || a.n2 < 3)
    fail(ErrorCode::kInvalidArgument, "design grid must be at least 3x3");
  if (a.n1 < k + 1 || a.n2 < k + 1)
    fail(ErrorCode::kInvalidArgument, "design grid too coarse for order-" + std::to_string(k) +
                                          " differences");
  if (static_cast<size_t>(a.n1) * a.n2 != a.values.size())
    fail(ErrorCode::kInvalidArgument, "design grid size does not match value count");
  if (!(a.dx > 0 && a.dy > 0)) fail(ErrorCode::kInvalidArgument, "design grid spacing must be > 0");
}

// Trapezoid weight of node (i, j): 1 interior, 1/2 edge, 1/4 corner.
double trapezoid_weight(const DesignField& a, int i, int j) {
  const double wi = (i == 0 || i == a.n1 - 1) ? 0.5 : 1.0;
  const double wj = (j == 0 || j == a.n2 - 1) ? 0.5 : 1.0;
  return wi * wj;
}

}  // namespace

void BasicDesign::validate() const {
  auto bad = [](const std::string& what) {
    fail(ErrorCode::kInvalidArgument, "basic_design: " + what);
  };
  if (!(box[0] > 0 && box[1] > 0 && box[2] > 0)) bad("box extents must be positive");
  if (!(alpha_min > 0 && alpha_min < box[2])) bad("alpha_min must lie in (0, Lz)");
  if (!(alpha_max > alpha_min)) bad("alpha_max must exceed alpha_min");
  if (!(clamp_radius > 0)) bad("clamp_radius must be > 0");
  const Vec3& z = clamp_center;
  const double r = clamp_radius;
  if (!(z[0] - r > 0 && z[0] + r < box[0] && z[1] - r > 0 && z[1] + r < box[1]))
    bad("cavity must be strictly inside the box walls");
  if (!(z[2] - r > 0)) bad("cavity must clear the box bottom");
  if (!(z[2] + r < alpha_min)) bad("cavity must stay strictly below the cross-section plane");
  if (!(ext_radius > 0)) bad("ext_radius must be > 0");
  // Containment of every admissible shape: check the corners of the bounding
  // box [0,Lx] x [0,Ly] x [0,alpha_max].
  for (int cx = 0; cx < 2; ++cx)
    for (int cy = 0; cy < 2; ++cy)
      for (int cz = 0; cz < 2; ++cz) {
        const Vec3 corner = {cx * box[0], cy * box[1], cz * alpha_max};
        if (norm(vsub(corner, z)) > ext_radius)
          bad("ext_radius does not contain the design envelope");
      }
}

void DesignConstraints::validate() const {
  auto bad = [](const std::string& what) {
    fail(ErrorCode::kInvalidArgument, "constraints: " + what);
  };
  if (!(volume > 0)) bad("volume target must be > 0");
  if (!(ck_bound > 0)) bad("ck_bound must be > 0");
  if (!(lipschitz > 0)) bad("lipschitz bound must be > 0");
  if (k < 1 || k > kMaxOrder) bad("derivative order k must lie in 1..8");
  if (!boundary_derivatives.empty() && boundary_derivatives.size() != static_cast<size_t>(k))
    bad("boundary_derivatives must list one value per order 1..k");
}

DesignField make_design_field(const BasicDesign& basic, int n1, int n2, double value) {
  if (n1 < 3 || n2 < 3) fail(ErrorCode::kInvalidArgument, "design grid must be at least 3x3");
  DesignField f;
  f.n1 = n1;
  f.n2 = n2;
  f.dx = basic.box[0] / (n1 - 1);
  f.dy = basic.box[1] / (n2 - 1);
  f.values.assign(static_cast<size_t>(n1) * n2, value);
  return f;
}

double trapezoid_volume(const DesignField& a) {
  require_grid_supports(a, 1);
  double v = 0;
  for (int i = 0; i < a.n1; ++i)
    for (int j = 0; j < a.n2; ++j) v += trapezoid_weight(a, i, j) * a.at(i, j);
  return v * a.dx * a.dy;
}

std::vector<double> fd_derivative(const DesignField& a, int ox, int oy) {
  require_grid_supports(a, std::max(ox, oy));
  if (ox < 0 || oy < 0 || ox > kMaxOrder || oy > kMaxOrder)
    fail(ErrorCode::kInvalidArgument, "fd_derivative: unsupported order");
  std::vector<double> tmp, out;
  // x first, y second; the operators commute.
  axis_difference(a.values, a.n1, a.n2, a.n2, 1, ox, a.dx, tmp);
  axis_difference(tmp, a.n2, a.n1, 1, a.n2, oy, a.dy, out);
  return out;
}

const ConstraintMargin* AdmissibilityReport::find(const std::string& name) const {
  for (const auto& m : margins)
    if (m.name == name) return &m;
  return nullptr;
}

AdmissibilityReport check_admissible(const DesignField& alpha, const DesignConstraints& c,
                                     const BasicDesign& basic, double tol) {
  c.validate();
  basic.validate();
  require_grid_supports(alpha, c.k);
  if (!(tol >= 0)) fail(ErrorCode::kInvalidArgument, "check_admissible: tol must be >= 0");

  AdmissibilityReport rep;
  const double range = basic.alpha_max - basic.alpha_min;
  auto push = [&](const std::string& name, double value, double threshold) {
    rep.margins.push_back({name, value, threshold, value <= threshold});
  };

  // Box bounds.
  double lo = alpha.values[0], hi = alpha.values[0];
  for (double v : alpha.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  push("box_lower", basic.alpha_min - lo, tol * range);
  push("box_upper", hi - basic.alpha_max, tol * range);

  // Boundary trace alpha = alpha_min.
  double bnd_dev = 0;
  for (int i = 0; i < alpha.n1; ++i)
    for (int j = 0; j < alpha.n2; ++j)
      if (alpha.on_boundary(i, j))
        bnd_dev = std::max(bnd_dev, std::fabs(alpha.at(i, j) - basic.alpha_min));
  push("boundary_value", bnd_dev, tol * range);

  // Volume.
  push("volume", std::fabs(trapezoid_volume(alpha) - c.volume), tol * c.volume);

  // Discrete C^k norm and boundary derivatives, sharing derivative fields.
  double ck_norm = 0;
  double bnd_deriv_dev = 0;
  double lip = 0;
  for (int order = 0; order <= c.k; ++order) {
    const double s_beta =
        (order == 0 || c.boundary_derivatives.empty()) ? 0.0 : c.boundary_derivatives[order - 1];
    for (int ox = 0; ox <= order; ++ox) {
      const int oy = order - ox;
      const std::vector<double> d = fd_derivative(alpha, ox, oy);
      for (double v : d) ck_norm = std::max(ck_norm, std::fabs(v));
      if (order >= 1) {
        for (int i = 0; i < alpha.n1; ++i)
          for (int j = 0; j < alpha.n2; ++j)
            if (alpha.on_boundary(i, j))
              bnd_deriv_dev = std::max(
                  bnd_deriv_dev, std::fabs(d[static_cast<size_t>(i) * alpha.n2 + j] - s_beta));
      }
      if (order == c.k) {
        // Lipschitz constant of the k-th differences over all node pairs.
        for (int i = 0; i < alpha.n1; ++i)
          for (int j = 0; j < alpha.n2; ++j) {
            const double vi = d[static_cast<size_t>(i) * alpha.n2 + j];
            for (int p = i; p < alpha.n1; ++p)
              for (int q = (p == i ? j + 1 : 0); q < alpha.n2; ++q) {
                const double dist = std::hypot((p - i) * alpha.dx, (q - j) * alpha.dy);
                lip = std::max(lip,
                               std::fabs(d[static_cast<size_t>(p) * alpha.n2 + q] - vi) / dist);
              }
          }
      }
    }
  }
  push("ck_norm", ck_norm, c.ck_bound * (1.0 + tol));
  push("lipschitz", lip, c.lipschitz * (1.0 + tol));
  push("boundary_derivatives", bnd_deriv_dev, tol * std::max(1.0, c.ck_bound));

  rep.admissible = std::all_of(rep.margins.begin(), rep.margins.end(),
                               [](const ConstraintMargin& m) { return m.passed; });
  return rep;
}

DesignField project_volume(const DesignField& alpha, const DesignConstraints& c,
                           const BasicDesign& basic) {
  c.validate();
  basic.validate();
  require_grid_supports(alpha, 1);

  DesignField cur = alpha;
  const double cell = cur.dx * cur.dy;
  double interior_weight = 0;  // trapezoid mass attached to interior nodes
  double boundary_part = 0;    // fixed contribution of the (untouched) boundary
  for (int i = 0; i < cur.n1; ++i)
    for (int j = 0; j < cur.n2; ++j) {
      if (cur.on_boundary(i, j))
        boundary_part += trapezoid_weight(cur, i, j) * cur.at(i, j) * cell;
      else
        interior_weight += trapezoid_weight(cur, i, j) * cell;
    }

  const double v_lo = boundary_part + interior_weight * basic.alpha_min;
  const double v_hi = boundary_part + interior_weight * basic.alpha_max;
  const double tol = 1e-10 * c.volume;
  if (c.volume < v_lo - tol || c.volume > v_hi + tol)
    fail(ErrorCode::kConstraint, "project_volume: volume target unreachable for this grid");

  for (int pass = 0; pass < 200; ++pass) {
    const double v = trapezoid_volume(cur);
    if (std::fabs(v - c.volume) <= tol) return cur;
    const double shift = (c.volume - v) / interior_weight;
    for (int i = 1; i < cur.n1 - 1; ++i)
      for (int j = 1; j < cur.n2 - 1; ++j)
        cur.at(i, j) = std::clamp(cur.at(i, j) + shift, basic.alpha_min, basic.alpha_max);
  }
  fail(ErrorCode::kInternal, "project_volume: did not converge");
}

double ck_distance(const DesignField& a1, const DesignField& a2, int k) {
  if (a1.n1 != a2.n1 || a1.n2 != a2.n2 || a1.dx != a2.dx || a1.dy != a2.dy)
    fail(ErrorCode::kInvalidArgument, "ck_distance: grids do not match");
  require_grid_supports(a1, k);
  DesignField diff = a1;
  for (size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= a2.values[i];
  double dist = 0;
  for (int order = 0; order <= k; ++order)
    for (int ox = 0; ox <= order; ++ox) {
      const std::vector<double> d = fd_derivative(diff, ox, order - ox);
      for (double v : d) dist = std::max(dist, std::fabs(v));
    }
  return dist;
}

}  // namespace lcf
