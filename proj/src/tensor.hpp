#pragma once

#include <array>
#include <cmath>

namespace lcf {

using Vec3 = std::array<double, 3>;

/// Dense 3x3 matrix, row-major: m[3*i + j] is row i, column j.
using Mat3 = std::array<double, 9>;

constexpr Mat3 kIdentity3 = {1, 0, 0, 0, 1, 0, 0, 0, 1};

inline double trace(const Mat3& m) { return m[0] + m[4] + m[8]; }

inline Mat3 transpose(const Mat3& m) {
  return {m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]};
}

inline Mat3 add(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r[i] = a[i] + b[i];
  return r;
}

inline Mat3 scale(const Mat3& a, double s) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r[i] = a[i] * s;
  return r;
}

/// Symmetric part (a + a^T)/2.
inline Mat3 sym(const Mat3& a) { return scale(add(a, transpose(a)), 0.5); }

/// Deviatoric part a - tr(a)/3 I.
inline Mat3 deviator(const Mat3& a) {
  Mat3 r = a;
  const double p = trace(a) / 3.0;
  r[0] -= p;
  r[4] -= p;
  r[8] -= p;
  return r;
}

inline double frobenius_inner(const Mat3& a, const Mat3& b) {
  double s = 0;
  for (int i = 0; i < 9; ++i) s += a[i] * b[i];
  return s;
}

inline Vec3 vadd(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec3 vsub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 vscale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

}  // namespace lcf
