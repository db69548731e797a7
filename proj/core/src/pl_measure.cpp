#include "symreeb/pl_measure.hpp"

#include <algorithm>
#include <cmath>

namespace symreeb {

namespace {

// 9-point Gauss-Legendre on [-1, 1]; exact to degree 17.
constexpr std::array<std::array<double, 2>, 9> kGauss{{
    {-0.96816023950762609, 0.081274388361574718},
    {-0.83603110732663577, 0.18064816069485712},
    {-0.61337143270059036, 0.26061069640293566},
    {-0.32425342340380892, 0.31234707704000281},
    {0.0, 0.33023935500125967},
    {0.32425342340380892, 0.31234707704000281},
    {0.61337143270059036, 0.26061069640293566},
    {0.83603110732663577, 0.18064816069485712},
    {0.96816023950762609, 0.081274388361574718},
}};

// Adds the moments of density (s - root) * slope over [a, b].
void accumulate(double a, double b, double root, double slope, int lmax, double* out) {
  if (!(b > a)) return;
  const double half = 0.5 * (b - a);
  const double centre = 0.5 * (a + b);
  for (const auto& [x, w] : kGauss) {
    const double s = centre + half * x;
    double term = w * half * slope * (s - root);
    for (int l = 0; l <= lmax; ++l) {
      out[l] += term;
      term *= s;
    }
  }
}

}  // namespace

TriangleDensity TriangleDensity::make(double a, double b, double c, double area) {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return {a, b, c, area};
}

double TriangleDensity::sublevel(double z) const {
  if (z <= lo) return 0.0;
  if (z > hi) return area;
  if (hi == lo) return area;  // flat: z > lo here
  if (z == hi) return area;
  if (z <= mid) {
    const double d = z - lo;
    return area * d * d / ((mid - lo) * (hi - lo));
  }
  const double d = hi - z;
  return area - area * d * d / ((hi - lo) * (hi - mid));
}

void TriangleDensity::moments(double a, double b, int lmax, double* out) const {
  for (int l = 0; l <= lmax; ++l) out[l] = 0.0;
  if (!(b > a)) return;
  if (hi == lo) {
    if (a <= lo && lo < b) {
      double p = area;
      for (int l = 0; l <= lmax; ++l) {
        out[l] = p;
        p *= lo;
      }
    }
    return;
  }
  const double span = hi - lo;
  if (mid > lo) {
    accumulate(std::max(a, lo), std::min(b, mid), lo, 2.0 * area / ((mid - lo) * span), lmax,
               out);
  }
  if (hi > mid) {
    accumulate(std::max(a, mid), std::min(b, hi), hi, -2.0 * area / ((hi - mid) * span), lmax,
               out);
  }
}

double TriangleDensity::first_moment(double a, double b) const {
  double m[2];
  moments(a, b, 1, m);
  return m[1];
}

}  // namespace symreeb
