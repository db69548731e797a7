#pragma once

#include <array>

namespace symreeb {

// Pushforward of a triangle's area under a linear function: a hat-shaped
// density on [lo, hi] peaking at mid.
struct TriangleDensity {
  double lo = 0.0;
  double mid = 0.0;
  double hi = 0.0;
  double area = 0.0;

  static TriangleDensity make(double a, double b, double c, double area);

  /// Area of {f < z}.
  double sublevel(double z) const;

  /// out[l] = integral of s^l over the part of the density lying in [a, b),
  /// for l = 0..lmax (lmax <= 16).
  void moments(double a, double b, int lmax, double* out) const;

  /// Integral of f over {a <= f < b}.
  double first_moment(double a, double b) const;
};

constexpr int kMaxMomentOrder = 16;

}  // namespace symreeb
