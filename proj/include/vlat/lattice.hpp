#pragma once

// Lattice shapes, the fundamental cell, the gauge exponent g_s and its
// cocycle / flux-quantization checks. The cell is centered at the origin,
// Omega = { r1 w1 + r2 w2 : -1/2 <= r_i < 1/2 }, with w1 = (R, 0) and
// w2 = R (Re tau, Im tau).

#include "vlat/common.hpp"

namespace vlat {

struct LatticeShape {
  Complex tau;
  double R;
  Vec2 omega1, omega2;
  double cell_area;

  Mat2 basis() const {  // columns w1, w2
    Mat2 E;
    E.col(0) = omega1;
    E.col(1) = omega2;
    return E;
  }
  Vec2 point(double y1, double y2) const { return y1 * omega1 + y2 * omega2; }
};

// reduce tau to the modular fundamental domain and build the shape
Complex normalize_shape(Complex tau_raw);
LatticeShape make_shape(Complex tau, double R);

struct LatticeVector {
  int m1 = 0, m2 = 0;
  Vec2 value = Vec2::Zero();
};
LatticeVector lattice_vector(const LatticeShape& shape, int m1, int m2);

// average field b = 2 pi n / |Omega|
double mean_field(const LatticeShape& shape, int n);

// g_s(x) = n [theta(x+s) - theta(x)] along the straight segment, evaluated by
// the closed arctangent form; throws on collinear x, s
double gauge_exponent(const Vec2& x, const Vec2& s, int n);

// grad g_s(x) = n [grad theta(x+s) - grad theta(x)]
Vec2 gauge_exponent_grad(const Vec2& x, const Vec2& s, int n);

// g for a general lattice vector alpha = m1 w1 + m2 w2, composed one basis
// step at a time via the cocycle relation (defined mod 2 pi)
double gauge_exponent_lattice(const LatticeShape& shape, const Vec2& x, int m1, int m2, int n);

struct CocycleReport {
  double max_deviation = 0;  // from the nearest multiple of 2 pi
  int samples = 0;
};
CocycleReport verify_cocycle(const LatticeShape& shape, int n, const std::vector<Vec2>& samples);

// numerically integrates the boundary combination of grad g_{w_i}; equals 2 pi n
double verify_flux_condition(const LatticeShape& shape, int n);

// winding of n theta around the cell boundary (same value, independent route)
double boundary_winding(const LatticeShape& shape, int n);

}  // namespace vlat
