#include "vlat/lattice.hpp"

#include <cmath>

namespace vlat {

Complex normalize_shape(Complex tau_raw) {
  if (!(tau_raw.imag() > 0)) throw InputError("normalize_shape: Im tau must be positive");
  Complex t = tau_raw;
  for (int it = 0; it < 200; ++it) {
    t -= std::round(t.real());
    if (std::norm(t) < 1.0 - 1e-15) {
      t = -1.0 / t;
      continue;
    }
    break;
  }
  t -= std::round(t.real());
  // boundary conventions: Re tau in (-1/2, 1/2], and Re tau >= 0 on |tau| = 1
  if (std::abs(t.real() + 0.5) < 1e-14) t += 1.0;
  if (std::abs(std::norm(t) - 1.0) < 1e-14 && t.real() < 0) t = -1.0 / t;
  t -= std::round(t.real());
  if (std::abs(t.real() + 0.5) < 1e-14) t += 1.0;
  return t;
}

LatticeShape make_shape(Complex tau, double R) {
  if (R <= 0) throw InputError("make_shape: R must be positive");
  if (!(tau.imag() > 0)) throw InputError("make_shape: Im tau must be positive");
  const double at = std::abs(tau);
  if (at < 1.0 - 1e-12 || tau.real() <= -0.5 - 1e-12 || tau.real() > 0.5 + 1e-12 ||
      (std::abs(at - 1.0) < 1e-12 && tau.real() < -1e-12))
    throw InputError("make_shape: tau not in the reduced fundamental domain");
  LatticeShape s;
  s.tau = tau;
  s.R = R;
  s.omega1 = Vec2(R, 0.0);
  s.omega2 = Vec2(R * tau.real(), R * tau.imag());
  s.cell_area = std::abs(s.omega1[0] * s.omega2[1] - s.omega1[1] * s.omega2[0]);
  return s;
}

LatticeVector lattice_vector(const LatticeShape& shape, int m1, int m2) {
  return {m1, m2, m1 * shape.omega1 + m2 * shape.omega2};
}

double mean_field(const LatticeShape& shape, int n) {
  if (n < 1) throw InputError("mean_field: n must be >= 1");
  return 2.0 * pi * n / shape.cell_area;
}

double gauge_exponent(const Vec2& x, const Vec2& s, int n) {
  const double slen = s.norm();
  const double cross = x[0] * s[1] - x[1] * s[0];  // Jx . s
  const double xs = x.dot(s) / slen;
  const double d2 = x.squaredNorm() - xs * xs;
  if (d2 <= 1e-24 * x.squaredNorm() || x.squaredNorm() == 0.0)
    throw InputError("gauge_exponent: x collinear with s");
  const double d = std::sqrt(d2);
  const double lam1 = xs / d, lam2 = (slen + xs) / d;
  return n * (cross / slen) / d * (std::atan(lam2) - std::atan(lam1));
}

Vec2 gauge_exponent_grad(const Vec2& x, const Vec2& s, int n) {
  auto grad_theta = [](const Vec2& p) {
    const double r2 = p.squaredNorm();
    return Vec2(-p[1] / r2, p[0] / r2);
  };
  return double(n) * (grad_theta(x + s) - grad_theta(x));
}

double gauge_exponent_lattice(const LatticeShape& shape, const Vec2& x, int m1, int m2, int n) {
  // g_{s+t}(x) = g_s(x+t) + g_t(x) mod 2 pi, peeling one basis vector at a time
  double g = 0;
  Vec2 xc = x;
  int k1 = m1, k2 = m2;
  auto step = [&](const Vec2& w, int& k) {
    const int sgn = k > 0 ? 1 : -1;
    // g_{-w}(x) = -g_w(x - w)
    if (sgn > 0)
      g += gauge_exponent(xc, w, n);
    else
      g -= gauge_exponent(xc - w, w, n);
    xc += double(sgn) * w;
    k -= sgn;
  };
  while (k1 != 0) step(shape.omega1, k1);
  while (k2 != 0) step(shape.omega2, k2);
  return g;
}

CocycleReport verify_cocycle(const LatticeShape& shape, int n,
                             const std::vector<Vec2>& samples) {
  CocycleReport rep;
  const Vec2 ws[2] = {shape.omega1, shape.omega2};
  for (const Vec2& x : samples) {
    for (const Vec2& s : ws)
      for (const Vec2& t : ws) {
        const double lhs = gauge_exponent(x, s + t, n) - gauge_exponent(x + t, s, n) -
                           gauge_exponent(x, t, n);
        const double dev = std::abs(lhs - 2.0 * pi * std::round(lhs / (2.0 * pi)));
        rep.max_deviation = std::max(rep.max_deviation, dev);
        ++rep.samples;
      }
  }
  return rep;
}

namespace {
// composite Gauss quadrature of a tangential line integral along an edge
double edge_integral(const Vec2& p0, const Vec2& p1, const Vec2& s, int n, int panels) {
  const Vec2 d = p1 - p0;
  double acc = 0;
  for (int k = 0; k < panels; ++k) {
    for (int q = 0; q < 4; ++q) {
      const double t = (k + gauss4_x[q]) / panels;
      acc += gauss4_w[q] * gauge_exponent_grad(p0 + t * d, s, n).dot(d) / panels;
    }
  }
  return acc;
}
}  // namespace

double verify_flux_condition(const LatticeShape& shape, int n) {
  // left edge (parallel to w2) paired with shift w1, bottom edge with w2;
  // the counterclockwise circulation is the difference of the two parts
  const Vec2 l0 = -0.5 * shape.omega1 - 0.5 * shape.omega2;
  const Vec2 l1 = -0.5 * shape.omega1 + 0.5 * shape.omega2;
  const Vec2 b0 = -0.5 * shape.omega1 - 0.5 * shape.omega2;
  const Vec2 b1 = 0.5 * shape.omega1 - 0.5 * shape.omega2;
  const double part1 = edge_integral(l0, l1, shape.omega1, n, 200);
  const double part2 = edge_integral(b0, b1, shape.omega2, n, 200);
  return part1 - part2;
}

double boundary_winding(const LatticeShape& shape, int n) {
  // circulation of n grad theta counterclockwise around the cell boundary
  const Vec2 c[4] = {-0.5 * shape.omega1 - 0.5 * shape.omega2,
                     0.5 * shape.omega1 - 0.5 * shape.omega2,
                     0.5 * shape.omega1 + 0.5 * shape.omega2,
                     -0.5 * shape.omega1 + 0.5 * shape.omega2};
  auto grad_theta = [](const Vec2& p) {
    const double r2 = p.squaredNorm();
    return Vec2(-p[1] / r2, p[0] / r2);
  };
  double acc = 0;
  for (int e = 0; e < 4; ++e) {
    const Vec2 p0 = c[e], p1 = c[(e + 1) % 4], d = p1 - p0;
    for (int k = 0; k < 200; ++k)
      for (int q = 0; q < 4; ++q) {
        const double t = (k + gauss4_x[q]) / 200.0;
        acc += gauss4_w[q] * double(n) * grad_theta(p0 + t * d).dot(d) / 200.0;
      }
  }
  return acc;
}

}  // namespace vlat
