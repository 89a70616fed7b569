#pragma once

// Radial two-point BVP for the degree-n vortex profiles (f, a):
//   f'' + f'/r - n^2 (1-a)^2 f / r^2 + kappa^2 (1-f^2) f = 0
//   a'' - a'/r + (1-a) f^2 = 0
//   f(0) = a(0) = 0,  f, a -> 1 as r -> infinity.
// Solved by damped Newton on a second-order collocation discretization
// over a graded mesh (fine near the axis, ~uniform tail).

#include <utility>

#include "vlat/common.hpp"

namespace vlat {

struct VortexProfile {
  int n = 1;
  double kappa = 1.0;
  std::vector<double> r;   // mesh, r[0] = 0 < r[1] < ... < r[M] = r_max
  std::vector<double> f;   // order-parameter modulus
  std::vector<double> a;   // magnetic profile
  std::vector<double> df;  // first derivatives at the mesh nodes
  std::vector<double> da;

  double r_max() const { return r.back(); }
  size_t size() const { return r.size(); }

  // cubic Hermite evaluation; second derivatives come from the ODE itself
  double f_at(double rr) const;
  double a_at(double rr) const;
  double df_at(double rr) const;
  double da_at(double rr) const;
  double d2f_at(double rr) const;  // from the f-equation
  double d2a_at(double rr) const;  // from the a-equation
  double d3f_at(double rr) const;  // derivative of the f-equation
  double d3a_at(double rr) const;
};

struct ProfileScalars {
  double energy = 0;
  double flux = 0;
  double decay_rate_f = 0;
  double decay_rate_a = 0;
  double h_c1 = 0;  // E^(1)/Phi^(1); meaningful for n = 1
};

struct ProfileOptions {
  double r_max = 25.0;
  int mesh_size = 2000;
  double tol = 1e-8;        // max-norm bound on the discrete ODE residual
  int max_iter = 60;        // Newton budget per continuation stage
  double h_min = 0.0;       // 0 -> chosen from mesh_size
  double far_field_tol = 1e-6;
};

VortexProfile solve_profile(int n, double kappa, const ProfileOptions& opt = {});
VortexProfile solve_profile(int n, double kappa, double r_max, int mesh_size, double tol = 1e-8);

// max-norm of the discrete ODE residual on interior nodes (solver's own stencil)
double profile_residual(const VortexProfile& p);

// E^(n) = (1/2) \int [ f'^2 + n^2 (1-a)^2 f^2/r^2 + (kappa^2/2)(1-f^2)^2 + (n a'/r)^2 ] 2 pi r dr
double profile_energy(const VortexProfile& p);
// independent rule for the same integral (Hermite-midpoint Simpson); used as oracle
double profile_energy_simpson(const VortexProfile& p);

// Phi^(n) = 2 pi n a(r_max)
double profile_flux(const VortexProfile& p);

// least-squares decay rates of log(1-f), log(1-a) over the window 1e-10 < 1-f < 1e-2
std::pair<double, double> decay_rates(const VortexProfile& p);

double first_critical_field(double kappa);

// (Psi, A) at a Cartesian point, |x| <= r_max; cubic interpolation
std::pair<Complex, Vec2> eval_vortex_fields(const VortexProfile& p, const Vec2& x);

ProfileScalars profile_scalars(const VortexProfile& p);

void write_profile_csv(const VortexProfile& p, const std::string& path);
VortexProfile read_profile_csv(const std::string& path, int n, double kappa);

}  // namespace vlat
