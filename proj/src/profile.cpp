#include "vlat/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace vlat {

namespace {

// graded mesh r_j = r_max (e^{g t} - 1)/(e^g - 1); g picked so the first
// step is ~h_first (keeps the 1/h^2 roundoff floor of the stencil above
// the residual tolerance while resolving the r^n core)
std::vector<double> build_mesh(double r_max, int M, double h_first) {
  const double q = std::min(0.999, M * h_first / r_max);
  double lo = 1e-9, hi = 40.0;
  auto s = [](double g) { return g / std::expm1(g); };
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (s(mid) > q ? lo : hi) = mid;
  }
  const double g = 0.5 * (lo + hi);
  std::vector<double> r(M + 1);
  const double den = std::expm1(g);
  for (int j = 0; j <= M; ++j) r[j] = r_max * std::expm1(g * j / M) / den;
  r[0] = 0.0;
  r[M] = r_max;
  return r;
}

struct Stencil {
  double c2m, c2c, c2p;  // u''
  double c1m, c1c, c1p;  // u'
};

Stencil stencil_at(const std::vector<double>& r, int i) {
  const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i];
  const double den = hm * hp * (hm + hp);
  Stencil s;
  s.c2m = 2 * hp / den;
  s.c2p = 2 * hm / den;
  s.c2c = -2 * (hm + hp) / den;
  s.c1m = -hp * hp / den;
  s.c1p = hm * hm / den;
  s.c1c = (hp * hp - hm * hm) / den;
  return s;
}

// interleaved unknowns x = [f_0, a_0, f_1, a_1, ...]
void residual_vec(const VortexProfile& p, Eigen::VectorXd& R) {
  const int M = int(p.size()) - 1;
  const int n = p.n;
  const double k2 = p.kappa * p.kappa;
  R.resize(2 * (M + 1));
  R[0] = p.f[0];
  R[1] = p.a[0];
  R[2 * M] = p.f[M] - 1.0;
  R[2 * M + 1] = p.a[M] - 1.0;
  for (int i = 1; i < M; ++i) {
    const Stencil s = stencil_at(p.r, i);
    const double ri = p.r[i];
    const double d2f = s.c2m * p.f[i - 1] + s.c2c * p.f[i] + s.c2p * p.f[i + 1];
    const double d1f = s.c1m * p.f[i - 1] + s.c1c * p.f[i] + s.c1p * p.f[i + 1];
    const double d2a = s.c2m * p.a[i - 1] + s.c2c * p.a[i] + s.c2p * p.a[i + 1];
    const double d1a = s.c1m * p.a[i - 1] + s.c1c * p.a[i] + s.c1p * p.a[i + 1];
    const double um = 1.0 - p.a[i];
    R[2 * i] = d2f + d1f / ri - double(n) * n * um * um * p.f[i] / (ri * ri) +
               k2 * (1.0 - p.f[i] * p.f[i]) * p.f[i];
    R[2 * i + 1] = d2a - d1a / ri + um * p.f[i] * p.f[i];
  }
}

void jacobian(const VortexProfile& p, Eigen::SparseMatrix<double>& J) {
  const int M = int(p.size()) - 1;
  const int n = p.n;
  const double k2 = p.kappa * p.kappa;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(12 * (M + 1));
  trip.emplace_back(0, 0, 1.0);
  trip.emplace_back(1, 1, 1.0);
  trip.emplace_back(2 * M, 2 * M, 1.0);
  trip.emplace_back(2 * M + 1, 2 * M + 1, 1.0);
  for (int i = 1; i < M; ++i) {
    const Stencil s = stencil_at(p.r, i);
    const double ri = p.r[i];
    const double um = 1.0 - p.a[i];
    const int rf = 2 * i, ra = 2 * i + 1;
    trip.emplace_back(rf, 2 * (i - 1), s.c2m + s.c1m / ri);
    trip.emplace_back(rf, 2 * (i + 1), s.c2p + s.c1p / ri);
    trip.emplace_back(rf, 2 * i,
                      s.c2c + s.c1c / ri - double(n) * n * um * um / (ri * ri) +
                          k2 * (1.0 - 3.0 * p.f[i] * p.f[i]));
    trip.emplace_back(rf, 2 * i + 1, 2.0 * double(n) * n * um * p.f[i] / (ri * ri));
    trip.emplace_back(ra, 2 * (i - 1) + 1, s.c2m - s.c1m / ri);
    trip.emplace_back(ra, 2 * (i + 1) + 1, s.c2p - s.c1p / ri);
    trip.emplace_back(ra, 2 * i + 1, s.c2c - s.c1c / ri - p.f[i] * p.f[i]);
    trip.emplace_back(ra, 2 * i, 2.0 * um * p.f[i]);
  }
  J.resize(2 * (M + 1), 2 * (M + 1));
  J.setFromTriplets(trip.begin(), trip.end());
}

// damped Newton; returns final max-norm residual, or throws nothing (caller decides)
double newton_iterate(VortexProfile& p, double target, int max_iter) {
  const int M = int(p.size()) - 1;
  Eigen::VectorXd R;
  residual_vec(p, R);
  double rn = R.lpNorm<Eigen::Infinity>();
  Eigen::SparseMatrix<double> J;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  for (int it = 0; it < max_iter && rn > target; ++it) {
    jacobian(p, J);
    lu.compute(J);
    if (lu.info() != Eigen::Success) return rn;
    Eigen::VectorXd dx = lu.solve(-R);
    double lam = 1.0;
    VortexProfile trial = p;
    double rn_new = rn;
    for (int ls = 0; ls < 12; ++ls) {
      for (int i = 0; i <= M; ++i) {
        trial.f[i] = p.f[i] + lam * dx[2 * i];
        trial.a[i] = p.a[i] + lam * dx[2 * i + 1];
      }
      Eigen::VectorXd Rt;
      residual_vec(trial, Rt);
      rn_new = Rt.lpNorm<Eigen::Infinity>();
      if (std::isfinite(rn_new) && rn_new < rn) {
        p = trial;
        R = Rt;
        break;
      }
      lam *= 0.5;
    }
    if (!(rn_new < rn)) return rn;  // line search stalled
    rn = rn_new;
  }
  return rn;
}

void seed_profile(VortexProfile& p) {
  const int M = int(p.size()) - 1;
  for (int i = 0; i <= M; ++i) {
    const double t = std::tanh(p.r[i]);
    p.f[i] = std::pow(t, std::abs(p.n));
    p.a[i] = t * t;
  }
  p.f[0] = p.a[0] = 0.0;
  p.f[M] = p.a[M] = 1.0;
}

void fill_derivatives(VortexProfile& p) {
  const int M = int(p.size()) - 1;
  p.df.assign(M + 1, 0.0);
  p.da.assign(M + 1, 0.0);
  for (int i = 1; i < M; ++i) {
    const Stencil s = stencil_at(p.r, i);
    p.df[i] = s.c1m * p.f[i - 1] + s.c1c * p.f[i] + s.c1p * p.f[i + 1];
    p.da[i] = s.c1m * p.a[i - 1] + s.c1c * p.a[i] + s.c1p * p.a[i + 1];
  }
  // one-sided second-order ends
  auto oneside = [&](const std::vector<double>& u, int i0, int i1, int i2) {
    const double h1 = p.r[i1] - p.r[i0], h2 = p.r[i2] - p.r[i0];
    // derivative at i0 from the quadratic through (i0, i1, i2)
    return (u[i1] - u[i0]) * h2 / (h1 * (h2 - h1)) - (u[i2] - u[i0]) * h1 / (h2 * (h2 - h1));
  };
  p.df[0] = oneside(p.f, 0, 1, 2);
  p.da[0] = oneside(p.a, 0, 1, 2);
  {
    const double h1 = p.r[M] - p.r[M - 1], h2 = p.r[M] - p.r[M - 2];
    p.df[M] = -((p.f[M - 1] - p.f[M]) * h2 / (h1 * (h2 - h1)) -
                (p.f[M - 2] - p.f[M]) * h1 / (h2 * (h2 - h1)));
    p.da[M] = -((p.a[M - 1] - p.a[M]) * h2 / (h1 * (h2 - h1)) -
                (p.a[M - 2] - p.a[M]) * h1 / (h2 * (h2 - h1)));
  }
}

int find_interval(const std::vector<double>& r, double rr) {
  auto it = std::upper_bound(r.begin(), r.end(), rr);
  int i = int(it - r.begin()) - 1;
  return std::clamp(i, 0, int(r.size()) - 2);
}

double hermite(const std::vector<double>& r, const std::vector<double>& u,
               const std::vector<double>& du, double rr, bool deriv) {
  const int i = find_interval(r, rr);
  const double h = r[i + 1] - r[i], t = (rr - r[i]) / h;
  const double u0 = u[i], u1 = u[i + 1], m0 = du[i] * h, m1 = du[i + 1] * h;
  if (!deriv) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * u0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * u1 +
           (t3 - t2) * m1;
  }
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * u0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * u1 +
          (3 * t2 - 2 * t) * m1) /
         h;
}

}  // namespace

double VortexProfile::f_at(double rr) const { return hermite(r, f, df, rr, false); }
double VortexProfile::a_at(double rr) const { return hermite(r, a, da, rr, false); }
double VortexProfile::df_at(double rr) const { return hermite(r, f, df, rr, true); }
double VortexProfile::da_at(double rr) const { return hermite(r, a, da, rr, true); }

double VortexProfile::d2f_at(double rr) const {
  if (rr < 1e-8) rr = 1e-8;
  const double ff = f_at(rr), aa = a_at(rr), dd = df_at(rr);
  const double um = 1.0 - aa;
  return -dd / rr + double(n) * n * um * um * ff / (rr * rr) - kappa * kappa * (1 - ff * ff) * ff;
}

double VortexProfile::d2a_at(double rr) const {
  if (rr < 1e-8) rr = 1e-8;
  const double ff = f_at(rr), aa = a_at(rr), dd = da_at(rr);
  return dd / rr - (1.0 - aa) * ff * ff;
}

double VortexProfile::d3f_at(double rr) const {
  if (rr < 1e-6) rr = 1e-6;
  const double ff = f_at(rr), aa = a_at(rr), fp = df_at(rr), ap = da_at(rr);
  const double fpp = d2f_at(rr);
  const double um = 1.0 - aa, k2 = kappa * kappa, nn = double(n) * n;
  // d/dr of  -f'/r + n^2 (1-a)^2 f / r^2 - k^2 (1-f^2) f
  return -fpp / rr + fp / (rr * rr) +
         nn * (-2 * ap * um * ff / (rr * rr) + um * um * fp / (rr * rr) -
               2 * um * um * ff / (rr * rr * rr)) -
         k2 * (fp - 3 * ff * ff * fp);
}

double VortexProfile::d3a_at(double rr) const {
  if (rr < 1e-6) rr = 1e-6;
  const double ff = f_at(rr), aa = a_at(rr), fp = df_at(rr), ap = da_at(rr);
  const double app = d2a_at(rr);
  // d/dr of  a'/r - (1-a) f^2
  return app / rr - ap / (rr * rr) + ap * ff * ff - (1.0 - aa) * 2.0 * ff * fp;
}

double profile_residual(const VortexProfile& p) {
  Eigen::VectorXd R;
  residual_vec(p, R);
  double m = 0;
  for (int i = 1; i + 1 < int(p.size()); ++i)
    m = std::max(m, std::max(std::abs(R[2 * i]), std::abs(R[2 * i + 1])));
  return m;
}

VortexProfile solve_profile(int n, double kappa, const ProfileOptions& opt) {
  if (n == 0) throw InputError("solve_profile: winding n must be nonzero");
  if (kappa <= 0) throw InputError("solve_profile: kappa must be positive");
  if (opt.r_max < 15) throw InputError("solve_profile: r_max must be >= 15");
  if (opt.mesh_size < 500) throw InputError("solve_profile: mesh_size must be >= 500");
  const int na = std::abs(n);  // the ODE sees n^2 only

  VortexProfile p;
  p.n = na;
  p.kappa = kappa;
  const double h_first = opt.h_min > 0 ? opt.h_min
                                       : std::max(2.5e-4, 0.02 * opt.r_max / opt.mesh_size);
  p.r = build_mesh(opt.r_max, opt.mesh_size, h_first);
  p.f.assign(p.size(), 0.0);
  p.a.assign(p.size(), 0.0);
  seed_profile(p);

  const double target = std::min(1e-2 * opt.tol, 1e-11);
  double rn = newton_iterate(p, target, opt.max_iter);
  if (rn > opt.tol) {
    // continuation in kappa from 1 (tanh seed is a good start there)
    seed_profile(p);
    const int steps = 8;
    for (int s = 0; s <= steps; ++s) {
      p.kappa = std::exp(std::log(1.0) + (std::log(kappa) - std::log(1.0)) * s / steps);
      rn = newton_iterate(p, target, opt.max_iter);
      if (rn > opt.tol) throw SolveError("solve_profile: Newton did not converge", rn);
    }
    p.kappa = kappa;
    rn = newton_iterate(p, target, opt.max_iter);
    if (rn > opt.tol) throw SolveError("solve_profile: Newton did not converge", rn);
  }
  // pin the constraint rows exactly
  p.f[0] = p.a[0] = 0.0;
  p.f.back() = p.a.back() = 1.0;
  fill_derivatives(p);
  p.n = n;
  // far-field check
  if (1.0 - p.f.back() > opt.far_field_tol || 1.0 - p.a.back() > opt.far_field_tol)
    throw SolveError("solve_profile: far-field boundary not reached", 1.0 - p.f.back());
  return p;
}

VortexProfile solve_profile(int n, double kappa, double r_max, int mesh_size, double tol) {
  ProfileOptions o;
  o.r_max = r_max;
  o.mesh_size = mesh_size;
  o.tol = tol;
  return solve_profile(n, kappa, o);
}

namespace {
double energy_integrand(const VortexProfile& p, double rr, double ff, double aa, double dff,
                        double daa) {
  if (rr <= 0) return 0.0;
  const double nn = double(std::abs(p.n));
  const double um = 1.0 - aa;
  const double k2 = p.kappa * p.kappa;
  return pi * rr *
         (dff * dff + nn * nn * um * um * ff * ff / (rr * rr) +
          0.5 * k2 * (1 - ff * ff) * (1 - ff * ff) + nn * nn * daa * daa / (rr * rr));
}
}  // namespace

double profile_energy(const VortexProfile& p) {
  double e = 0;
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    const double I0 = energy_integrand(p, p.r[i], p.f[i], p.a[i], p.df[i], p.da[i]);
    const double I1 =
        energy_integrand(p, p.r[i + 1], p.f[i + 1], p.a[i + 1], p.df[i + 1], p.da[i + 1]);
    e += 0.5 * (p.r[i + 1] - p.r[i]) * (I0 + I1);
  }
  return e;
}

double profile_energy_simpson(const VortexProfile& p) {
  double e = 0;
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    const double rm = 0.5 * (p.r[i] + p.r[i + 1]);
    const double I0 = energy_integrand(p, p.r[i], p.f[i], p.a[i], p.df[i], p.da[i]);
    const double Im =
        energy_integrand(p, rm, p.f_at(rm), p.a_at(rm), p.df_at(rm), p.da_at(rm));
    const double I1 =
        energy_integrand(p, p.r[i + 1], p.f[i + 1], p.a[i + 1], p.df[i + 1], p.da[i + 1]);
    e += (p.r[i + 1] - p.r[i]) / 6.0 * (I0 + 4.0 * Im + I1);
  }
  return e;
}

double profile_flux(const VortexProfile& p) { return 2.0 * pi * p.n * p.a.back(); }

std::pair<double, double> decay_rates(const VortexProfile& p) {
  std::vector<double> rf, lf, ra, la;
  for (size_t i = 0; i < p.size(); ++i) {
    const double uf = 1.0 - p.f[i], ua = 1.0 - p.a[i];
    if (uf > 1e-10 && uf < 1e-2) {
      rf.push_back(p.r[i]);
      lf.push_back(std::log(uf));
    }
    if (ua > 1e-10 && ua < 1e-2) {
      ra.push_back(p.r[i]);
      la.push_back(std::log(ua));
    }
  }
  if (rf.size() < 20 || ra.size() < 20)
    throw InputError("decay_rates: tail window too short; increase r_max");
  return {-fit_line(rf, lf).slope, -fit_line(ra, la).slope};
}

double first_critical_field(double kappa) {
  VortexProfile p = solve_profile(1, kappa);
  return profile_energy(p) / profile_flux(p);
}

std::pair<Complex, Vec2> eval_vortex_fields(const VortexProfile& p, const Vec2& x) {
  const double rr = x.norm();
  if (rr > p.r_max()) throw InputError("eval_vortex_fields: |x| > r_max");
  if (rr == 0.0) return {Complex(0, 0), Vec2::Zero()};
  const double th = std::atan2(x[1], x[0]);
  const Complex ph = std::polar(1.0, p.n * th);
  const double ff = p.f_at(rr), aa = p.a_at(rr);
  const Vec2 grad_theta(-x[1] / (rr * rr), x[0] / (rr * rr));
  return {ff * ph, double(p.n) * aa * grad_theta};
}

ProfileScalars profile_scalars(const VortexProfile& p) {
  ProfileScalars s;
  s.energy = profile_energy(p);
  s.flux = profile_flux(p);
  try {
    auto [rf, ra] = decay_rates(p);
    s.decay_rate_f = rf;
    s.decay_rate_a = ra;
  } catch (const InputError&) {
    s.decay_rate_f = s.decay_rate_a = std::numeric_limits<double>::quiet_NaN();
  }
  s.h_c1 = s.energy / s.flux;
  return s;
}

void write_profile_csv(const VortexProfile& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path);
  out << "r,f,a,df,da\n";
  char buf[256];
  for (size_t i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.r[i], p.f[i], p.a[i],
                  p.df[i], p.da[i]);
    out << buf;
  }
}

VortexProfile read_profile_csv(const std::string& path, int n, double kappa) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "r,f,a,df,da")
    throw ValidationError(path + ": bad profile CSV header");
  VortexProfile p;
  p.n = n;
  p.kappa = kappa;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double v[5];
    char comma;
    for (int k = 0; k < 5; ++k) {
      if (!(ss >> v[k])) throw ValidationError(path + ": bad profile CSV row");
      if (k < 4 && !(ss >> comma)) throw ValidationError(path + ": bad profile CSV row");
    }
    p.r.push_back(v[0]);
    p.f.push_back(v[1]);
    p.a.push_back(v[2]);
    p.df.push_back(v[3]);
    p.da.push_back(v[4]);
  }
  if (p.size() < 3) throw ValidationError(path + ": too few rows");
  for (size_t i = 1; i < p.size(); ++i)
    if (p.r[i] <= p.r[i - 1]) throw ValidationError(path + ": mesh not increasing");
  return p;
}

}  // namespace vlat
