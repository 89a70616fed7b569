#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vlat {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline constexpr double pi = 3.14159265358979323846;

// thrown on bad user-supplied parameters (CLI exit code 2)
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// thrown when an iterative solve fails; carries the last residual (exit code 3)
struct SolveError : std::runtime_error {
  double residual;
  SolveError(const std::string& msg, double res)
      : std::runtime_error(msg + " (residual " + std::to_string(res) + ")"), residual(res) {}
};

// artifact re-validation failure (exit code 4)
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// least-squares fit y = a + b*x; returns {a, b, corr}
struct LineFit {
  double intercept = 0, slope = 0, corr = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) throw InputError("fit_line: need >= 2 points");
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.corr = (syy > 0) ? sxy / std::sqrt(sxx * syy) : 0.0;
  return f;
}

// FNV-1a, used to name run output directories by config content
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// 4-point Gauss-Legendre on [0,1]
inline constexpr double gauss4_x[4] = {0.069431844202973712, 0.33000947820757187,
                                       0.66999052179242813, 0.93056815579702629};
inline constexpr double gauss4_w[4] = {0.17392742256872693, 0.32607257743127307,
                                       0.32607257743127307, 0.17392742256872693};

}  // namespace vlat
