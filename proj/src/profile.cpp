#include "cqed/profile.hpp"

#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>

namespace cqed {

void validate(const TraversalSpec& traversal) {
  if (!(traversal.waist_cm > 0.0) || !std::isfinite(traversal.waist_cm)) {
    throw ValidationError("traversal waist must be positive");
  }
  if (!(traversal.tau > 0.0) || !std::isfinite(traversal.tau)) {
    throw ValidationError("traversal crossing time must be positive");
  }
  if (!(traversal.alpha > 0.0) || !std::isfinite(traversal.alpha)) {
    throw ValidationError("traversal alpha must be positive");
  }
}

double gaussian_profile_factor(double t, const TraversalSpec& traversal) {
  validate(traversal);
  const double x = traversal.position(t) / traversal.waist_cm;
  return std::exp(-x * x);
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol,
                        int max_depth) {
  // Split once so a peak at the midpoint is never straddled by the first
  // coarse estimate alone.
  const double mid = 0.5 * (lo + hi);
  double total = 0.0;
  for (auto [a, b] : {std::pair{lo, mid}, std::pair{mid, hi}}) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    total += simpson_step(f, a, b, fa, fm, fb, whole, 0.5 * tol, max_depth);
  }
  return total;
}

double profile_squeezing_factor(const PhysicalParams& params, const TraversalSpec& traversal) {
  validate(traversal);
  const double xi = std::abs(effective_xi(params));
  if (xi == 0.0) return 0.0;
  const auto f2 = [&](double t) {
    const double x = traversal.position(t) / traversal.waist_cm;
    return std::exp(-2.0 * x * x);
  };
  const double integral = adaptive_simpson(f2, 0.0, traversal.tau, 1e-10 / (2.0 * xi));
  return 2.0 * xi * integral;
}

double fit_traversal_alpha(const PhysicalParams& params, double waist_cm, double tau, double r_target) {
  TraversalSpec traversal{waist_cm, 1.0, tau};
  validate(traversal);
  const double r_uniform = 2.0 * std::abs(effective_xi(params)) * tau;
  if (!(r_target > 0.0) || r_target >= r_uniform) {
    throw ValidationError("target squeezing factor must lie in (0, 2|xi|tau)");
  }
  const auto residual = [&](double alpha) {
    traversal.alpha = alpha;
    return profile_squeezing_factor(params, traversal) - r_target;
  };
  double lo = 1e-6;
  double hi = 1.0;
  while (residual(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw ConvergenceError("could not bracket the traversal ratio");
  }
  std::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, boost::math::tools::eps_tolerance<double>(50),
                                                        iterations);
  return 0.5 * (a + b);
}

}  // namespace cqed
