#include "robin/root_finding.hpp"

#include <cmath>
#include <sstream>

#include "robin/errors.hpp"

namespace robin {

bool brackets_root(double f_lo, double f_hi) {
  return f_lo == 0.0 || f_hi == 0.0 || (f_lo < 0.0) != (f_hi < 0.0);
}

double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, Bracket b,
                       const RootOptions& opts) {
  double lo = b.lo;
  double hi = b.hi;
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (!brackets_root(f_lo, f_hi)) {
    std::ostringstream msg;
    msg << "no sign change on [" << lo << ", " << hi << "]";
    throw NonConvergence(msg.str());
  }
  const bool increasing = f_lo < 0.0;

  auto shrink = [&](double x, double fx) {
    if ((fx < 0.0) == increasing) {
      lo = x;
    } else {
      hi = x;
    }
  };

  int it = 0;
  for (; it < opts.max_iterations && hi - lo > opts.bisection_width; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    shrink(mid, fm);
  }

  double x = 0.5 * (lo + hi);
  double prev_step = hi - lo;
  for (; it < opts.max_iterations; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    shrink(x, fx);
    const double d = df(x);
    double next = (d != 0.0 && std::isfinite(d)) ? x - fx / d : NAN;
    // bisect when Newton leaves the bracket or stalls on a noisy function
    if (!(next >= lo && next <= hi) || std::fabs(next - x) > 0.5 * prev_step) {
      next = 0.5 * (lo + hi);
    }
    prev_step = std::fabs(next - x);
    const double scale = std::max(std::fabs(next), 1e-300);
    if (std::fabs(next - x) <= opts.rel_tol * scale ||
        hi - lo <= opts.rel_tol * scale) {
      return next;
    }
    x = next;
  }
  std::ostringstream msg;
  msg << "bracketed Newton did not converge on [" << b.lo << ", " << b.hi
      << "] after " << opts.max_iterations << " iterations";
  throw NonConvergence(msg.str());
}

double bisect(const std::function<double(double)>& f, Bracket b, double abs_tol,
              int max_iterations) {
  double lo = b.lo;
  double hi = b.hi;
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (!brackets_root(f_lo, f_hi)) {
    throw NonConvergence("bisect: endpoints do not bracket a root");
  }
  for (int it = 0; it < max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= abs_tol || mid == lo || mid == hi) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace robin
