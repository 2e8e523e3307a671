#pragma once

#include <functional>
#include <optional>

namespace robin {

struct Bracket {
  double lo;
  double hi;
};

struct RootOptions {
  // Bisection runs until the bracket is narrower than this, then Newton takes
  // over.
  double bisection_width = 1e-6;
  // Relative step size at which Newton is considered converged.
  double rel_tol = 1e-12;
  int max_iterations = 400;
};

// Safeguarded Newton on a sign-changing bracket. `f` must have opposite signs
// at the endpoints; `df` is its derivative. Newton steps that leave the
// current bracket are replaced by bisection steps. Throws NonConvergence when
// the iteration cap is reached.
double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, Bracket b,
                       const RootOptions& opts = {});

// Pure bisection to an absolute width. Used where no derivative is available
// (eigencurve crossings, angle sweeps).
double bisect(const std::function<double(double)>& f, Bracket b, double abs_tol,
              int max_iterations = 200);

// True if f(lo) and f(hi) have strictly opposite signs or one is zero.
bool brackets_root(double f_lo, double f_hi);

}  // namespace robin
