#pragma once

// One-dimensional Robin eigenproblem on (-pi/2, pi/2):
//
//   -u'' = lambda u,   -u'(-pi/2) + h u(-pi/2) = 0,   u'(pi/2) + h u(pi/2) = 0
//
// for h < 0. Modes are addressed by "slot": slot 0 is the even hyperbolic mode
// (beta_0), slot 1 is the odd trigonometric mode alpha_1 for -2/pi < h < 0 and
// the odd hyperbolic mode beta_1 for h < -2/pi, and slot p >= 2 is alpha_p.

#include <numbers>
#include <vector>

namespace robin {

inline constexpr double kPi = std::numbers::pi;
// Boundary between the shallow and deep regimes.
inline constexpr double kCriticalH = -2.0 / std::numbers::pi;
inline constexpr double kRegimeTolerance = 1e-10;
inline constexpr double kRootTolerance = 1e-12;
inline constexpr double kBoundaryTolerance = 1e-9;
// Lower end of the alpha brackets: ((p-1)pi + eps, p pi - eps).
inline constexpr double kBracketInset = 1e-9;

// Relative Newton tolerance used by the interval solvers. Defaults to
// kRootTolerance; must be positive (std::invalid_argument otherwise).
void set_root_tolerance(double tol);
double root_tolerance();

enum class Regime { Shallow, Critical, Deep };

const char* to_string(Regime r);

class RobinParam {
 public:
  // Throws std::invalid_argument unless h is finite and strictly negative.
  explicit RobinParam(double h);

  double value() const { return h_; }
  Regime regime() const;
  // Deep or Critical: slot 1 is no longer trigonometric.
  bool at_or_below_critical() const { return regime() != Regime::Shallow; }

 private:
  double h_;
};

enum class ModeKind {
  Hyperbolic0,  // cosh(beta_0 x / pi)
  Hyperbolic1,  // sinh(beta_1 x / pi), h < -2/pi
  Trig,         // cos or sin of (alpha_p x / pi)
  Linear,       // h == -2/pi exactly, slot 1: lambda = 0, u = -x
};

enum class Parity { Even, Odd };

struct ModeIndex {
  int slot = 0;
  ModeKind kind = ModeKind::Hyperbolic0;
  Parity parity = Parity::Even;

  // The mode occupying `slot` in the regime of h. Throws std::invalid_argument
  // for negative slots.
  static ModeIndex for_slot(int slot, RobinParam h);

  bool hyperbolic() const {
    return kind == ModeKind::Hyperbolic0 || kind == ModeKind::Hyperbolic1;
  }
};

struct IntervalEigenvalue {
  ModeIndex mode;
  // beta for hyperbolic modes, alpha for trigonometric ones, 0 for Linear.
  double root = 0.0;
  // -root^2/pi^2 (hyperbolic) or root^2/pi^2 (trigonometric).
  double value = 0.0;
  // Defining-equation residual at `root`, scaled by the size of its terms.
  double residual = 0.0;
  // Hyperbolic modes only: root + h pi, computed without cancellation so that
  // exponentially small differences between beta_0 and beta_1 survive.
  double shift = 0.0;
  double h = 0.0;

  // root^2 with the imaginary-slot sign convention (alpha_0 = i beta_0).
  double signed_square() const;
};

// Unique beta > 0 with (beta/2) tanh(beta/2) = -h pi / 2.
IntervalEigenvalue solve_beta0(RobinParam h);
// Unique beta in (0, -h pi) with (beta/2) coth(beta/2) = -h pi / 2. Requires
// h < -2/pi beyond the regime tolerance; throws RegimeError otherwise.
IntervalEigenvalue solve_beta1(RobinParam h);
// alpha_p in ((p-1) pi, p pi). p = 1 requires -2/pi < h < 0.
IntervalEigenvalue solve_alpha(int p, RobinParam h);
// Whatever mode lives in `slot` for this h (including the Linear mode at the
// critical parameter).
IntervalEigenvalue solve_slot(int slot, RobinParam h);

// Residual of 2 a cos(a)/(h pi) + (1 - a^2/(h^2 pi^2)) sin(a), the combined
// form of the even and odd trigonometric equations.
double combined_alpha_residual(double alpha, double h);

struct AsymptoticCoefficients {
  double mu1;
  double mu2;
  double mu3;
};

// alpha_{p+1}(h) = p pi + mu1/h + mu2/h^2 + mu3/h^3 + O(h^-4) as h -> -inf.
AsymptoticCoefficients alpha_expansion_coefficients(int p);

struct AsymptoticEval {
  int p = 0;  // expansion of alpha_{p+1}
  double h = 0.0;
  int order = 0;
  double value = 0.0;
};

// Truncated large-|h| expansion of alpha_{p+1}. Requires p >= 1, h < -1 and
// 0 <= order <= 3.
AsymptoticEval alpha_asymptotic(int p, RobinParam h, int order);

// Interval eigenfunction with the normalisations
//   cosh(b x/pi)/sinh(b/2), sinh(b x/pi)/cosh(b/2),
//   cos(a x/pi)/sin(a/2) (even), sin(a x/pi)/cos(a/2) (odd), -x (Linear).
// Hyperbolic ratios switch to log space when the arguments exceed 700.
double eval_mode(const IntervalEigenvalue& mode, double x);
double eval_mode_derivative(const IntervalEigenvalue& mode, double x);
double eval_mode(ModeIndex mode, RobinParam h, double x);

// Unnormalised mode shape (cosh, sinh, cos, sin, -x) and its first two
// derivatives. These are the building blocks of square eigenfunctions.
struct ShapeValue {
  double value;
  double d1;
  double d2;
};
ShapeValue mode_shape(const IntervalEigenvalue& mode, double x);

// Roots for slots 0..max_slot at a single h.
class ModeTable {
 public:
  ModeTable(RobinParam h, int max_slot);

  RobinParam param() const { return h_; }
  int max_slot() const { return static_cast<int>(modes_.size()) - 1; }
  // Extends the table on demand.
  const IntervalEigenvalue& operator[](int slot) const;
  const IntervalEigenvalue& at(int slot);

 private:
  RobinParam h_;
  std::vector<IntervalEigenvalue> modes_;
};

}  // namespace robin
