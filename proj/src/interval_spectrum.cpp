#include "robin/interval_spectrum.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "robin/errors.hpp"
#include "robin/root_finding.hpp"

namespace robin {

namespace {

constexpr double kLogSpaceThreshold = 700.0;
// Above this half-parameter the hyperbolic roots are refined through their
// exponentially small offset from -h pi.
constexpr double kShiftRefineThreshold = 8.0;

std::string describe(double h) {
  std::ostringstream s;
  s.precision(17);
  s << h;
  return s.str();
}

std::atomic<double> g_root_tolerance{kRootTolerance};

RootOptions root_options() {
  RootOptions o;
  o.bisection_width = 1e-6;
  o.rel_tol = g_root_tolerance.load();
  return o;
}

// Offset d with x = c + d solving x tanh x = c (even) or x coth x = c (odd).
// The fixed-point map contracts by ~4x e^{-2x}, so a handful of iterations
// reach full relative precision.
double hyperbolic_offset(double c, bool odd) {
  double d = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double x = c + d;
    const double e = std::exp(-2.0 * x);
    const double next =
        odd ? -2.0 * x * e / (1.0 - e) : 2.0 * x * e / (1.0 + e);
    if (next == d || std::fabs(next - d) <= 1e-17 * std::fabs(next)) {
      return next;
    }
    d = next;
  }
  return d;
}

IntervalEigenvalue make_trig(ModeIndex mode, double alpha, double h,
                             double residual) {
  IntervalEigenvalue ev;
  ev.mode = mode;
  ev.root = alpha;
  ev.value = alpha * alpha / (kPi * kPi);
  ev.residual = residual;
  ev.h = h;
  return ev;
}

// (cosh a)/(sinh b), (sinh a)/(cosh b) etc. for a >= 0, b > 0, evaluated in
// log space when either argument is large.
double hyperbolic_ratio(double a, bool num_sinh, double b, bool den_sinh) {
  if (std::max(a, b) <= kLogSpaceThreshold) {
    const double num = num_sinh ? std::sinh(a) : std::cosh(a);
    const double den = den_sinh ? std::sinh(b) : std::cosh(b);
    return num / den;
  }
  const double ea = std::exp(-2.0 * a);
  const double eb = std::exp(-2.0 * b);
  const double num = num_sinh ? (1.0 - ea) : (1.0 + ea);
  const double den = den_sinh ? (1.0 - eb) : (1.0 + eb);
  return std::exp(a - b) * num / den;
}

}  // namespace

void set_root_tolerance(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw std::invalid_argument("root tolerance must be positive");
  }
  g_root_tolerance.store(tol);
}

double root_tolerance() { return g_root_tolerance.load(); }

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Shallow:
      return "shallow";
    case Regime::Critical:
      return "critical";
    case Regime::Deep:
      return "deep";
  }
  return "?";
}

RobinParam::RobinParam(double h) : h_(h) {
  if (!std::isfinite(h) || h >= 0.0) {
    throw std::invalid_argument("Robin parameter must be finite and negative, got " +
                                describe(h));
  }
}

Regime RobinParam::regime() const {
  if (std::fabs(h_ - kCriticalH) <= kRegimeTolerance) return Regime::Critical;
  return h_ > kCriticalH ? Regime::Shallow : Regime::Deep;
}

ModeIndex ModeIndex::for_slot(int slot, RobinParam h) {
  if (slot < 0) throw std::invalid_argument("mode slot must be non-negative");
  ModeIndex m;
  m.slot = slot;
  m.parity = slot % 2 == 0 ? Parity::Even : Parity::Odd;
  if (slot == 0) {
    m.kind = ModeKind::Hyperbolic0;
  } else if (slot == 1) {
    switch (h.regime()) {
      case Regime::Shallow:
        m.kind = ModeKind::Trig;
        break;
      case Regime::Critical:
        m.kind = ModeKind::Linear;
        break;
      case Regime::Deep:
        m.kind = ModeKind::Hyperbolic1;
        break;
    }
  } else {
    m.kind = ModeKind::Trig;
  }
  return m;
}

double IntervalEigenvalue::signed_square() const {
  const double sq = root * root;
  return mode.hyperbolic() ? -sq : sq;
}

IntervalEigenvalue solve_beta0(RobinParam param) {
  const double h = param.value();
  const double c = -h * kPi / 2.0;
  auto f = [c](double b) { return 0.5 * b * std::tanh(0.5 * b) - c; };
  auto df = [](double b) {
    const double t = std::tanh(0.5 * b);
    return 0.5 * t + 0.25 * b * (1.0 - t * t);
  };
  Bracket br{0.0, 50.0};
  if (h < kCriticalH) {
    br = {std::max(1e-12, -h * kPi * (1.0 - 1e-12)), -h * kPi + 40.0};
  }
  double beta = solve_bracketed(f, df, br, root_options());

  IntervalEigenvalue ev;
  ev.mode = ModeIndex::for_slot(0, param);
  ev.h = h;
  if (c >= kShiftRefineThreshold) {
    const double d = hyperbolic_offset(c, false);
    ev.shift = 2.0 * d;
    beta = 2.0 * c + ev.shift;
  } else {
    ev.shift = beta + h * kPi;
  }
  ev.root = beta;
  ev.value = -beta * beta / (kPi * kPi);
  ev.residual = f(beta) / std::max(1.0, c);
  return ev;
}

IntervalEigenvalue solve_beta1(RobinParam param) {
  const double h = param.value();
  if (param.regime() != Regime::Deep) {
    throw RegimeError("beta_1 exists only for h < -2/pi; got h = " + describe(h));
  }
  const double c = -h * kPi / 2.0;
  auto x_coth = [](double x) { return x == 0.0 ? 1.0 : x / std::tanh(x); };
  auto f = [&](double b) { return x_coth(0.5 * b) - c; };
  auto df = [](double b) {
    const double x = 0.5 * b;
    if (x < 1e-4) return x / 3.0;
    const double s = std::sinh(x);
    return 0.5 * (1.0 / std::tanh(x) - x / (s * s));
  };
  double beta = solve_bracketed(f, df, {0.0, -h * kPi}, root_options());

  IntervalEigenvalue ev;
  ev.mode = ModeIndex::for_slot(1, param);
  ev.h = h;
  if (c >= kShiftRefineThreshold) {
    const double d = hyperbolic_offset(c, true);
    ev.shift = 2.0 * d;
    beta = 2.0 * c + ev.shift;
  } else {
    ev.shift = beta + h * kPi;
  }
  ev.root = beta;
  ev.value = -beta * beta / (kPi * kPi);
  ev.residual = f(beta) / std::max(1.0, c);
  return ev;
}

IntervalEigenvalue solve_alpha(int p, RobinParam param) {
  const double h = param.value();
  if (p < 1) throw std::invalid_argument("alpha_p requires p >= 1");
  if (p == 1 && param.regime() != Regime::Shallow) {
    throw RegimeError("alpha_1 exists only for -2/pi < h < 0; got h = " +
                      describe(h));
  }
  const double hp = h * kPi;
  const bool even = p % 2 == 0;
  auto f = [=](double a) {
    const double s = std::sin(0.5 * a);
    const double co = std::cos(0.5 * a);
    return even ? a * s - hp * co : a * co + hp * s;
  };
  auto df = [=](double a) {
    const double s = std::sin(0.5 * a);
    const double co = std::cos(0.5 * a);
    return even ? s + 0.5 * a * co + 0.5 * hp * s
                : co - 0.5 * a * s + 0.5 * hp * co;
  };

  const double left = (p - 1) * kPi;
  const double right = p * kPi;
  Bracket br{left + kBracketInset, right - kBracketInset};
  if (!brackets_root(f(br.lo), f(br.hi))) {
    // The root has drifted within the inset of an endpoint (|h| tiny or huge).
    const double lo = p == 1 ? 1e-15 : std::nextafter(left, right);
    br = {lo, std::nextafter(right, left)};
    if (!brackets_root(f(br.lo), f(br.hi))) {
      throw NonConvergence("alpha_" + std::to_string(p) +
                           ": no sign change in bracket for h = " + describe(h));
    }
  }
  const double alpha = solve_bracketed(f, df, br, root_options());
  const double residual = f(alpha) / (alpha + std::fabs(hp));
  return make_trig(ModeIndex::for_slot(p, param), alpha, h, residual);
}

IntervalEigenvalue solve_slot(int slot, RobinParam h) {
  const ModeIndex m = ModeIndex::for_slot(slot, h);
  switch (m.kind) {
    case ModeKind::Hyperbolic0:
      return solve_beta0(h);
    case ModeKind::Hyperbolic1:
      return solve_beta1(h);
    case ModeKind::Trig:
      return solve_alpha(slot, h);
    case ModeKind::Linear: {
      IntervalEigenvalue ev;
      ev.mode = m;
      ev.h = h.value();
      return ev;
    }
  }
  throw std::logic_error("unreachable mode kind");
}

double combined_alpha_residual(double alpha, double h) {
  const double hp = h * kPi;
  const double t1 = 2.0 * alpha * std::cos(alpha) / hp;
  const double t2 = (1.0 - alpha * alpha / (hp * hp)) * std::sin(alpha);
  const double scale = 2.0 * alpha / std::fabs(hp) + 1.0 + alpha * alpha / (hp * hp);
  return (t1 + t2) / scale;
}

AsymptoticCoefficients alpha_expansion_coefficients(int p) {
  const double pd = p;
  return {-2.0 * pd, 4.0 * pd / kPi,
          2.0 * pd * pd * pd / 3.0 - 8.0 * pd / (kPi * kPi)};
}

AsymptoticEval alpha_asymptotic(int p, RobinParam param, int order) {
  const double h = param.value();
  if (p < 1) throw std::invalid_argument("expansion index p must be >= 1");
  if (h >= -1.0) throw std::invalid_argument("expansion requires h < -1");
  if (order < 0 || order > 3) throw std::invalid_argument("order must be in 0..3");
  const AsymptoticCoefficients mu = alpha_expansion_coefficients(p);
  const double inv = 1.0 / h;
  double value = p * kPi;
  if (order >= 1) value += mu.mu1 * inv;
  if (order >= 2) value += mu.mu2 * inv * inv;
  if (order >= 3) value += mu.mu3 * inv * inv * inv;
  return {p, h, order, value};
}

double eval_mode(const IntervalEigenvalue& m, double x) {
  const double r = m.root;
  switch (m.mode.kind) {
    case ModeKind::Hyperbolic0:
      return hyperbolic_ratio(std::fabs(r * x / kPi), false, 0.5 * r, true);
    case ModeKind::Hyperbolic1: {
      const double v = hyperbolic_ratio(std::fabs(r * x / kPi), true, 0.5 * r, false);
      return x < 0.0 ? -v : v;
    }
    case ModeKind::Trig:
      return m.mode.parity == Parity::Even ? std::cos(r * x / kPi) / std::sin(0.5 * r)
                                           : std::sin(r * x / kPi) / std::cos(0.5 * r);
    case ModeKind::Linear:
      return -x;
  }
  return 0.0;
}

double eval_mode_derivative(const IntervalEigenvalue& m, double x) {
  const double r = m.root;
  const double k = r / kPi;
  switch (m.mode.kind) {
    case ModeKind::Hyperbolic0: {
      const double v = hyperbolic_ratio(std::fabs(r * x / kPi), true, 0.5 * r, true);
      return k * (x < 0.0 ? -v : v);
    }
    case ModeKind::Hyperbolic1:
      return k * hyperbolic_ratio(std::fabs(r * x / kPi), false, 0.5 * r, false);
    case ModeKind::Trig:
      return m.mode.parity == Parity::Even ? -k * std::sin(k * x) / std::sin(0.5 * r)
                                           : k * std::cos(k * x) / std::cos(0.5 * r);
    case ModeKind::Linear:
      return -1.0;
  }
  return 0.0;
}

double eval_mode(ModeIndex mode, RobinParam h, double x) {
  const ModeIndex actual = ModeIndex::for_slot(mode.slot, h);
  if (actual.kind != mode.kind) {
    throw RegimeError("mode kind does not exist for h = " + describe(h.value()));
  }
  return eval_mode(solve_slot(mode.slot, h), x);
}

ShapeValue mode_shape(const IntervalEigenvalue& m, double x) {
  const double k = m.root / kPi;
  const double t = k * x;
  switch (m.mode.kind) {
    case ModeKind::Hyperbolic0: {
      const double c = std::cosh(t);
      return {c, k * std::sinh(t), k * k * c};
    }
    case ModeKind::Hyperbolic1: {
      const double s = std::sinh(t);
      return {s, k * std::cosh(t), k * k * s};
    }
    case ModeKind::Trig:
      if (m.mode.parity == Parity::Even) {
        const double c = std::cos(t);
        return {c, -k * std::sin(t), -k * k * c};
      } else {
        const double s = std::sin(t);
        return {s, k * std::cos(t), -k * k * s};
      }
    case ModeKind::Linear:
      return {-x, -1.0, 0.0};
  }
  return {0.0, 0.0, 0.0};
}

ModeTable::ModeTable(RobinParam h, int max_slot) : h_(h) {
  modes_.reserve(static_cast<std::size_t>(max_slot) + 1);
  for (int s = 0; s <= max_slot; ++s) modes_.push_back(solve_slot(s, h));
}

const IntervalEigenvalue& ModeTable::operator[](int slot) const {
  return modes_.at(static_cast<std::size_t>(slot));
}

const IntervalEigenvalue& ModeTable::at(int slot) {
  while (static_cast<int>(modes_.size()) <= slot) {
    modes_.push_back(solve_slot(static_cast<int>(modes_.size()), h_));
  }
  return modes_[static_cast<std::size_t>(slot)];
}

}  // namespace robin
