#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "robin/errors.hpp"
#include "robin/interval_spectrum.hpp"

using namespace robin;

namespace {

double rel_err(double a, long double b) {
  return static_cast<double>(std::fabs((a - b) / b));
}

// Five-point central difference, used as an independent derivative oracle.
double fd_derivative(const IntervalEigenvalue& m, double x) {
  const double s = 1e-3;
  return (-eval_mode(m, x + 2 * s) + 8 * eval_mode(m, x + s) - 8 * eval_mode(m, x - s) +
          eval_mode(m, x - 2 * s)) /
         (12 * s);
}

}  // namespace

TEST_CASE("robin parameter validation and regimes") {
  CHECK_THROWS_AS(RobinParam(0.0), std::invalid_argument);
  CHECK_THROWS_AS(RobinParam(0.5), std::invalid_argument);
  CHECK_THROWS_AS(RobinParam(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
  CHECK(RobinParam(-0.3).regime() == Regime::Shallow);
  CHECK(RobinParam(-1.0).regime() == Regime::Deep);
  CHECK(RobinParam(kCriticalH).regime() == Regime::Critical);
  CHECK(RobinParam(kCriticalH + 5e-11).regime() == Regime::Critical);
  CHECK(RobinParam(kCriticalH - 1e-8).regime() == Regime::Deep);
}

TEST_CASE("slot layout follows the regime") {
  const RobinParam shallow(-0.3), deep(-3.0), crit(kCriticalH);
  CHECK(ModeIndex::for_slot(0, deep).kind == ModeKind::Hyperbolic0);
  CHECK(ModeIndex::for_slot(1, shallow).kind == ModeKind::Trig);
  CHECK(ModeIndex::for_slot(1, deep).kind == ModeKind::Hyperbolic1);
  CHECK(ModeIndex::for_slot(1, crit).kind == ModeKind::Linear);
  for (int s = 0; s < 8; ++s) {
    CHECK((ModeIndex::for_slot(s, deep).parity == Parity::Even) == (s % 2 == 0));
  }
  CHECK_THROWS_AS(ModeIndex::for_slot(-1, deep), std::invalid_argument);
}

TEST_CASE("beta0 matches a long-double bisection oracle") {
  for (double h : {-1e-6, -0.01, -0.3, -0.6366, -1.0, -4.0, -20.0, -100.0}) {
    const auto ev = solve_beta0(RobinParam(h));
    CAPTURE(h);
    CHECK(rel_err(ev.root, oracle::beta0(h)) < 1e-12);
    CHECK(std::fabs(ev.residual) < kRootTolerance);
    CHECK(ev.value == doctest::Approx(-ev.root * ev.root / (kPi * kPi)));
  }
}

TEST_CASE("beta0 vanishes as h approaches zero") {
  double prev = solve_beta0(RobinParam(-1e-2)).root;
  for (double h : {-1e-4, -1e-6, -1e-8}) {
    const double b = solve_beta0(RobinParam(h)).root;
    CHECK(b < prev);
    prev = b;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("beta1 matches the oracle and exists only in the deep regime") {
  for (double h : {-0.64, -1.0, -4.0, -20.0}) {
    const auto ev = solve_beta1(RobinParam(h));
    CAPTURE(h);
    CHECK(rel_err(ev.root, oracle::beta1(h)) < 1e-11);
    // beta_1 rounds to -h pi for deep h; the shift keeps the strict inequality
    CHECK(ev.root <= -h * kPi);
    CHECK(ev.shift < 0.0);
  }
  CHECK_THROWS_AS(solve_beta1(RobinParam(-0.5)), RegimeError);
  CHECK_THROWS_AS(solve_beta1(RobinParam(kCriticalH)), RegimeError);
}

TEST_CASE("beta1 shrinks to zero at the critical parameter") {
  const double b = solve_beta1(RobinParam(kCriticalH - 1e-8)).root;
  CHECK(b > 0.0);
  CHECK(b < 1e-3);
}

TEST_CASE("beta0^2 - beta1^2 just below -2/pi") {
  const RobinParam h(kCriticalH - 1e-8);
  const double b0 = solve_beta0(h).root;
  const double b1 = solve_beta1(h).root;
  const long double ob0 = oracle::beta0(h.value());
  const long double ob1 = oracle::beta1(h.value());
  CHECK(b0 * b0 - b1 * b1 == doctest::Approx(static_cast<double>(ob0 * ob0 - ob1 * ob1)));
  CHECK(b0 * b0 - b1 * b1 == doctest::Approx(5.7569).epsilon(1e-4));
}

TEST_CASE("deep hyperbolic roots hug -h pi") {
  const double h = -20.0;
  const auto b0 = solve_beta0(RobinParam(h));
  const auto b1 = solve_beta1(RobinParam(h));
  CHECK(b0.shift > 0.0);
  CHECK(b0.root >= -h * kPi);
  CHECK(b0.root < -h * kPi * (1 + 1e-3));
  CHECK(b0.root >= b1.root);
  const double e = std::exp(h * kPi);
  // leading terms of x = c +- 2x e^{-2x}
  CHECK(b0.shift == doctest::Approx(-2 * h * kPi * e).epsilon(1e-10));
  CHECK(b1.shift == doctest::Approx(2 * h * kPi * e).epsilon(1e-10));
  CHECK(b0.shift - b1.shift == doctest::Approx(-4 * h * kPi * e).epsilon(1e-10));
}

TEST_CASE("beta0 exceeds beta1 throughout the deep regime") {
  for (double h = -0.65; h > -60; h *= 1.3) {
    const RobinParam p(h);
    CAPTURE(h);
    CHECK(solve_beta0(p).shift > solve_beta1(p).shift);
    CHECK(solve_beta0(p).root >= solve_beta1(p).root);
  }
}

TEST_CASE("alpha_p matches the combined-equation oracle") {
  for (double h : {-1e-3, -0.3, -0.6, -1.0, -4.0, -30.0, -500.0}) {
    for (int p = 1; p <= 9; ++p) {
      if (p == 1 && h < kCriticalH) continue;
      CAPTURE(h);
      CAPTURE(p);
      const auto ev = solve_alpha(p, RobinParam(h));
      CHECK(rel_err(ev.root, oracle::alpha(p, h)) < 1e-12);
      CHECK(ev.root > (p - 1) * kPi);
      CHECK(ev.root < p * kPi);
      CHECK(std::fabs(ev.residual) < kRootTolerance);
      CHECK(std::fabs(combined_alpha_residual(ev.root, h)) < 1e-12);
    }
  }
}

TEST_CASE("alpha_1 is unavailable at and below -2/pi") {
  CHECK_THROWS_AS(solve_alpha(1, RobinParam(-1.0)), RegimeError);
  CHECK_THROWS_AS(solve_alpha(1, RobinParam(kCriticalH)), RegimeError);
  CHECK_THROWS_AS(solve_alpha(0, RobinParam(-1.0)), std::invalid_argument);
}

TEST_CASE("alpha_p tends to p pi as h approaches zero") {
  for (int p = 1; p <= 5; ++p) {
    CHECK(solve_alpha(p, RobinParam(-1e-9)).root == doctest::Approx(p * kPi).epsilon(1e-8));
  }
}

TEST_CASE("alpha_1 tends to zero at the critical parameter") {
  const double a = solve_alpha(1, RobinParam(kCriticalH + 1e-8)).root;
  CHECK(a > 0.0);
  CHECK(a < 1e-3);
}

TEST_CASE("alpha_p is increasing in h") {
  for (int p = 2; p <= 7; ++p) {
    double prev = -1.0;
    for (double h = -50.0; h < -1e-3; h *= 0.8) {
      const double a = solve_alpha(p, RobinParam(h)).root;
      CHECK(a >= prev);
      prev = a;
    }
  }
}

TEST_CASE("asymptotic expansion: direct substitution") {
  const auto v = alpha_asymptotic(1, RobinParam(-10.0), 1);
  CHECK(v.value == doctest::Approx(kPi + 0.2).epsilon(1e-15));
  CHECK(alpha_asymptotic(2, RobinParam(-10.0), 0).value == doctest::Approx(2 * kPi));
  CHECK_THROWS_AS(alpha_asymptotic(1, RobinParam(-0.5), 1), std::invalid_argument);
  CHECK_THROWS_AS(alpha_asymptotic(1, RobinParam(-5.0), 4), std::invalid_argument);
  CHECK_THROWS_AS(alpha_asymptotic(0, RobinParam(-5.0), 1), std::invalid_argument);
}

TEST_CASE("third coefficient agrees with a numerical estimate") {
  // h^3 (alpha - p pi - mu1/h - mu2/h^2) = mu3 + O(1/h); Richardson in h.
  for (int p = 1; p <= 3; ++p) {
    const auto mu = alpha_expansion_coefficients(p);
    auto est = [&](long double h) {
      const long double a = oracle::alpha(p + 1, h);
      return (a - p * oracle::kPiL - mu.mu1 / h - mu.mu2 / (h * h)) * h * h * h;
    };
    const long double e1 = est(-2000.0L), e2 = est(-4000.0L);
    const double mu3 = static_cast<double>(2 * e2 - e1);
    CAPTURE(p);
    CHECK(mu3 == doctest::Approx(mu.mu3).epsilon(1e-3));
    CHECK(mu.mu1 == -2.0 * p);
    CHECK(mu.mu2 == doctest::Approx(4.0 * p / kPi));
  }
}

TEST_CASE("order-3 truncation error scales like h^-4") {
  for (int p = 1; p <= 3; ++p) {
    double prev_scaled = 0.0;
    for (double h : {-25.0, -50.0, -100.0, -200.0}) {
      const double err =
          solve_alpha(p + 1, RobinParam(h)).root - alpha_asymptotic(p, RobinParam(h), 3).value;
      const double scaled = std::fabs(err) * std::pow(h, 4);
      CAPTURE(p);
      CAPTURE(h);
      CHECK(scaled < 50.0 * p * p * p * p);
      if (prev_scaled > 0.0 && h >= -100.0) {
        CHECK(scaled / prev_scaled == doctest::Approx(1.0).epsilon(0.5));
      }
      prev_scaled = scaled;
    }
  }
}

TEST_CASE("mode normalisation and parity") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ux(-kPi / 2, kPi / 2);
  for (double h : {-0.3, -1.0, -4.0}) {
    ModeTable t(RobinParam(h), 6);
    CHECK(eval_mode(t[0], 0.0) == doctest::Approx(1.0 / std::sinh(t[0].root / 2)));
    for (int s = 0; s <= 6; ++s) {
      const double sign = t[s].mode.parity == Parity::Even ? 1.0 : -1.0;
      for (int i = 0; i < 20; ++i) {
        const double x = ux(rng);
        CHECK(std::fabs(eval_mode(t[s], -x) - sign * eval_mode(t[s], x)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("every mode satisfies the Robin condition at both ends") {
  for (double h : {-0.3, -1.0, -4.0}) {
    ModeTable t(RobinParam(h), 6);
    for (int s = 0; s <= 6; ++s) {
      double sup = 0.0;
      for (int i = 0; i <= 200; ++i) {
        sup = std::max(sup, std::fabs(eval_mode(t[s], -kPi / 2 + kPi * i / 200)));
      }
      const double b = kPi / 2;
      const double right = eval_mode_derivative(t[s], b) + h * eval_mode(t[s], b);
      const double left = -eval_mode_derivative(t[s], -b) + h * eval_mode(t[s], -b);
      CAPTURE(h);
      CAPTURE(s);
      CHECK(std::fabs(right) < kBoundaryTolerance * sup);
      CHECK(std::fabs(left) < kBoundaryTolerance * sup);
      // analytic derivative against finite differences in the interior
      CHECK(eval_mode_derivative(t[s], 0.4) == doctest::Approx(fd_derivative(t[s], 0.4)).epsilon(1e-8));
    }
  }
}

TEST_CASE("hyperbolic ratios survive overflow-scale roots") {
  const RobinParam h(-500.0);
  const auto b0 = solve_beta0(h);
  const auto b1 = solve_beta1(h);
  CHECK(b0.root > 1500.0);
  CHECK(eval_mode(b0, kPi / 2) == doctest::Approx(1.0));
  CHECK(eval_mode(b1, kPi / 2) == doctest::Approx(1.0));
  CHECK(eval_mode(b1, -kPi / 2) == doctest::Approx(-1.0));
  CHECK(std::isfinite(eval_mode(b0, 0.0)));
  CHECK(eval_mode(b0, 0.0) >= 0.0);
}

TEST_CASE("mode shapes are unnormalised eigenfunctions") {
  ModeTable t(RobinParam(-1.5), 5);
  for (int s = 0; s <= 5; ++s) {
    const auto& m = t[s];
    for (double x : {-1.2, 0.1, 0.9}) {
      const auto sh = mode_shape(m, x);
      // -u'' = lambda u with lambda = value
      CHECK(-sh.d2 == doctest::Approx(m.value * sh.value).epsilon(1e-12));
      CHECK(sh.value / eval_mode(m, x) == doctest::Approx(mode_shape(m, 0.3).value / eval_mode(m, 0.3)));
    }
  }
  const IntervalEigenvalue lin = solve_slot(1, RobinParam(kCriticalH));
  CHECK(lin.mode.kind == ModeKind::Linear);
  CHECK(lin.value == 0.0);
  CHECK(mode_shape(lin, 0.5).value == -0.5);
  CHECK(eval_mode(lin, 0.5) == -0.5);
}

TEST_CASE("mode table extends on demand") {
  ModeTable t(RobinParam(-2.0), 3);
  CHECK(t.max_slot() == 3);
  CHECK_THROWS(t[5]);
  const double a7 = t.at(7).root;
  CHECK(t.max_slot() == 7);
  CHECK(a7 == doctest::Approx(solve_alpha(7, RobinParam(-2.0)).root));
  CHECK(t[1].mode.kind == ModeKind::Hyperbolic1);
}
