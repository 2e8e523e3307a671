#pragma once

// Test-side references for nodal quantities: long-double mode shapes built
// from the bisection roots, a direct Wronskian scan, and a breadth-first
// flood fill over sign samples.

#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "oracles.hpp"

namespace oracle {

struct Shape {
  long double root = 0;
  bool hyperbolic = false;
  bool odd = false;
};

// Slot 0 is cosh, slot 1 is sinh below -2/pi, other slots alternate cos/sin.
inline Shape shape(int slot, long double h) {
  if (slot == 0) return {beta0(h), true, false};
  if (slot == 1 && h < -2 / kPiL) return {beta1(h), true, true};
  return {alpha(slot, h), false, slot % 2 == 1};
}

inline long double eval(const Shape& s, long double x) {
  const long double t = s.root * x / kPiL;
  if (s.hyperbolic) return s.odd ? std::sinh(t) : std::cosh(t);
  return s.odd ? std::sin(t) : std::cos(t);
}

// cos(theta) u_p(x) u_q(y) + sin(theta) u_p(y) u_q(x), roots solved once.
struct Phi {
  Shape a, b;
  long double c, s;

  Phi(int p, int q, long double h, long double theta)
      : a(shape(p, h)), b(shape(q, h)), c(std::cos(theta)), s(std::sin(theta)) {}
  long double operator()(long double x, long double y) const {
    return c * eval(a, x) * eval(b, y) + s * eval(a, y) * eval(b, x);
  }
};

inline long double phi(int p, int q, long double h, long double theta, long double x,
                       long double y) {
  return Phi(p, q, h, theta)(x, y);
}

// Positive zeros of W = u_0 u_q' - u_0' u_q (q even) on (0, pi/2).
inline std::vector<long double> wronskian_positive_zeros(int q, long double h) {
  const long double b = beta0(h), a = alpha(q, h);
  auto w = [&](long double x) {
    return b * std::tanh(b * x / kPiL) * std::cos(a * x / kPiL) + a * std::sin(a * x / kPiL);
  };
  std::vector<long double> out;
  const int n = 20000;
  long double lo = kPiL / 2 / n;
  for (int i = 2; i < n; ++i) {
    const long double hi = kPiL / 2 * i / n;
    if ((w(lo) < 0) != (w(hi) < 0)) out.push_back(bisect(w, lo, hi));
    lo = hi;
  }
  return out;
}

// Connected components of {f > 0} and {f <= 0} sampled at cell centres of an
// n x n partition of the square, 4-connectivity. Even n keeps the samples off
// the coordinate axes, which are nodal lines for odd-odd pairs.
inline int flood_fill_domains(const std::function<long double(long double, long double)>& f,
                              int n) {
  std::vector<signed char> sign(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const long double x = -kPiL / 2 + (i + 0.5L) * kPiL / n;
      const long double y = -kPiL / 2 + (j + 0.5L) * kPiL / n;
      sign[j * n + i] = f(x, y) > 0 ? 1 : -1;
    }
  }
  std::vector<bool> seen(sign.size(), false);
  int count = 0;
  for (std::size_t s = 0; s < sign.size(); ++s) {
    if (seen[s]) continue;
    ++count;
    std::queue<std::size_t> todo;
    todo.push(s);
    seen[s] = true;
    while (!todo.empty()) {
      const std::size_t c = todo.front();
      todo.pop();
      const int i = static_cast<int>(c % n), j = static_cast<int>(c / n);
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const int a = i + di[k], b = j + dj[k];
        if (a < 0 || b < 0 || a >= n || b >= n) continue;
        const std::size_t nb = static_cast<std::size_t>(b) * n + a;
        if (!seen[nb] && sign[nb] == sign[c]) {
          seen[nb] = true;
          todo.push(nb);
        }
      }
    }
  }
  return count;
}

}  // namespace oracle
