#include "robin/nodal_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "robin/errors.hpp"
#include "robin/parallel.hpp"
#include "robin/root_finding.hpp"

namespace robin {

namespace {

constexpr double kHalfPi = 0.5 * kPi;
constexpr double kSnap = 1e-15;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t find(std::uint32_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Grid coordinate i of R, exactly symmetric about 0 and hitting +-pi/2.
double grid_coord(int i, int R) {
  return kPi * (static_cast<double>(i) / R - 0.5);
}

int sign_of(double t1, double t2) {
  const double v = t1 + t2;
  if (std::fabs(v) <= kZeroCellFactor * (std::fabs(t1) + std::fabs(t2))) return 0;
  return v > 0.0 ? 1 : -1;
}

bool even_family(PairIndex pair) {
  return pair.p == 0 && pair.q >= 4 && pair.q % 2 == 0;
}

bool negative_even_family(PairIndex pair, RobinParam h) {
  return even_family(pair) && pair_value(pair, h) < 0.0;
}

struct FamilyShapes {
  IntervalEigenvalue f;  // slot 0
  IntervalEigenvalue g;  // slot q
  double k0 = 0.0;
  double kq = 0.0;
};

FamilyShapes family(int q, RobinParam h) {
  FamilyShapes s{solve_beta0(h), solve_slot(q, h), 0.0, 0.0};
  s.k0 = s.f.root / kPi;
  s.kq = s.g.root / kPi;
  return s;
}

void check_even_q(int q) {
  if (q < 4 || q % 2 != 0) {
    throw std::invalid_argument("q must be even and at least 4, got " + std::to_string(q));
  }
}

// Candidate angles from Phi = 0, d/dx Phi = 0 and d/dy Phi = 0 at (x,y).
// use_b / use_c select the derivative conditions that apply.
double theta_from_formulas(const FamilyShapes& fs, double x, double y, bool use_b,
                           bool use_c) {
  const ShapeValue fx = scaled_shape(fs.f, x), fy = scaled_shape(fs.f, y);
  const ShapeValue gx = scaled_shape(fs.g, x), gy = scaled_shape(fs.g, y);

  struct Candidate {
    double num, den;
  };
  std::vector<Candidate> cands;
  cands.push_back({-fx.value * gy.value, fy.value * gx.value});
  if (use_b) cands.push_back({-fx.d1 * gy.value, fy.value * gx.d1});
  if (use_c) cands.push_back({-fx.value * gy.d1, fy.d1 * gx.value});

  auto mag = [&](const ShapeValue& f, double k) { return std::fabs(f.value) + std::fabs(f.d1) / k; };
  const double kmax = std::max(fs.k0, fs.kq);
  const double ref = kmax * (mag(fx, fs.k0) * mag(gy, fs.kq) + mag(fy, fs.k0) * mag(gx, fs.kq));

  std::vector<double> thetas;
  for (const auto& c : cands) {
    if (std::hypot(c.num, c.den) <= 1e-12 * ref) continue;
    thetas.push_back(reduce_theta(std::atan2(c.num, c.den)));
  }
  if (thetas.empty()) {
    throw InconsistentTheta("no angle formula is defined at (" + fmt(x) + ", " + fmt(y) + ")");
  }
  for (std::size_t a = 1; a < thetas.size(); ++a) {
    if (theta_distance(thetas[0], thetas[a]) > kThetaTolerance) {
      throw InconsistentTheta("critical angle formulas disagree at (" + fmt(x) + ", " +
                              fmt(y) + "): " + fmt(thetas[0]) + " vs " + fmt(thetas[a]));
    }
  }
  return thetas[0];
}

CriticalPoint make_point(const FamilyShapes& fs, double x, double y, double theta) {
  CriticalPoint pt;
  pt.x = x;
  pt.y = y;
  pt.theta = theta;
  const double c = std::cos(theta), s = std::sin(theta);
  const ShapeValue fx = scaled_shape(fs.f, x), fy = scaled_shape(fs.f, y);
  const ShapeValue gx = scaled_shape(fs.g, x), gy = scaled_shape(fs.g, y);
  const double m11 = c * fx.d2 * gy.value + s * fy.value * gx.d2;
  const double m22 = c * fx.value * gy.d2 + s * fy.d2 * gx.value;
  const double ref = (fs.k0 * fs.k0 + fs.kq * fs.kq) *
                     (std::fabs(c * fx.value * gy.value) + std::fabs(s * fy.value * gx.value));
  pt.m11 = m11;
  pt.trace = ref > 0.0 ? (m11 + m22) / ref : 0.0;
  pt.hessian_ok = std::fabs(m11) > 1e-8 * ref;
  return pt;
}

// Index of |v| among {0, gamma_1, gamma_2, ...}.
int zero_index(const std::vector<double>& positive, double v) {
  if (v == 0.0) return 0;
  const double a = std::fabs(v);
  for (std::size_t l = 0; l < positive.size(); ++l) {
    if (std::fabs(positive[l] - a) <= 1e-12) return static_cast<int>(l) + 1;
  }
  return -1;
}

// tan(theta(gamma_j, 0)) = beta_0 sinh(beta_0 gamma/pi)/(alpha_q sin(alpha_q gamma/pi)).
double exact_tan(const FamilyShapes& fs, double gamma) {
  return fs.f.root * std::sinh(fs.k0 * gamma) / (fs.g.root * std::sin(fs.kq * gamma));
}

// ---- boundary zeros --------------------------------------------------------

std::pair<double, double> edge_point(int edge, double t) {
  switch (edge) {
    case 0: return {t, -kHalfPi};
    case 1: return {kHalfPi, t};
    case 2: return {t, kHalfPi};
    default: return {-kHalfPi, t};
  }
}

struct EdgeSample {
  double value;
  double deriv;  // derivative along the edge
  double scale;
};

EdgeSample edge_sample(const PhiEvaluator& phi, int edge, double t) {
  const auto [x, y] = edge_point(edge, t);
  const auto d = phi.derivatives(x, y);
  double t1 = 0.0, t2 = 0.0;
  phi.terms(x, y, t1, t2);
  const bool horizontal = edge == 0 || edge == 2;
  return {d.value, horizontal ? d.dx : d.dy, std::fabs(t1) + std::fabs(t2)};
}

int edge_sign(const EdgeSample& e) {
  if (std::fabs(e.value) <= kZeroCellFactor * e.scale) return 0;
  return e.value > 0.0 ? 1 : -1;
}

struct EdgeCount {
  int zeros = 0;
  int tangencies = 0;
  std::vector<int> rho;
  std::vector<double> tangency_at;
};

EdgeCount count_edge(const PhiEvaluator& phi, int edge, int n) {
  std::vector<EdgeSample> s(static_cast<std::size_t>(n) + 1);
  std::vector<double> t(s.size());
  for (int i = 0; i <= n; ++i) {
    t[i] = grid_coord(i, n);
    s[i] = edge_sample(phi, edge, t[i]);
  }
  EdgeCount out;
  auto add = [&](int rho, double at = 0.0) {
    out.zeros += rho;
    out.rho.push_back(rho);
    if (rho == 2) {
      ++out.tangencies;
      out.tangency_at.push_back(at);
    }
  };
  int prev = -1;
  bool zeros_between = false;
  int first_zero = -1;
  int last_zero = -1;
  for (int i = 0; i <= n; ++i) {
    const int si = edge_sign(s[i]);
    if (si == 0) {
      if (i != 0 && i != n) {
        if (!zeros_between) first_zero = i;
        last_zero = i;
        zeros_between = true;
      }
      continue;
    }
    if (prev < 0) {
      // Interior zero samples before the first nonzero one (corner vanishing).
      if (zeros_between) add(1);
    } else {
      const int sp = edge_sign(s[prev]);
      if (si != sp) {
        add(1);
      } else if (zeros_between) {
        add(2, t[(first_zero + last_zero) / 2]);
      } else if ((s[prev].deriv > 0.0) != (s[i].deriv > 0.0) && s[prev].deriv != 0.0 &&
                 s[i].deriv != 0.0) {
        // Extremum between samples: a double zero or two close simple zeros.
        auto dfun = [&](double u) { return edge_sample(phi, edge, u).deriv; };
        const double tm = bisect(dfun, {t[prev], t[i]}, 1e-14 * kPi);
        const EdgeSample em = edge_sample(phi, edge, tm);
        const int sm = edge_sign(em);
        if (sm == 0) {
          add(2, tm);
        } else if (sm != si) {
          add(1);
          add(1);
        }
      }
    }
    prev = i;
    zeros_between = false;
  }
  if (zeros_between) add(1);
  return out;
}

// ---- grid labelling --------------------------------------------------------

using Pins = std::vector<std::pair<double, double>>;

constexpr double kPinTolerance = 1e-12;

bool pin_at(const Pins& pins, double x, double y) {
  for (const auto& [px, py] : pins) {
    if (std::fabs(px - x) <= kPinTolerance && std::fabs(py - y) <= kPinTolerance) return true;
  }
  return false;
}

// True if a pin lies strictly inside the axis-aligned segment (x0,y0)-(x1,y1).
bool pin_on_segment(const Pins& pins, double x0, double y0, double x1, double y1) {
  for (const auto& [px, py] : pins) {
    if (y0 == y1) {
      if (std::fabs(py - y0) <= kPinTolerance && px > x0 + kPinTolerance &&
          px < x1 - kPinTolerance) {
        return true;
      }
    } else if (std::fabs(px - x0) <= kPinTolerance && py > y0 + kPinTolerance &&
               py < y1 - kPinTolerance) {
      return true;
    }
  }
  return false;
}

// Which same-sign corner pairs connect inside the cell at dyadic level `level`.
// Corners: 0 (x0,y0), 1 (x1,y0), 2 (x0,y1), 3 (x1,y1).
unsigned cell_mask(const PhiEvaluator& phi, double x0, double x1, double y0, double y1,
                   int level, const Pins& pins) {
  const int m = 1 << level;
  const int n = m + 1;
  std::vector<std::int8_t> sg(static_cast<std::size_t>(n) * n);
  std::vector<double> xs(n), ys(n);
  for (int a = 0; a <= m; ++a) {
    xs[a] = a == m ? x1 : x0 + (x1 - x0) * a / m;
    ys[a] = a == m ? y1 : y0 + (y1 - y0) * a / m;
  }
  for (int b = 0; b <= m; ++b) {
    for (int a = 0; a <= m; ++a) {
      double t1 = 0.0, t2 = 0.0;
      phi.terms(xs[a], ys[b], t1, t2);
      sg[b * n + a] = pin_at(pins, xs[a], ys[b]) ? 0 : static_cast<std::int8_t>(sign_of(t1, t2));
    }
  }
  UnionFind uf(sg.size());
  for (int b = 0; b <= m; ++b) {
    for (int a = 0; a <= m; ++a) {
      const int id = b * n + a;
      if (sg[id] == 0) continue;
      if (a < m && sg[id + 1] == sg[id] && !pin_on_segment(pins, xs[a], ys[b], xs[a + 1], ys[b])) {
        uf.unite(id, id + 1);
      }
      if (b < m && sg[id + n] == sg[id] && !pin_on_segment(pins, xs[a], ys[b], xs[a], ys[b + 1])) {
        uf.unite(id, id + n);
      }
    }
  }
  const int corner[4] = {0, m, m * n, m * n + m};
  unsigned mask = 0;
  int bit = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b, ++bit) {
      if (sg[corner[a]] != 0 && sg[corner[a]] == sg[corner[b]] &&
          uf.find(corner[a]) == uf.find(corner[b])) {
        mask |= 1u << bit;
      }
    }
  }
  return mask;
}

unsigned resolve_cell(const PhiEvaluator& phi, double x0, double x1, double y0, double y1,
                      const Pins& pins) {
  const unsigned m1 = cell_mask(phi, x0, x1, y0, y1, 1, pins);
  const unsigned m2 = cell_mask(phi, x0, x1, y0, y1, 2, pins);
  if (m1 == m2) return m2;
  const unsigned m3 = cell_mask(phi, x0, x1, y0, y1, 3, pins);
  if (m2 == m3) return m3;
  throw Unresolved("cell [" + fmt(x0) + ", " + fmt(x1) + "] x [" + fmt(y0) + ", " + fmt(y1) +
                   "] did not stabilise under refinement");
}

// Interior critical zeros of Phi with their positions when a closed form is
// available.
int interior_critical_count(const EigenfunctionSpec& spec, bool& exact, Pins& where) {
  exact = false;
  if (spec.product_mode()) {
    exact = true;
    return spec.pair.p * spec.pair.q;
  }
  const RobinParam h(spec.h);
  if (negative_even_family(spec.pair, h)) {
    exact = true;
    where = critical_thetas(spec.pair.q, h).points_at(spec.theta);
    return static_cast<int>(where.size());
  }
  if (spec.pair.p % 2 == 1 && spec.pair.q % 2 == 1) {
    // Both axes are nodal lines; other nodal lines cross them where the normal
    // derivative vanishes too. Off-axis crossings only occur at isolated theta.
    const PhiEvaluator phi(spec);
    where.emplace_back(0.0, 0.0);
    constexpr int kScan = 4096;
    for (int axis = 0; axis < 2; ++axis) {
      auto normal = [&](double t) {
        return axis == 0 ? phi.derivatives(t, 0.0).dy : phi.derivatives(0.0, t).dx;
      };
      double prev = normal(kHalfPi / kScan);
      for (int i = 2; i < kScan; ++i) {
        const double t1 = kHalfPi * (i - 1) / kScan, t2 = kHalfPi * i / kScan;
        const double cur = normal(t2);
        if (cur != 0.0 && prev != 0.0 && (cur > 0.0) != (prev > 0.0)) {
          const double r = bisect(normal, {t1, t2}, 1e-15);
          if (axis == 0) {
            where.emplace_back(r, 0.0);
            where.emplace_back(-r, 0.0);
          } else {
            where.emplace_back(0.0, r);
            where.emplace_back(0.0, -r);
          }
        }
        prev = cur;
      }
    }
    return static_cast<int>(where.size());
  }
  return 0;
}

}  // namespace

double reduce_theta(double theta) {
  double t = std::fmod(theta, kPi);
  if (t < 0.0) t += kPi;
  if (t >= kPi) t -= kPi;
  return t;
}

double theta_distance(double a, double b) {
  const double d = std::fabs(reduce_theta(a) - reduce_theta(b));
  return std::min(d, kPi - d);
}

EigenfunctionSpec EigenfunctionSpec::make(int p, int q, RobinParam h, double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
  EigenfunctionSpec s;
  s.pair = PairIndex::canonical(p, q);
  s.h = h.value();
  if (s.pair.diagonal()) {
    s.theta = 0.25 * kPi;
  } else {
    s.theta = reduce_theta(p <= q ? theta : kHalfPi - theta);
  }
  return s;
}

bool EigenfunctionSpec::product_mode() const {
  return pair.diagonal() || std::fabs(std::sin(theta)) < kSnap ||
         std::fabs(std::cos(theta)) < kSnap;
}

ShapeValue scaled_shape(const IntervalEigenvalue& m, double x) {
  if (!m.mode.hyperbolic()) return mode_shape(m, x);
  const double k = m.root / kPi;
  const double a = std::fabs(k * x);
  const double big = 0.5 * m.root;
  const double base = std::exp(a - big) / (1.0 + std::exp(-2.0 * big));
  const double ch = base * (1.0 + std::exp(-2.0 * a));
  double sh = base * -std::expm1(-2.0 * a);
  if (x < 0.0) sh = -sh;
  if (m.mode.kind == ModeKind::Hyperbolic0) return {ch, k * sh, k * k * ch};
  return {sh, k * ch, k * k * sh};
}

PhiEvaluator::PhiEvaluator(const EigenfunctionSpec& spec)
    : spec_(spec),
      mp_(solve_slot(spec.pair.p, RobinParam(spec.h))),
      mq_(solve_slot(spec.pair.q, RobinParam(spec.h))) {
  c_ = std::cos(spec.theta);
  s_ = std::sin(spec.theta);
  if (std::fabs(c_) < kSnap) c_ = 0.0;
  if (std::fabs(s_) < kSnap) s_ = 0.0;
}

void PhiEvaluator::terms(double x, double y, double& t1, double& t2) const {
  t1 = c_ * scaled_shape(mp_, x).value * scaled_shape(mq_, y).value;
  t2 = s_ * scaled_shape(mp_, y).value * scaled_shape(mq_, x).value;
}

double PhiEvaluator::operator()(double x, double y) const {
  double t1 = 0.0, t2 = 0.0;
  terms(x, y, t1, t2);
  return t1 + t2;
}

bool PhiEvaluator::on_nodal_set(double x, double y) const {
  double t1 = 0.0, t2 = 0.0;
  terms(x, y, t1, t2);
  return sign_of(t1, t2) == 0;
}

PhiEvaluator::Derivatives PhiEvaluator::derivatives(double x, double y) const {
  const ShapeValue px = scaled_shape(mp_, x), py = scaled_shape(mp_, y);
  const ShapeValue qx = scaled_shape(mq_, x), qy = scaled_shape(mq_, y);
  Derivatives d;
  d.value = c_ * px.value * qy.value + s_ * py.value * qx.value;
  d.dx = c_ * px.d1 * qy.value + s_ * py.value * qx.d1;
  d.dy = c_ * px.value * qy.d1 + s_ * py.d1 * qx.value;
  d.dxx = c_ * px.d2 * qy.value + s_ * py.value * qx.d2;
  d.dxy = c_ * px.d1 * qy.d1 + s_ * py.d1 * qx.d1;
  d.dyy = c_ * px.value * qy.d2 + s_ * py.d2 * qx.value;
  return d;
}

double eval_phi(const EigenfunctionSpec& spec, double x, double y) {
  return PhiEvaluator(spec)(x, y);
}

// ---- Wronskian -------------------------------------------------------------

std::vector<double> WronskianZeros::positive() const {
  std::vector<double> out;
  for (double z : zeros) {
    if (z > 0.0) out.push_back(z);
  }
  return out;
}

double wronskian(int q, RobinParam h, double x) {
  const FamilyShapes fs = family(q, h);
  const double b = fs.f.root, a = fs.g.root;
  return b * std::sinh(b * x / kPi) * std::cos(a * x / kPi) +
         a * std::cosh(b * x / kPi) * std::sin(a * x / kPi);
}

WronskianZeros wronskian_zeros(int q, RobinParam h) {
  check_even_q(q);
  const FamilyShapes fs = family(q, h);
  const double b = fs.f.root, a = fs.g.root;
  // W / cosh(beta_0 x/pi).
  auto w = [&](double x) {
    return b * std::tanh(b * x / kPi) * std::cos(a * x / kPi) + a * std::sin(a * x / kPi);
  };
  auto dw = [&](double x) {
    const double th = std::tanh(b * x / kPi);
    return b * b / kPi * (1.0 - th * th) * std::cos(a * x / kPi) -
           b * a / kPi * th * std::sin(a * x / kPi) + a * a / kPi * std::cos(a * x / kPi);
  };

  WronskianZeros out;
  out.q = q;
  out.h = h.value();
  std::vector<double> pos;
  const int m = (q - 2) / 2;
  for (int l = 1; l <= m; ++l) {
    const Bracket br{(2 * l - 1) * kPi * kPi / (2.0 * a), l * kPi * kPi / a};
    if (!brackets_root(w(br.lo), w(br.hi))) {
      throw CountMismatch("Wronskian has no sign change on localisation bracket " +
                          std::to_string(l));
    }
    pos.push_back(solve_bracketed(w, dw, br));
  }

  // Independent sign scan over (0, pi/2). W also vanishes at +-pi/2 (both
  // factors satisfy the same Robin condition), so the endpoint is excluded.
  constexpr int kScan = 8192;
  int changes = 0;
  double prev = w(kHalfPi / kScan);
  for (int i = 2; i < kScan; ++i) {
    const double cur = w(kHalfPi * i / kScan);
    if ((cur > 0.0) != (prev > 0.0) && cur != 0.0) ++changes;
    prev = cur;
  }
  if (changes != m) {
    throw CountMismatch("Wronskian sign scan found " + std::to_string(2 * changes + 1) +
                        " zeros, expected " + std::to_string(q - 1));
  }

  for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.zeros.push_back(-*it);
  out.zeros.push_back(0.0);
  out.zeros.insert(out.zeros.end(), pos.begin(), pos.end());
  return out;
}

// ---- critical zeros --------------------------------------------------------

const char* to_string(CriticalKind k) {
  switch (k) {
    case CriticalKind::AxisX: return "axis-x";
    case CriticalKind::AxisY: return "axis-y";
    case CriticalKind::Diagonal: return "diagonal";
    case CriticalKind::Grid: return "grid";
    case CriticalKind::Boundary: return "boundary";
  }
  return "?";
}

std::vector<double> CriticalZeroSet::thetas() const {
  std::vector<double> all;
  for (const auto& p : points) all.push_back(p.theta);
  for (const auto& p : boundary) all.push_back(p.theta);
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double t : all) {
    if (out.empty() || theta_distance(out.back(), t) > 1e-12) out.push_back(t);
  }
  if (out.size() > 1 && theta_distance(out.front(), out.back()) <= 1e-12) out.pop_back();
  return out;
}

int CriticalZeroSet::count_at(double theta) const {
  return static_cast<int>(points_at(theta).size());
}

std::vector<std::pair<double, double>> CriticalZeroSet::points_at(double theta) const {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : points) {
    if (theta_distance(p.theta, theta) <= 1e-9) out.emplace_back(p.x, p.y);
  }
  return out;
}

double critical_theta_at(int q, RobinParam h, double x, double y) {
  check_even_q(q);
  return theta_from_formulas(family(q, h), x, y, true, true);
}

CriticalZeroSet critical_thetas(int q, RobinParam h) {
  check_even_q(q);
  if (!(pair_value(PairIndex{0, q}, h) < 0.0)) {
    throw RegimeError("lambda_(0," + std::to_string(q) + ") is not negative at h = " +
                      fmt(h.value()));
  }
  const WronskianZeros wz = wronskian_zeros(q, h);
  const FamilyShapes fs = family(q, h);
  const std::vector<double> pos = wz.positive();

  CriticalZeroSet out;
  out.q = q;
  out.h = h.value();
  out.wronskian_zeros = wz.zeros;

  // Axis, diagonal and origin candidates first, then the remaining grid.
  std::vector<std::pair<double, double>> cands;
  cands.emplace_back(0.0, 0.0);
  for (double g : pos) {
    for (double sx : {1.0, -1.0}) {
      cands.emplace_back(sx * g, 0.0);
      cands.emplace_back(0.0, sx * g);
      for (double sy : {1.0, -1.0}) cands.emplace_back(sx * g, sy * g);
    }
  }
  for (double x : wz.zeros) {
    for (double y : wz.zeros) {
      if (x == 0.0 || y == 0.0 || std::fabs(x) == std::fabs(y)) continue;
      cands.emplace_back(x, y);
    }
  }

  for (const auto& [x, y] : cands) {
    double theta = 0.0;
    try {
      theta = theta_from_formulas(fs, x, y, true, true);
    } catch (const InconsistentTheta& e) {
      out.dropped.push_back(e.what());
      continue;
    }
    CriticalPoint pt = make_point(fs, x, y, theta);
    pt.i = zero_index(pos, x);
    pt.j = zero_index(pos, y);
    if (std::fabs(x) == std::fabs(y)) {
      pt.kind = CriticalKind::Diagonal;
    } else if (y == 0.0) {
      pt.kind = CriticalKind::AxisX;
    } else if (x == 0.0) {
      pt.kind = CriticalKind::AxisY;
    } else {
      pt.kind = CriticalKind::Grid;
    }
    out.points.push_back(pt);
  }

  for (double g : wz.zeros) {
    for (double e : {-kHalfPi, kHalfPi}) {
      const std::pair<double, double> pts[2] = {{g, e}, {e, g}};
      for (int a = 0; a < 2; ++a) {
        const auto [x, y] = pts[a];
        try {
          const double theta = theta_from_formulas(fs, x, y, a == 0, a == 1);
          CriticalPoint pt = make_point(fs, x, y, theta);
          pt.kind = CriticalKind::Boundary;
          pt.i = a == 0 ? zero_index(pos, g) : -1;
          pt.j = a == 0 ? -1 : zero_index(pos, g);
          out.boundary.push_back(pt);
        } catch (const InconsistentTheta& e) {
          out.dropped.push_back(e.what());
        }
      }
    }
  }
  return out;
}

ThetaAsymptotic theta_asymptotics(int q, RobinParam h, int j) {
  check_even_q(q);
  if (h.value() > -10.0) throw std::invalid_argument("theta asymptotics need h <= -10");
  if (j < 1 || j > (q - 2) / 2) throw std::invalid_argument("j out of range");
  const WronskianZeros wz = wronskian_zeros(q, h);
  const FamilyShapes fs = family(q, h);
  const double b = fs.f.root, a = fs.g.root;
  ThetaAsymptotic out;
  out.j = j;
  out.gamma = wz.positive()[j - 1];
  const double sgn = (j % 2 == 1) ? 1.0 : -1.0;
  out.tan_theta = sgn * b / (2.0 * a * std::cos(std::atan(a / b))) * std::exp(b * out.gamma / kPi);
  out.tan_theta_exact = exact_tan(fs, out.gamma);
  return out;
}

double sigma_jk(int q, RobinParam h, int j, int k) {
  check_even_q(q);
  const int m = (q - 2) / 2;
  if (j < 1 || j > m || k < 1 || k > m) throw std::invalid_argument("j, k out of range");
  const WronskianZeros wz = wronskian_zeros(q, h);
  const FamilyShapes fs = family(q, h);
  const std::vector<double> pos = wz.positive();
  const double sgn = ((j - k) % 2 == 0) ? 1.0 : -1.0;
  return std::log(sgn * exact_tan(fs, pos[j - 1]) / exact_tan(fs, pos[k - 1]));
}

double sigma_jk_leading(int q, RobinParam h, int j, int k) {
  const FamilyShapes fs = family(q, h);
  return fs.f.root / fs.g.root * (j - k) * kPi;
}

bool sigma_ordering_holds(int q, RobinParam h) {
  check_even_q(q);
  const int m = (q - 2) / 2;
  for (int j = 1; j <= m; ++j) {
    for (int k = j + 1; k <= m; ++k) {
      for (int jp = j + 1; jp + (k - j) <= m; ++jp) {
        const int kp = jp + (k - j);
        if (!(sigma_jk(q, h, j, k) - sigma_jk(q, h, jp, kp) > 0.0)) return false;
      }
    }
  }
  return true;
}

double empirical_distinct_threshold(int q, double h_floor, double step) {
  check_even_q(q);
  const double start = tilde_h(q);
  // Critical angles of distinct (|x|,|y|) classes off the diagonal must differ
  // from each other and from 3pi/4. Deep angles crowd 0 and pi/2 beyond double
  // resolution, so they are compared through sign and log|tan| of
  //   tan theta = -cosh(b x/pi) cos(a y/pi) / (cosh(b y/pi) cos(a x/pi)).
  auto log_cosh = [](double z) {
    z = std::fabs(z);
    return z + std::log1p(std::exp(-2.0 * z)) - std::log(2.0);
  };
  auto distinct = [&](double h) {
    const RobinParam hp(h);
    if (!sigma_ordering_holds(q, hp)) return false;
    const FamilyShapes fs = family(q, hp);
    const double b = fs.f.root / kPi, a = fs.g.root / kPi;
    const CriticalZeroSet cs = critical_thetas(q, hp);
    std::vector<std::pair<int, double>> tans = {{-1, 0.0}};
    for (const auto& p : cs.points) {
      if (p.kind == CriticalKind::Diagonal || p.x < 0.0 || p.y < 0.0) continue;
      const double cx = std::cos(a * p.x), cy = std::cos(a * p.y);
      const int sign = (cx * cy > 0.0) ? -1 : 1;
      tans.emplace_back(sign, log_cosh(b * p.x) - log_cosh(b * p.y) + std::log(std::fabs(cy)) -
                                  std::log(std::fabs(cx)));
    }
    for (std::size_t i = 0; i < tans.size(); ++i) {
      for (std::size_t j = i + 1; j < tans.size(); ++j) {
        if (tans[i].first == tans[j].first && std::fabs(tans[i].second - tans[j].second) <= 1e-12) {
          return false;
        }
      }
    }
    return true;
  };
  double threshold = std::numeric_limits<double>::quiet_NaN();
  for (double h = h_floor; h < start; h += step) {
    if (!distinct(h)) break;
    threshold = h;
  }
  return threshold;
}

// ---- boundary zeros, Euler, domains ----------------------------------------

BoundaryZeroCount count_boundary_zeros(const EigenfunctionSpec& spec, int samples) {
  if (samples < 16) throw std::invalid_argument("too few edge samples");
  const PhiEvaluator phi(spec);
  BoundaryZeroCount out;
  for (double cx : {-kHalfPi, kHalfPi}) {
    for (double cy : {-kHalfPi, kHalfPi}) {
      if (phi.on_nodal_set(cx, cy)) ++out.corner_zeros;
    }
  }
  const int top = std::max(spec.pair.p, spec.pair.q);
  out.cap = out.corner_zeros > 0 ? 4 * std::max(top - 1, 0) : 4 * top;

  for (int attempt = 0; attempt < 2; ++attempt) {
    const int n = attempt == 0 ? samples : 4 * samples;
    out.total = 0;
    out.tangencies = 0;
    out.rho.clear();
    out.tangency_points.clear();
    out.samples = n;
    for (int e = 0; e < 4; ++e) {
      const EdgeCount ec = count_edge(phi, e, n);
      out.per_edge[e] = ec.zeros;
      out.total += ec.zeros;
      out.tangencies += ec.tangencies;
      out.rho.insert(out.rho.end(), ec.rho.begin(), ec.rho.end());
      for (double t : ec.tangency_at) out.tangency_points.push_back(edge_point(e, t));
    }
    if (out.total <= out.cap) {
      out.rho.insert(out.rho.end(), out.corner_zeros, 1);
      return out;
    }
  }
  throw CapViolation("boundary zero count " + std::to_string(out.total) + " exceeds cap " +
                     std::to_string(out.cap) + " for pair " + to_string(spec.pair));
}

int euler_bound(int b0, int b1, const std::vector<int>& interior,
                const std::vector<int>& boundary) {
  // Twice the value keeps the half-integer parts exact.
  long twice = 2 + 2L * (b1 - b0);
  for (int nu : interior) twice += nu - 2;
  for (int rho : boundary) twice += rho;
  return static_cast<int>(twice >= 0 ? twice / 2 : -((-twice + 1) / 2));
}

GridCount count_domains_on_grid(const EigenfunctionSpec& spec, int R, int threads,
                                const Pins& pins) {
  if (R < kMinResolution || !power_of_two(R)) {
    throw std::invalid_argument("resolution must be a power of two >= 256, got " +
                                std::to_string(R));
  }
  const PhiEvaluator phi(spec);
  const int n = R + 1;
  const double step = kPi / R;
  std::vector<double> xs(n), P(n), Q(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = grid_coord(i, R);
    P[i] = scaled_shape(phi.mode_p(), xs[i]).value;
    Q[i] = scaled_shape(phi.mode_q(), xs[i]).value;
  }
  const double c = phi.c(), s = phi.s();
  std::vector<std::int8_t> sg(static_cast<std::size_t>(n) * n);
  parallel_for(
      n,
      [&](std::size_t j) {
        for (int i = 0; i < n; ++i) {
          sg[j * n + i] = static_cast<std::int8_t>(sign_of(c * P[i] * Q[j], s * P[j] * Q[i]));
        }
      },
      threads);

  // Cells touched by a pin are always refined; grid edges through a pin are cut.
  std::vector<std::uint8_t> forced(static_cast<std::size_t>(R) * R, 0);
  std::vector<std::uint8_t> cut(sg.size(), 0);  // bit 0: edge to the right, bit 1: edge up
  auto cell_of = [&](double v) {
    return std::clamp(static_cast<int>(std::floor((v + 0.5 * kPi) / step)), 0, R - 1);
  };
  for (const auto& [px, py] : pins) {
    const int ci = cell_of(px), cj = cell_of(py);
    for (int j = std::max(cj - 1, 0); j <= std::min(cj + 1, R - 1); ++j) {
      for (int i = std::max(ci - 1, 0); i <= std::min(ci + 1, R - 1); ++i) {
        if (px >= xs[i] - kPinTolerance && px <= xs[i + 1] + kPinTolerance &&
            py >= xs[j] - kPinTolerance && py <= xs[j + 1] + kPinTolerance) {
          forced[static_cast<std::size_t>(j) * R + i] = 1;
          const std::size_t id = static_cast<std::size_t>(j) * n + i;
          if (pin_at(pins, xs[i], xs[j])) sg[id] = 0;
          if (pin_on_segment(pins, xs[i], xs[j], xs[i + 1], xs[j])) cut[id] |= 1;
          if (pin_on_segment(pins, xs[i], xs[j], xs[i], xs[j + 1])) cut[id] |= 2;
          if (pin_on_segment(pins, xs[i], xs[j + 1], xs[i + 1], xs[j + 1])) cut[id + n] |= 1;
          if (pin_on_segment(pins, xs[i + 1], xs[j], xs[i + 1], xs[j + 1])) cut[id + 1] |= 2;
          if (pin_at(pins, xs[i + 1], xs[j + 1])) sg[id + n + 1] = 0;
          if (pin_at(pins, xs[i + 1], xs[j])) sg[id + 1] = 0;
          if (pin_at(pins, xs[i], xs[j + 1])) sg[id + n] = 0;
        }
      }
    }
  }

  UnionFind uf(sg.size());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t id = static_cast<std::size_t>(j) * n + i;
      if (sg[id] == 0) continue;
      if (i < R && sg[id + 1] == sg[id] && !(cut[id] & 1)) uf.unite(id, id + 1);
      if (j < R && sg[id + n] == sg[id] && !(cut[id] & 2)) uf.unite(id, id + n);
    }
  }

  GridCount out;
  out.resolution = R;
  for (int j = 0; j < R; ++j) {
    for (int i = 0; i < R; ++i) {
      const std::size_t id[4] = {static_cast<std::size_t>(j) * n + i,
                                 static_cast<std::size_t>(j) * n + i + 1,
                                 static_cast<std::size_t>(j + 1) * n + i,
                                 static_cast<std::size_t>(j + 1) * n + i + 1};
      const int a = sg[id[0]], b = sg[id[1]], cc = sg[id[2]], d = sg[id[3]];
      const bool zero = a == 0 || b == 0 || cc == 0 || d == 0;
      const bool checker = !zero && a == d && b == cc && a != b;
      const bool pinned = forced[static_cast<std::size_t>(j) * R + i] != 0;
      if (!zero && !checker && !pinned) continue;
      if (a == 0 && b == 0 && cc == 0 && d == 0) continue;
      ++out.refined_cells;
      const unsigned mask =
          resolve_cell(phi, xs[i], xs[i + 1], xs[j], xs[j + 1], pinned ? pins : Pins{});
      int bit = 0;
      for (int u = 0; u < 4; ++u) {
        for (int v = u + 1; v < 4; ++v, ++bit) {
          if (mask & (1u << bit)) uf.unite(id[u], id[v]);
        }
      }
    }
  }

  std::vector<std::uint8_t> seen(sg.size(), 0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t id = static_cast<std::size_t>(j) * n + i;
      if (sg[id] == 0) continue;
      const std::uint32_t r = uf.find(id);
      const bool edge = i == 0 || j == 0 || i == R || j == R;
      if (!(seen[r] & 1)) {
        seen[r] |= 1;
        ++out.domains;
      }
      if (edge && !(seen[r] & 2)) {
        seen[r] |= 2;
        ++out.boundary_domains;
      }
    }
  }
  return out;
}

NodalReport count_nodal_domains(const EigenfunctionSpec& spec, const NodalOptions& opts) {
  const RobinParam h(spec.h);
  NodalReport rep;
  rep.spec = spec;
  rep.negative = pair_value(spec.pair, h) < 0.0;
  rep.resolution = opts.resolution;

  const BoundaryZeroCount bz = count_boundary_zeros(spec);
  rep.boundary_zeros = bz.total;
  rep.corner_zeros = bz.corner_zeros;
  Pins pins;
  rep.interior_critical_zeros = interior_critical_count(spec, rep.critical_zeros_exact, pins);
  rep.euler_upper_bound =
      euler_bound(1, 1, std::vector<int>(rep.interior_critical_zeros, 4), bz.rho);
  pins.insert(pins.end(), bz.tangency_points.begin(), bz.tangency_points.end());

  const GridCount g = count_domains_on_grid(spec, opts.resolution, opts.threads, pins);
  if (opts.verify_doubling) {
    const GridCount g2 = count_domains_on_grid(spec, 2 * opts.resolution, opts.threads, pins);
    if (g2.domains != g.domains) {
      throw Unresolved("domain count " + std::to_string(g.domains) + " at resolution " +
                       std::to_string(opts.resolution) + " but " + std::to_string(g2.domains) +
                       " at " + std::to_string(2 * opts.resolution));
    }
  }
  rep.domains = g.domains;
  rep.boundary_domains = g.boundary_domains;
  rep.refined_cells = g.refined_cells;
  if (rep.negative && rep.critical_zeros_exact && rep.domains != rep.euler_upper_bound) {
    throw Unresolved("grid count " + std::to_string(rep.domains) + " disagrees with Euler count " +
                     std::to_string(rep.euler_upper_bound) + " for pair " + to_string(spec.pair) +
                     " at theta = " + fmt(spec.theta));
  }
  return rep;
}

NodalReport count_nodal_domains(const EigenfunctionSpec& spec, int resolution) {
  NodalOptions o;
  o.resolution = resolution;
  return count_nodal_domains(spec, o);
}

// ---- verdicts ---------------------------------------------------------------

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Sharp: return "Sharp";
    case Verdict::NotSharp: return "NotSharp";
    case Verdict::Undecided: return "Undecided";
  }
  return "?";
}

std::vector<double> theta_grid(PairIndex pair, RobinParam h, int theta_samples) {
  std::vector<double> th;
  for (int i = 0; i < theta_samples; ++i) th.push_back(kPi * i / theta_samples);
  th.push_back(0.0);
  th.push_back(0.25 * kPi);
  th.push_back(kHalfPi);
  th.push_back(0.75 * kPi);
  if (negative_even_family(pair, h)) {
    const std::vector<double> crit = critical_thetas(pair.q, h).thetas();
    for (std::size_t a = 0; a < crit.size(); ++a) {
      th.push_back(crit[a]);
      const double next = a + 1 < crit.size() ? crit[a + 1] : crit.front() + kPi;
      th.push_back(reduce_theta(0.5 * (crit[a] + next)));
    }
  }
  for (double& t : th) t = reduce_theta(t);
  std::sort(th.begin(), th.end());
  std::vector<double> out;
  for (double t : th) {
    if (out.empty() || t - out.back() > 1e-12) out.push_back(t);
  }
  return out;
}

std::vector<ThetaSample> sweep_theta(PairIndex pair, RobinParam h,
                                     const std::vector<double>& thetas,
                                     const NodalOptions& opts) {
  std::vector<ThetaSample> out(thetas.size());
  NodalOptions inner = opts;
  inner.threads = 1;
  parallel_for(
      thetas.size(),
      [&](std::size_t i) {
        ThetaSample& s = out[i];
        s.theta = thetas[i];
        const EigenfunctionSpec spec = EigenfunctionSpec::make(pair.p, pair.q, h, thetas[i]);
        try {
          s.report = count_nodal_domains(spec, inner);
        } catch (const Unresolved& e) {
          s.resolved = false;
          s.error = e.what();
          s.report.spec = spec;
        } catch (const CapViolation& e) {
          s.resolved = false;
          s.error = e.what();
          s.report.spec = spec;
        }
      },
      opts.threads);
  return out;
}

VerdictResult courant_sharp_verdict(const SpectrumEntry& entry, RobinParam h,
                                    const VerdictOptions& opts) {
  VerdictResult r;
  r.label = entry.label;
  r.value = entry.value;
  const int k = entry.label;
  if (entry.pairs.size() != 1 || entry.multiplicity > 2) {
    r.verdict = Verdict::Undecided;
    r.evidence = "multiplicity " + std::to_string(entry.multiplicity) + " > 2";
    return r;
  }
  const PairIndex pair = entry.pairs.front();
  const int p = pair.p, q = pair.q;
  if ((p + q) % 2 == 1 && k % 2 == 1) {
    r.verdict = Verdict::NotSharp;
    r.evidence = "p+q odd: Phi(-x,-y) = -Phi(x,y) gives an even domain count";
    return r;
  }
  if (p % 2 == 1 && q % 2 == 1 && k % 4 != 0) {
    r.verdict = Verdict::NotSharp;
    r.evidence = "p, q odd: domain count is a multiple of 4";
    return r;
  }

  NodalOptions confirm;
  confirm.resolution = opts.resolution;
  confirm.verify_doubling = true;
  confirm.threads = opts.threads;

  if (pair.diagonal()) {
    const NodalReport rep =
        count_nodal_domains(EigenfunctionSpec::make(p, q, h, 0.25 * kPi), confirm);
    r.verdict = rep.domains == k ? Verdict::Sharp : Verdict::NotSharp;
    r.evidence = "unique eigenfunction has " + std::to_string(rep.domains) + " domains";
    return r;
  }

  NodalOptions sweep = confirm;
  sweep.verify_doubling = false;

  auto try_hit = [&](const std::vector<ThetaSample>& samples) -> bool {
    for (const auto& s : samples) {
      if (!s.resolved || s.report.domains != k) continue;
      try {
        const NodalReport rep =
            count_nodal_domains(EigenfunctionSpec::make(p, q, h, s.theta), confirm);
        if (rep.domains == k) {
          r.verdict = Verdict::Sharp;
          r.evidence = "theta = " + fmt(s.theta) + " gives " + std::to_string(k) + " domains";
          return true;
        }
      } catch (const Unresolved&) {
      }
    }
    return false;
  };

  const std::vector<double> special = {0.0, 0.25 * kPi, kHalfPi, 0.75 * kPi};
  if (try_hit(sweep_theta(pair, h, special, sweep))) return r;

  const std::vector<double> grid = theta_grid(pair, h, opts.theta_samples);
  const std::vector<ThetaSample> samples = sweep_theta(pair, h, grid, sweep);
  if (try_hit(samples)) return r;

  int max_domains = 0, max_euler = 0, unresolved = 0;
  for (const auto& s : samples) {
    if (!s.resolved) {
      ++unresolved;
      continue;
    }
    max_domains = std::max(max_domains, s.report.domains);
    max_euler = std::max(max_euler, s.report.euler_upper_bound);
  }
  const std::string sampled = std::to_string(grid.size()) + " angles";
  if (negative_even_family(pair, h)) {
    if (max_euler < k) {
      r.verdict = Verdict::NotSharp;
      r.evidence = "Euler bound at most " + std::to_string(max_euler) + " < " +
                   std::to_string(k) + " over all critical theta classes (" + sampled + ")";
      return r;
    }
    if (unresolved == 0) {
      r.verdict = Verdict::NotSharp;
      r.evidence = "at most " + std::to_string(max_domains) + " domains over all critical theta classes (" + sampled + ")";
      return r;
    }
  }
  r.verdict = Verdict::Undecided;
  r.evidence = "at most " + std::to_string(max_domains) + " domains over " + sampled;
  if (unresolved > 0) r.evidence += ", " + std::to_string(unresolved) + " unresolved";
  return r;
}

std::vector<VerdictResult> verdict_table(RobinParam h, int K, const VerdictOptions& opts) {
  std::vector<VerdictResult> out;
  for (const SpectrumEntry& e : enumerate_spectrum(h, K)) {
    if (e.label > K) break;
    out.push_back(courant_sharp_verdict(e, h, opts));
    for (int k = e.label + 1; k <= std::min(e.last_label(), K); ++k) {
      VerdictResult v;
      v.label = k;
      v.value = e.value;
      v.verdict = Verdict::NotSharp;
      v.evidence = "lambda_" + std::to_string(k - 1) + " = lambda_" + std::to_string(k);
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace robin
