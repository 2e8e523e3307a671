#include "robin/square_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "robin/errors.hpp"
#include "robin/parallel.hpp"
#include "robin/root_finding.hpp"

namespace robin {

namespace {

constexpr double kPi2 = kPi * kPi;

// Split of s_k (the signed square of slot k's root). Hyperbolic slots are
// written as -h^2 pi^2 + (2 h pi d - d^2) with d = beta + h pi.
struct SlotTerms {
  int hyperbolic = 0;
  double trig = 0.0;
  double small = 0.0;
};

SlotTerms slot_terms(const IntervalEigenvalue& m) {
  SlotTerms t;
  if (m.mode.hyperbolic()) {
    const double hp = m.h * kPi;
    t.hyperbolic = 1;
    t.small = 2.0 * hp * m.shift - m.shift * m.shift;
  } else {
    t.trig = m.root * m.root;
  }
  return t;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

}  // namespace

PairIndex PairIndex::canonical(int a, int b) {
  if (a < 0 || b < 0) throw std::invalid_argument("pair slots must be non-negative");
  return a <= b ? PairIndex{a, b} : PairIndex{b, a};
}

std::string to_string(PairIndex pair) {
  return "(" + std::to_string(pair.p) + "," + std::to_string(pair.q) + ")";
}

double pair_value(PairIndex pair, ModeTable& table) {
  return table.at(pair.p).value + table.at(pair.q).value;
}

double pair_value(PairIndex pair, RobinParam h) {
  ModeTable t(h, std::max(pair.p, pair.q));
  return pair_value(pair, t);
}

bool PairDifference::degenerate() const {
  return std::fabs(value) <= kDegeneracyTolerance * scale;
}

PairDifference pair_difference(PairIndex a, PairIndex b, ModeTable& table) {
  std::vector<int> sa{a.p, a.q}, sb{b.p, b.q};
  // cancel slots common to both pairs
  for (auto it = sa.begin(); it != sa.end();) {
    auto jt = std::find(sb.begin(), sb.end(), *it);
    if (jt != sb.end()) {
      sb.erase(jt);
      it = sa.erase(it);
    } else {
      ++it;
    }
  }
  const double h = table.param().value();
  int hyperbolic = 0;
  double trig = 0.0, small = 0.0, scale = 0.0;
  auto add = [&](int slot, double sign) {
    const SlotTerms t = slot_terms(table.at(slot));
    hyperbolic += static_cast<int>(sign) * t.hyperbolic;
    trig += sign * t.trig;
    small += sign * t.small;
    scale += t.trig + std::fabs(t.small);
  };
  for (int s : sa) add(s, 1.0);
  for (int s : sb) add(s, -1.0);
  const double big = -static_cast<double>(hyperbolic) * h * h * kPi2;
  scale += std::fabs(big);
  PairDifference d;
  d.value = (big + trig + small) / kPi2;
  d.scale = scale / kPi2;
  return d;
}

double sigma(PairIndex a, PairIndex b, RobinParam h) {
  ModeTable t(h, std::max({a.q, b.q, a.p, b.p}));
  return pair_difference(a, b, t).value;
}

double a_value(const IntervalEigenvalue& m) {
  const double hp = m.h * kPi;
  if (m.mode.hyperbolic()) {
    // h pi - beta^2/2 + h^2 pi^2/2 with beta = -h pi + d
    return hp + hp * m.shift - 0.5 * m.shift * m.shift;
  }
  return hp + 0.5 * m.root * m.root + 0.5 * hp * hp;
}

AkValue a_value(int slot, RobinParam h) {
  return {slot, h.value(), a_value(solve_slot(slot, h))};
}

double sigma_prime(PairIndex a, PairIndex b, RobinParam h) {
  ModeTable t(h, std::max({a.q, b.q, a.p, b.p}));
  auto term = [&](int slot) {
    const auto& m = t.at(slot);
    if (m.mode.kind == ModeKind::Linear) {
      throw RegimeError("sigma' is singular at h = -2/pi");
    }
    return m.signed_square() / a_value(m);
  };
  // d(s_k)/dh = 2 pi s_k / a_k
  return 2.0 / kPi * (term(a.p) + term(a.q) - term(b.p) - term(b.q));
}

bool SpectrumEntry::contains(PairIndex pair) const {
  return std::find(pairs.begin(), pairs.end(), pair) != pairs.end();
}

namespace {

struct Candidate {
  PairIndex pair;
  double value;
};

// Sorts and merges a candidate pool. Approximate values order distant
// candidates; within a cluster of near-equal values the exact cancelled
// difference decides.
std::vector<SpectrumEntry> build_entries(std::vector<Candidate> pool, ModeTable& table) {
  std::sort(pool.begin(), pool.end(), [](const Candidate& x, const Candidate& y) {
    return x.value < y.value || (x.value == y.value && x.pair < y.pair);
  });
  auto close = [](double x, double y) {
    return std::fabs(x - y) <= 1e-6 * std::max(1.0, std::max(std::fabs(x), std::fabs(y)));
  };
  for (std::size_t i = 0; i < pool.size();) {
    std::size_t j = i + 1;
    while (j < pool.size() && close(pool[j - 1].value, pool[j].value)) ++j;
    if (j - i > 1) {
      std::stable_sort(pool.begin() + i, pool.begin() + j,
                       [&](const Candidate& x, const Candidate& y) {
                         const auto d = pair_difference(x.pair, y.pair, table);
                         return !d.degenerate() && d.value < 0.0;
                       });
    }
    i = j;
  }

  std::vector<SpectrumEntry> entries;
  int label = 1;
  for (const auto& c : pool) {
    if (!entries.empty()) {
      auto& last = entries.back();
      if (close(last.value, c.value) &&
          pair_difference(last.pairs.front(), c.pair, table).degenerate()) {
        last.pairs.push_back(c.pair);
        last.multiplicity += c.pair.multiplicity();
        label += c.pair.multiplicity();
        continue;
      }
    }
    SpectrumEntry e;
    e.label = label;
    e.value = c.value;
    e.pairs = {c.pair};
    e.multiplicity = c.pair.multiplicity();
    label += e.multiplicity;
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<Candidate> candidate_pool(ModeTable& table, int cutoff) {
  table.at(cutoff);
  std::vector<Candidate> pool;
  pool.reserve(static_cast<std::size_t>(cutoff + 1) * (cutoff + 2) / 2);
  for (int q = 0; q <= cutoff; ++q) {
    for (int p = 0; p <= q; ++p) {
      pool.push_back({{p, q}, table[p].value + table[q].value});
    }
  }
  return pool;
}

}  // namespace

std::vector<SpectrumEntry> enumerate_spectrum(RobinParam h, int K,
                                              const SpectrumOptions& opts) {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  int cutoff = opts.initial_cutoff > 0 ? opts.initial_cutoff : K + 4;
  cutoff = std::max(cutoff, 2);
  ModeTable table(h, 1);
  // Every pair with a slot above `cutoff` is worth at least this much.
  const double floor0 = table[0].value;
  for (int attempt = 0; attempt < 4; ++attempt) {
    if (cutoff > opts.max_cutoff) break;
    auto entries = build_entries(candidate_pool(table, cutoff), table);
    std::vector<SpectrumEntry> out;
    for (auto& e : entries) {
      if (e.label > K) break;
      out.push_back(e);
    }
    const double lambda_k = out.back().value;
    const double excluded_min = floor0 + static_cast<double>(cutoff) * cutoff;
    const double margin = kDegeneracyTolerance * std::max(1.0, std::fabs(lambda_k));
    if (out.back().last_label() >= K && excluded_min > lambda_k + margin) return out;
    const int needed =
        static_cast<int>(std::ceil(std::sqrt(std::max(0.0, lambda_k - floor0)))) + 3;
    cutoff = std::max(needed, 2 * cutoff);
  }
  throw CutoffTooSmall("candidate pool up to slot " + std::to_string(opts.max_cutoff) +
                       " cannot certify label " + std::to_string(K) + " at h = " +
                       fmt(h.value()));
}

std::vector<SpectrumEntry> negative_spectrum(RobinParam h) {
  ModeTable table(h, 1);
  // pairs (p, q) with q > cutoff have value >= -beta0^2/pi^2 + cutoff^2 > 0
  const int cutoff = std::max(2, static_cast<int>(std::ceil(table[0].root / kPi)) + 2);
  auto entries = build_entries(candidate_pool(table, cutoff), table);
  std::vector<SpectrumEntry> out;
  for (auto& e : entries) {
    if (!e.negative()) break;
    out.push_back(std::move(e));
  }
  return out;
}

NegativePairCounts negative_pair_counts(RobinParam h) {
  NegativePairCounts n;
  for (const auto& e : negative_spectrum(h)) {
    for (const auto& pr : e.pairs) {
      if (pr.p == 0) n.n0 = std::max(n.n0, pr.q);
      if (pr.p == 1) n.n1 = std::max(n.n1, pr.q);
    }
  }
  return n;
}

const char* to_string(TableCase c) {
  switch (c) {
    case TableCase::I:
      return "i";
    case TableCase::II:
      return "ii";
    case TableCase::III:
      return "iii";
    case TableCase::IV:
      return "iv";
    case TableCase::V:
      return "v";
    case TableCase::Unclassified:
      return "-";
  }
  return "-";
}

CaseAssignment classify_pairs(PairIndex a, PairIndex b) {
  CaseAssignment c;
  if (b.p < a.p) std::swap(a, b);
  c.outer = a;
  c.inner = b;
  if (!(a.p < b.p && b.q < a.q)) return c;
  const int p = a.p, pp = b.p, qp = b.q;
  if (p == 0 && pp == 1 && qp == 1) {
    c.table_case = TableCase::I;
  } else if (p == 0 && pp == 1) {
    c.table_case = TableCase::II;
  } else if (p == 0) {
    c.table_case = TableCase::III;
  } else if (p == 1) {
    c.table_case = TableCase::IV;
  } else {
    c.table_case = TableCase::V;
  }
  return c;
}

int table_sign(TableCase c, PairIndex outer, PairIndex inner, RobinParam h) {
  const bool deep = h.regime() == Regime::Deep;
  switch (c) {
    case TableCase::I:
      return -1;
    case TableCase::II: {
      if (!deep) return -1;
      const double a0 = a_value(outer.p, h).value, aq = a_value(outer.q, h).value;
      const double a1 = a_value(inner.p, h).value, aqp = a_value(inner.q, h).value;
      return sign_of((a0 + aq) * (a0 * aq - a1 * aqp));
    }
    case TableCase::III:
      return deep ? 1 : -1;
    case TableCase::IV:
      return 1;
    case TableCase::V:
      return deep ? -1 : 1;
    case TableCase::Unclassified:
      return 0;
  }
  return 0;
}

int crossing_cap(TableCase c) {
  switch (c) {
    case TableCase::I:
      return 1;
    case TableCase::III:
    case TableCase::IV:
    case TableCase::V:
      return 2;
    default:
      return -1;
  }
}

namespace {

struct Sample {
  double h;
  double value;
  int sign;  // 0 when degenerate
};

Sample sample_sigma(PairIndex a, PairIndex b, double h) {
  const RobinParam hp(h);
  ModeTable t(hp, std::max(a.q, b.q));
  const auto d = pair_difference(a, b, t);
  return {h, d.value, d.degenerate() ? 0 : sign_of(d.value)};
}

double central_difference(PairIndex a, PairIndex b, double h, double guard) {
  const double step = 1e-6 * std::max(1.0, std::fabs(h));
  auto f = [&](double x) { return sample_sigma(a, b, x).value; };
  double lo = h - step, hi = h + step;
  // never straddle the slot-1 branch switch
  if (lo < kCriticalH + guard && hi > kCriticalH - guard) {
    if (h < kCriticalH) {
      hi = h;
      lo = h - 2 * step;
    } else {
      lo = h;
      hi = h + 2 * step;
    }
  }
  if (hi >= 0.0) {
    hi = h;
    lo = h - 2 * step;
  }
  return (f(hi) - f(lo)) / (hi - lo);
}

}  // namespace

std::vector<CrossingRecord> find_crossings(PairIndex a, PairIndex b, double h_min,
                                           double h_max, const CrossingScanOptions& opts) {
  if (!(h_min < h_max) || h_max >= 0.0 || !std::isfinite(h_min)) {
    throw std::invalid_argument("crossing scan needs finite h_min < h_max < 0");
  }
  a = PairIndex::canonical(a.p, a.q);
  b = PairIndex::canonical(b.p, b.q);
  if (a == b) throw std::invalid_argument("crossing scan needs two distinct pairs");
  const CaseAssignment cls = classify_pairs(a, b);
  if (cls.table_case != TableCase::Unclassified) {
    a = cls.outer;
    b = cls.inner;
  }

  // log-uniform grid in |h|, split at the guard band
  const double decades = std::log10(h_min / h_max);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * opts.samples_per_decade))) + 1;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + 2);
  const double band_lo = kCriticalH - opts.guard_band, band_hi = kCriticalH + opts.guard_band;
  for (int i = 0; i < n; ++i) {
    const double h = -std::fabs(h_min) * std::pow(10.0, -decades * i / (n - 1));
    if (h > band_lo && h < band_hi) continue;
    grid.push_back(i == n - 1 ? h_max : h);
  }
  if (h_min < band_lo && h_max > band_hi) {
    grid.push_back(band_lo);
    grid.push_back(band_hi);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }

  std::vector<Sample> samples(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { samples[i] = sample_sigma(a, b, grid[i]); },
               opts.threads);

  auto bisect_sigma = [&](double lo, double hi) {
    return bisect([&](double h) { return sample_sigma(a, b, h).value; }, {lo, hi},
                  opts.h_tolerance);
  };

  std::vector<double> roots;
  // sign changes between consecutive non-degenerate samples
  int last = -1;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].sign == 0) continue;
    if (last >= 0 && samples[last].sign != samples[i].sign) {
      roots.push_back(bisect_sigma(samples[last].h, samples[i].h));
    }
    last = static_cast<int>(i);
  }

  // local minima of |sigma| without a sign change may hide a pair of roots
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const Sample &l = samples[i - 1], &m = samples[i], &r = samples[i + 1];
    if (m.sign == 0 || l.sign != m.sign || r.sign != m.sign) continue;
    if (!(std::fabs(m.value) < std::fabs(l.value) && std::fabs(m.value) < std::fabs(r.value))) {
      continue;
    }
    const double s = m.sign;
    double lo = l.h, hi = r.h;
    // golden-section minimisation of s * sigma
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    Sample f1 = sample_sigma(a, b, x1), f2 = sample_sigma(a, b, x2);
    for (int it = 0; it < 200 && hi - lo > opts.h_tolerance; ++it) {
      if (f1.sign != m.sign || f2.sign != m.sign) break;
      if (s * f1.value < s * f2.value) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = sample_sigma(a, b, x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = sample_sigma(a, b, x2);
      }
    }
    const Sample& inside = f1.sign != m.sign ? f1 : f2;
    if (inside.sign == -m.sign) {
      roots.push_back(bisect_sigma(l.h, inside.h));
      roots.push_back(bisect_sigma(inside.h, r.h));
    } else if (inside.sign == 0) {
      throw ScanTooCoarse("tangential contact of " + to_string(a) + " and " + to_string(b) +
                          " near h = " + fmt(inside.h) + " cannot be resolved");
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<CrossingRecord> out;
  for (double hc : roots) {
    CrossingRecord rec;
    rec.pair_a = a;
    rec.pair_b = b;
    rec.h_cross = hc;
    rec.sigma_at_cross = sample_sigma(a, b, hc).value;
    rec.sigma_prime = central_difference(a, b, hc, opts.guard_band);
    rec.sigma_prime_sign = sign_of(rec.sigma_prime);
    const RobinParam hp(hc);
    rec.regime = hp.regime();
    if (rec.regime != Regime::Critical) rec.analytic_sign = sign_of(sigma_prime(a, b, hp));
    rec.table_case = cls.table_case;
    rec.predicted_sign = table_sign(cls.table_case, a, b, hp);
    out.push_back(rec);
  }
  return out;
}

double find_h2_star() {
  auto g = [](double h) {
    const RobinParam p(h);
    return solve_alpha(1, p).root - solve_beta0(p).root;
  };
  return bisect(g, {kCriticalH + 1e-9, -1e-9}, 1e-12);
}

double find_h9_star() {
  const PairIndex a{2, 2}, b{0, 3};
  return bisect([&](double h) { return sigma(a, b, RobinParam(h)); }, {-3.0, -1.0}, 1e-12);
}

double tilde_h(int q) {
  if (q < 2) throw std::invalid_argument("tilde_h requires q >= 2");
  auto g = [q](double h) {
    const RobinParam p(h);
    return solve_alpha(q, p).root - solve_beta0(p).root;
  };
  double lo = -1.0;
  while (g(lo) > 0.0) lo *= 2.0;
  return bisect(g, {lo, -1e-12}, 1e-12);
}

bool LabellingReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

LabellingReport minimal_labelling_check(RobinParam h) {
  if (h.regime() != Regime::Deep) {
    throw RegimeError("minimal labelling rules apply for h < -2/pi");
  }
  LabellingReport rep;
  rep.h = h.value();
  for (const auto& e : negative_spectrum(h)) {
    for (const auto& pr : e.pairs) {
      int expected = 0;
      if (pr.p == 0 && pr.q >= 3 && pr.q % 2 == 1) expected = 8 * ((pr.q - 3) / 2) + 9;
      if (pr.p == 1 && pr.q >= 2 && pr.q % 2 == 0) expected = 8 * ((pr.q - 2) / 2) + 7;
      if (pr.p == 1 && pr.q >= 3 && pr.q % 2 == 1) expected = 8 * ((pr.q - 3) / 2) + 11;
      if (expected == 0) continue;
      rep.checks.push_back({pr, expected, e.label, expected == e.label});
    }
  }
  return rep;
}

double counting_f(double lambda) {
  const double j = kBesselJ0FirstZero;
  return kPi / 4.0 - kPi / (j * j) - 8.0 / std::sqrt(lambda);
}

double counting_f_root() {
  const double j = kBesselJ0FirstZero;
  const double c = kPi / 4.0 - kPi / (j * j);
  return 64.0 / (c * c);
}

CountingBoundReport counting_bound_check(double lambda, RobinParam h) {
  if (!(lambda > 0.0)) throw std::invalid_argument("counting bound needs lambda > 0");
  CountingBoundReport r;
  r.lambda = lambda;
  r.h = h.value();
  // alpha_i >= (i-1) pi bounds the slots that can contribute
  const int imax = static_cast<int>(std::ceil(std::sqrt(lambda))) + 2;
  ModeTable t(h, imax);
  for (int i = 2; i <= imax; ++i) {
    for (int j = 2; j <= imax; ++j) {
      if (t[i].value + t[j].value < lambda) ++r.n_plus;
      if (static_cast<double>(i * i + j * j) < lambda) ++r.lattice_lower;
      if (static_cast<double>((i - 1) * (i - 1) + (j - 1) * (j - 1)) < lambda) ++r.lattice_upper;
    }
  }
  r.lower_bound = kPi / 4.0 * lambda - 4.0 * std::sqrt(lambda);
  r.upper_bound = kPi / 4.0 * lambda;
  r.f_value = counting_f(lambda);
  return r;
}

}  // namespace robin
