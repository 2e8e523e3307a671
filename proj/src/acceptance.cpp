#include "robin/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "robin/errors.hpp"
#include "robin/nodal_analysis.hpp"
#include "robin/square_spectrum.hpp"

namespace robin {

namespace {

std::string num(double v, int digits = 10) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Collects sub-checks of one criterion.
struct Checks {
  bool pass = true;
  std::vector<std::string> lines;

  void expect(bool ok, const std::string& what) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

using Body = std::function<void(Checks&)>;

CriterionResult run_one(int id, const std::string& name, const Body& body, std::ostream& os) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  Checks c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = c.pass;
  std::ostringstream detail;
  for (const auto& l : c.lines) detail << "    " << l << '\n';
  r.detail = detail.str();

  char head[64];
  std::snprintf(head, sizeof head, "[%s] %2d ", r.pass ? "PASS" : "FAIL", id);
  os << head << name << " (" << num(r.seconds, 3) << " s)\n" << r.detail << std::flush;
  return r;
}

double seconds_of(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion_h9(Checks& c) {
  double h = 0.0;
  const double t = seconds_of([&] { h = find_h9_star(); });
  c.expect(h >= -1.6303 && h <= -1.6283, "h9* = " + num(h) + " in [-1.6303, -1.6283]");
  c.expect(t < 1.0, "runtime " + num(t, 3) + " s < 1 s");
}

void criterion_h2(Checks& c) {
  double h = 0.0;
  const double t = seconds_of([&] { h = find_h2_star(); });
  c.expect(h >= -0.4392 && h <= -0.4372, "h2* = " + num(h) + " in [-0.4392, -0.4372]");
  c.expect(t < 1.0, "runtime " + num(t, 3) + " s < 1 s");
}

void criterion_beta_gap(Checks& c) {
  const RobinParam h(kCriticalH - 1e-8);
  const double b0 = solve_beta0(h).root, b1 = solve_beta1(h).root;
  const double d = b0 * b0 - b1 * b1;
  c.expect(d >= 5.7559 && d <= 5.7579, "beta0^2 - beta1^2 = " + num(d) + " in [5.7559, 5.7579]");
}

void criterion_sigma(Checks& c) {
  for (double h : {-1e-6, -1e-8, -1e-10}) {
    const double s = sigma({0, 2}, {1, 1}, RobinParam(h));
    c.expect(std::fabs(s - 2.0) <= 1e-6, "sigma_(0,2),(1,1)(" + num(h, 3) + ") = " + num(s));
  }
  const RobinParam crit(kCriticalH - 1e-8);
  const double s1 = kPi * kPi * sigma({0, 2}, {1, 1}, crit);
  c.expect(std::fabs(s1 - 25.5669) <= 1e-3, "pi^2 sigma_(0,2),(1,1)(-2/pi) = " + num(s1));
  const double s2 = kPi * kPi * sigma({0, 3}, {1, 2}, crit);
  c.expect(std::fabs(s2 - 43.6821) <= 1e-3, "pi^2 sigma_(0,3),(1,2)(-2/pi) = " + num(s2));
}

void criterion_wronskian(Checks& c) {
  const auto w = wronskian_zeros(4, RobinParam(-4.0));
  const bool shape = w.zeros.size() == 3 && w.zeros[1] == 0.0 && w.zeros[0] == -w.zeros[2];
  const double g = w.zeros.size() == 3 ? w.zeros[2] : NAN;
  c.expect(shape && g >= 0.6615 && g <= 0.6635,
           "q=4, h=-4: {-gamma, 0, gamma} with gamma = " + num(g));
  for (int q : {4, 6, 8}) {
    for (double h : {-4.0, -10.0, -30.0}) {
      const auto z = wronskian_zeros(q, RobinParam(h));
      c.expect(static_cast<int>(z.zeros.size()) == q - 1,
               "q=" + std::to_string(q) + ", h=" + num(h) + ": " +
                   std::to_string(z.zeros.size()) + " zeros");
    }
  }
}

void criterion_nodal(Checks& c) {
  struct Case {
    int q;
    double h, theta;
    int expected;
    const char* label;
  };
  const Case cases[] = {
      {2, -0.1, 0.25 * kPi, 5, "pi/4"},   {2, -0.6366, 0.25 * kPi, 5, "pi/4"},
      {2, -2.0, 0.25 * kPi, 5, "pi/4"},   {4, -4.0, 0.0, 5, "0"},
      {4, -4.0, 0.5 * kPi, 5, "pi/2"},    {4, -4.0, 0.75 * kPi, 12, "3pi/4"},
  };
  NodalOptions opts;
  opts.resolution = 1024;
  opts.verify_doubling = true;
  for (const Case& k : cases) {
    const std::string tag = "(0," + std::to_string(k.q) + ") h=" + num(k.h) + " theta=" + k.label;
    try {
      NodalReport rep;
      const double t = seconds_of(
          [&] { rep = count_nodal_domains(EigenfunctionSpec::make(0, k.q, RobinParam(k.h), k.theta), opts); });
      c.expect(rep.domains == k.expected && t < 30.0,
               tag + ": " + std::to_string(rep.domains) + " domains (expected " +
                   std::to_string(k.expected) + ", stable at R=1024 and 2048, " + num(t, 3) +
                   " s)");
    } catch (const Error& e) {
      c.expect(false, tag + ": " + e.what());
    }
  }
}

void criterion_ordering(Checks& c) {
  const auto entries = enumerate_spectrum(RobinParam(-20.0), 19);
  const std::vector<PairIndex> expected = {
      {0, 0}, {0, 1}, {0, 1}, {1, 1}, {0, 2}, {0, 2}, {1, 2}, {1, 2}, {0, 3}, {0, 3},
      {1, 3}, {1, 3}, {0, 4}, {0, 4}, {1, 4}, {1, 4}, {0, 5}, {0, 5}, {1, 5}};
  std::vector<PairIndex> got;
  std::string seq;
  for (const auto& e : entries) {
    for (const auto& p : e.pairs) {
      for (int m = 0; m < p.multiplicity(); ++m) got.push_back(p);
    }
    seq += (seq.empty() ? "" : " ") + to_string(e.pairs.front());
  }
  got.resize(19);
  c.expect(got == expected, "pair sequence " + seq);
  bool mult = true;
  for (const auto& e : entries) {
    if (!e.negative()) continue;
    const PairIndex p = e.pairs.front();
    const int want = (p == PairIndex{0, 0} || p == PairIndex{1, 1}) ? 1 : 2;
    mult = mult && e.pairs.size() == 1 && e.multiplicity == want;
  }
  c.expect(mult, "multiplicity 2 for every negative entry except (0,0) and (1,1)");
}

void criterion_verdicts(Checks& c) {
  VerdictOptions opts;
  auto expect_rows = [&](double h, int K, const std::vector<std::pair<int, Verdict>>& want,
                         bool parity) {
    const auto rows = verdict_table(RobinParam(h), K, opts);
    for (const auto& [k, v] : want) {
      const auto& r = rows.at(k - 1);
      bool ok = r.verdict == v;
      if (parity) ok = ok && r.evidence.find("odd") != std::string::npos;
      c.expect(ok, "h=" + num(h) + " k=" + std::to_string(k) + ": " + to_string(r.verdict) +
                       " (" + r.evidence + ")");
    }
  };
  expect_rows(-1.0, 9,
              {{1, Verdict::Sharp},
               {2, Verdict::Sharp},
               {3, Verdict::NotSharp},
               {4, Verdict::Sharp},
               {5, Verdict::Sharp},
               {9, Verdict::Sharp}},
              false);
  expect_rows(-2.5, 9, {{9, Verdict::NotSharp}}, false);
  expect_rows(-20.0, 11,
              {{7, Verdict::NotSharp}, {9, Verdict::NotSharp}, {11, Verdict::NotSharp}}, true);
}

void criterion_counting(Checks& c) {
  const double f0 = counting_f(1090.0), f1 = counting_f(1091.0);
  c.expect(f0 < 0.0, "f(1090) = " + num(f0) + " < 0");
  c.expect(f1 > 0.0, "f(1091) = " + num(f1) + " > 0 (root of f at " + num(counting_f_root()) + ")");
  const auto r = counting_bound_check(200.0, RobinParam(-1.0));
  c.expect(r.lower_ok(), "N+ = " + std::to_string(r.n_plus) + " >= " +
                             std::to_string(r.lattice_lower) + " >= " + num(r.lower_bound));
  c.expect(r.upper_ok(), "N+ = " + std::to_string(r.n_plus) + " <= " +
                             std::to_string(r.lattice_upper) + " <= " + num(r.upper_bound));
}

void criterion_properties(Checks& c, unsigned seed) {
  std::mt19937 rng(seed);

  bool mono = true;
  for (int p = 2; p <= 7; ++p) {
    double prev = -1.0;
    for (int i = 0; i < 20; ++i) {
      const double h = -50.0 * std::pow(1e-4, i / 19.0);
      const double a = solve_alpha(p, RobinParam(h)).root;
      mono = mono && a >= prev;
      prev = a;
    }
  }
  c.expect(mono, "alpha_p increasing in h for p = 2..7 on 20-point grids");

  bool gaps = true;
  for (int k = 3; k <= 6; ++k) {
    for (int l = 2; l < k; ++l) {
      double prev = 0.0;
      for (int i = 0; i < 20; ++i) {
        const RobinParam h(-10.0 + (10.0 + kCriticalH - 1e-4) * i / 19.0);
        const double g = std::pow(solve_alpha(k, h).root, 2) - std::pow(solve_alpha(l, h).root, 2);
        if (i > 0) gaps = gaps && g >= prev - 1e-10;
        prev = g;
      }
      for (int i = 0; i < 20; ++i) {
        const RobinParam h(kCriticalH + 1e-3 + (-2e-3 - kCriticalH) * i / 19.0);
        const double g = std::pow(solve_alpha(k, h).root, 2) - std::pow(solve_alpha(l, h).root, 2);
        if (i > 0) gaps = gaps && g <= prev + 1e-10;
        prev = g;
      }
    }
  }
  c.expect(gaps, "alpha_k^2 - alpha_l^2 increasing below -2/pi, decreasing above");

  {
    std::uniform_int_distribution<int> family(0, 2), half(1, 3);
    std::uniform_real_distribution<double> logh(std::log(0.05), std::log(12.0));
    std::uniform_real_distribution<double> th(0.0, kPi);
    NodalOptions opts;
    opts.resolution = 256;
    int tested = 0, bad = 0, unresolved = 0;
    std::string first_bad;
    while (tested < 64) {
      const int f = family(rng);
      const int q = f == 0 ? 2 * half(rng) + 1 : f == 1 ? 2 * half(rng) : 2 * half(rng) + 1;
      const int p = f == 0 ? 0 : 1;
      const double h = -std::exp(logh(rng));
      const double theta = th(rng);
      try {
        const auto rep = count_nodal_domains(EigenfunctionSpec::make(p, q, RobinParam(h), theta), opts);
        const int mod = (p % 2 == 1 && q % 2 == 1) ? 4 : 2;
        if (rep.domains % mod != 0) {
          ++bad;
          if (first_bad.empty()) {
            first_bad = "(" + std::to_string(p) + "," + std::to_string(q) + ") h=" + num(h) +
                        " theta=" + num(theta) + " -> " + std::to_string(rep.domains);
          }
        }
      } catch (const Unresolved&) {
        ++unresolved;
      }
      ++tested;
    }
    c.expect(bad == 0 && unresolved == 0,
             "domain parity over 64 samples: " + std::to_string(bad) + " violations, " +
                 std::to_string(unresolved) + " unresolved" +
                 (first_bad.empty() ? "" : " (first: " + first_bad + ")"));
  }

  {
    std::uniform_int_distribution<int> slot(0, 8);
    int tested = 0, over = 0, sign = 0;
    while (tested < 30) {
      const PairIndex a = PairIndex::canonical(slot(rng), slot(rng));
      const PairIndex b = PairIndex::canonical(slot(rng), slot(rng));
      const auto cls = classify_pairs(a, b);
      if (cls.table_case == TableCase::Unclassified || cls.table_case == TableCase::II) continue;
      ++tested;
      const auto rec = find_crossings(a, b, -50.0, -0.01);
      if (static_cast<int>(rec.size()) > crossing_cap(cls.table_case)) ++over;
      for (const auto& r : rec) sign += r.sigma_prime_sign != r.predicted_sign;
    }
    c.expect(over == 0 && sign == 0, "crossing caps over 30 quadruples: " + std::to_string(over) +
                                         " over cap, " + std::to_string(sign) + " sign mismatches");
  }

  bool order4 = true;
  std::string worst;
  for (int p = 1; p <= 3; ++p) {
    double prev = 0.0;
    for (double h : {-25.0, -50.0, -100.0, -200.0}) {
      const double err =
          solve_alpha(p + 1, RobinParam(h)).root - alpha_asymptotic(p, RobinParam(h), 3).value;
      const double scaled = std::fabs(err) * std::pow(h, 4);
      order4 = order4 && scaled < 50.0 * p * p * p * p;
      if (prev > 0.0 && h >= -100.0) order4 = order4 && std::fabs(scaled / prev - 1.0) < 0.5;
      prev = scaled;
    }
    worst += (worst.empty() ? "" : ", ") + std::string("p=") + std::to_string(p) + ": " + num(prev, 4);
  }
  c.expect(order4, "h^4 (alpha - order-3 expansion) bounded and steady (" + worst + ")");
}

}  // namespace

std::vector<CriterionResult> run_acceptance(unsigned seed, std::ostream& os) {
  std::vector<CriterionResult> out;
  out.push_back(run_one(1, "h9* crossing of (2,2) and (0,3)", criterion_h9, os));
  out.push_back(run_one(2, "h2* zero of lambda_(0,1)", criterion_h2, os));
  out.push_back(run_one(3, "beta0^2 - beta1^2 at -2/pi", criterion_beta_gap, os));
  out.push_back(run_one(4, "sigma anchors", criterion_sigma, os));
  out.push_back(run_one(5, "Wronskian zeros", criterion_wronskian, os));
  out.push_back(run_one(6, "nodal domain counts", criterion_nodal, os));
  out.push_back(run_one(7, "ordering at h = -20", criterion_ordering, os));
  out.push_back(run_one(8, "Courant-sharp verdicts", criterion_verdicts, os));
  out.push_back(run_one(9, "counting bound", criterion_counting, os));
  out.push_back(run_one(10, "property suites (seed " + std::to_string(seed) + ")",
                        [seed](Checks& c) { criterion_properties(c, seed); }, os));
  int passed = 0;
  for (const auto& r : out) passed += r.pass;
  os << passed << "/" << out.size() << " criteria passed\n";
  return out;
}

}  // namespace robin
