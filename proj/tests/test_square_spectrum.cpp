#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "robin/errors.hpp"
#include "robin/square_spectrum.hpp"

using namespace robin;

namespace {

long double oracle_slot(int slot, long double h) {
  const long double pi2 = oracle::kPiL * oracle::kPiL;
  if (slot == 0) return -std::pow(oracle::beta0(h), 2) / pi2;
  if (slot == 1 && h < kCriticalH) return -std::pow(oracle::beta1(h), 2) / pi2;
  return std::pow(oracle::alpha(slot, h), 2) / pi2;
}

long double oracle_pair(PairIndex pr, long double h) {
  return oracle_slot(pr.p, h) + oracle_slot(pr.q, h);
}

// label -> canonical pair, one element per label
std::vector<PairIndex> labels_of(const std::vector<SpectrumEntry>& entries, int K) {
  std::vector<PairIndex> out;
  for (const auto& e : entries) {
    for (const auto& pr : e.pairs) {
      for (int m = 0; m < pr.multiplicity(); ++m) out.push_back(pr);
    }
  }
  out.resize(K);
  return out;
}

}  // namespace

TEST_CASE("pair canonical form") {
  CHECK(PairIndex::canonical(3, 1) == PairIndex{1, 3});
  CHECK(PairIndex::canonical(2, 2).multiplicity() == 1);
  CHECK(PairIndex::canonical(0, 2).multiplicity() == 2);
  CHECK_THROWS_AS(PairIndex::canonical(-1, 2), std::invalid_argument);
  CHECK(to_string(PairIndex{0, 3}) == "(0,3)");
}

TEST_CASE("pair values against the oracle") {
  for (double h : {-0.2, -1.0, -4.0}) {
    for (PairIndex pr : {PairIndex{0, 0}, PairIndex{0, 3}, PairIndex{1, 4}, PairIndex{2, 5}}) {
      CAPTURE(h);
      CHECK(pair_value(pr, RobinParam(h)) ==
            doctest::Approx(static_cast<double>(oracle_pair(pr, h))).epsilon(1e-11));
    }
  }
}

TEST_CASE("pair value limits") {
  CHECK(pair_value({2, 2}, RobinParam(-1e-10)) == doctest::Approx(8.0).epsilon(1e-8));
  CHECK(pair_value({0, 3}, RobinParam(-1e-10)) == doctest::Approx(9.0).epsilon(1e-8));
  CHECK(pair_value({2, 2}, RobinParam(-1e5)) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("ordering of the first 19 labels at h = -20") {
  const auto entries = enumerate_spectrum(RobinParam(-20.0), 19);
  const std::vector<PairIndex> expected = {
      {0, 0}, {0, 1}, {0, 1}, {1, 1}, {0, 2}, {0, 2}, {1, 2}, {1, 2}, {0, 3}, {0, 3},
      {1, 3}, {1, 3}, {0, 4}, {0, 4}, {1, 4}, {1, 4}, {0, 5}, {0, 5}, {1, 5}};
  CHECK(labels_of(entries, 19) == expected);
  for (const auto& e : entries) {
    CHECK(e.negative());
    CHECK(e.pairs.size() == 1);
    CHECK(e.multiplicity == e.pairs.front().multiplicity());
  }
}

TEST_CASE("multiplicities at h = -4") {
  const auto entries = enumerate_spectrum(RobinParam(-4.0), 16);
  const std::vector<PairIndex> lead = {{0, 0}, {0, 1}, {1, 1}, {0, 2}, {1, 2}, {0, 3},
                                       {1, 3}, {0, 4}, {1, 4}};
  REQUIRE(entries.size() >= lead.size());
  for (std::size_t i = 0; i < lead.size(); ++i) {
    CHECK(entries[i].pairs == std::vector<PairIndex>{lead[i]});
    CHECK(entries[i].multiplicity == (lead[i].diagonal() ? 1 : 2));
  }
}

TEST_CASE("shallow degeneracy of (0,1)") {
  const auto entries = enumerate_spectrum(RobinParam(-0.2), 3);
  REQUIRE(entries.size() >= 2);
  CHECK(entries[1].label == 2);
  CHECK(entries[1].multiplicity == 2);
  CHECK(entries[1].contains({0, 1}));
}

TEST_CASE("labels are minimal and cover 1..n") {
  for (double h : {-0.05, -0.5, -1.0, -1.6293, -3.0, -12.0}) {
    const auto entries = enumerate_spectrum(RobinParam(h), 40);
    int expect = 1;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      CHECK(entries[i].label == expect);
      int m = 0;
      for (const auto& pr : entries[i].pairs) m += pr.multiplicity();
      CHECK(entries[i].multiplicity == m);
      expect += m;
      if (i > 0) CHECK(entries[i].value >= entries[i - 1].value);
    }
    CHECK(entries.back().last_label() >= 40);
  }
}

TEST_CASE("enumeration agrees with brute force sorting of oracle values") {
  for (double h : {-0.3, -2.0}) {
    std::vector<std::pair<long double, PairIndex>> all;
    for (int q = 0; q <= 14; ++q) {
      for (int p = 0; p <= q; ++p) {
        const long double v = oracle_pair({p, q}, h);
        for (int m = 0; m < PairIndex{p, q}.multiplicity(); ++m) all.push_back({v, {p, q}});
      }
    }
    std::sort(all.begin(), all.end());
    const auto entries = enumerate_spectrum(RobinParam(h), 30);
    const auto labels = labels_of(entries, 30);
    for (int k = 0; k < 30; ++k) {
      CAPTURE(k);
      CHECK(labels[k] == all[k].second);
    }
  }
}

TEST_CASE("undersized candidate pools are reported") {
  SpectrumOptions opts;
  opts.initial_cutoff = 2;
  opts.max_cutoff = 3;
  CHECK_THROWS_AS(enumerate_spectrum(RobinParam(-20.0), 19, opts), CutoffTooSmall);
  CHECK_THROWS_AS(enumerate_spectrum(RobinParam(-1.0), 0), std::invalid_argument);
}

TEST_CASE("sigma anchors") {
  CHECK(sigma({0, 2}, {1, 1}, RobinParam(-1e-12)) == doctest::Approx(2.0).epsilon(1e-9));
  const RobinParam crit(kCriticalH - 1e-8);
  CHECK(kPi * kPi * sigma({0, 2}, {1, 1}, crit) == doctest::Approx(25.5669).epsilon(1e-5));
  CHECK(kPi * kPi * sigma({0, 3}, {1, 2}, crit) == doctest::Approx(43.6821).epsilon(1e-5));
}

TEST_CASE("exact differences resolve exponentially close deep curves") {
  ModeTable t(RobinParam(-20.0), 5);
  const auto d = pair_difference({0, 3}, {1, 3}, t);
  CHECK(d.value < 0.0);
  CHECK_FALSE(d.degenerate());
  const double b0 = t[0].root, b1 = t[1].root;
  // -(beta0^2 - beta1^2)/pi^2 = -(b0 - b1)(b0 + b1)/pi^2
  CHECK(d.value == doctest::Approx(-(t[0].shift - t[1].shift) * (b0 + b1) / (kPi * kPi)));
  CHECK(pair_difference({2, 3}, {3, 2}, t).degenerate());
}

TEST_CASE("analytic sigma' matches finite differences") {
  for (double h : {-0.3, -1.2, -5.0}) {
    for (auto [a, b] : {std::pair<PairIndex, PairIndex>{{0, 3}, {2, 2}},
                        std::pair<PairIndex, PairIndex>{{1, 4}, {2, 3}},
                        std::pair<PairIndex, PairIndex>{{2, 6}, {4, 4}}}) {
      const double d = 1e-5;
      const double fd = (sigma(a, b, RobinParam(h + d)) - sigma(a, b, RobinParam(h - d))) / (2 * d);
      CHECK(sigma_prime(a, b, RobinParam(h)) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("a_k signs") {
  for (int i = 0; i < 30; ++i) {
    const double h = -std::pow(10.0, -2.0 + 3.5 * i / 29.0);
    if (std::fabs(h - kCriticalH) < 1e-6) continue;
    const RobinParam p(h);
    CAPTURE(h);
    CHECK(a_value(0, p).value < 0.0);
    if (h > kCriticalH) {
      CHECK(a_value(1, p).value >= 0.0);
    } else {
      CHECK(a_value(1, p).value < 0.0);
    }
    for (int k = 2; k <= 6; ++k) CHECK(a_value(k, p).value >= 0.0);
  }
  const AkValue a2 = a_value(2, RobinParam(kCriticalH));
  const double alpha2 = solve_alpha(2, RobinParam(kCriticalH)).root;
  CHECK(a2.value == doctest::Approx(alpha2 * alpha2 / 2).epsilon(1e-12));
}

TEST_CASE("table case classification is combinatorial") {
  CHECK(classify_pairs({0, 4}, {1, 1}).table_case == TableCase::I);
  CHECK(classify_pairs({1, 1}, {0, 4}).outer == PairIndex{0, 4});
  CHECK(classify_pairs({0, 5}, {1, 3}).table_case == TableCase::II);
  CHECK(classify_pairs({0, 3}, {2, 2}).table_case == TableCase::III);
  CHECK(classify_pairs({1, 5}, {2, 4}).table_case == TableCase::IV);
  CHECK(classify_pairs({2, 4}, {3, 3}).table_case == TableCase::V);
  CHECK(classify_pairs({0, 3}, {1, 3}).table_case == TableCase::Unclassified);
  CHECK(classify_pairs({0, 2}, {1, 3}).table_case == TableCase::Unclassified);
  CHECK(crossing_cap(TableCase::I) == 1);
  CHECK(crossing_cap(TableCase::V) == 2);
  CHECK(crossing_cap(TableCase::II) == -1);
}

TEST_CASE("the (2,2)/(0,3) crossing") {
  const auto rec = find_crossings({2, 2}, {0, 3}, -4.0, -0.1);
  REQUIRE(rec.size() == 1);
  const long double oracle_h = oracle::bisect(
      [](long double h) { return oracle_pair({0, 3}, h) - oracle_pair({2, 2}, h); }, -3.0L, -1.0L);
  CHECK(rec[0].h_cross == doctest::Approx(static_cast<double>(oracle_h)).epsilon(1e-9));
  CHECK(rec[0].pair_a == PairIndex{0, 3});
  CHECK(rec[0].table_case == TableCase::III);
  CHECK(rec[0].sigma_prime_sign == rec[0].analytic_sign);
  CHECK(rec[0].sigma_prime_sign == rec[0].predicted_sign);
  CHECK(find_h9_star() == doctest::Approx(rec[0].h_cross).epsilon(1e-9));
}

TEST_CASE("no crossing for (0,2)/(1,1)") {
  CHECK(find_crossings({0, 2}, {1, 1}, -8.0, -0.01).empty());
}

TEST_CASE("case v crossings agree with a dense oracle scan") {
  const PairIndex a{2, 4}, b{3, 3};
  const auto rec = find_crossings(a, b, -50.0, -0.01);
  int changes = 0;
  long double prev = 0;
  for (int i = 0; i <= 10000; ++i) {
    const long double h = -50.0L + (50.0L - 0.01L) * i / 10000;
    if (std::fabs(static_cast<double>(h) - kCriticalH) < 1e-6) continue;
    const long double s = oracle_pair(a, h) - oracle_pair(b, h);
    if (i > 0 && (s < 0) != (prev < 0)) ++changes;
    prev = s;
  }
  CHECK(static_cast<int>(rec.size()) == changes);
  CHECK(rec.size() <= 2);
  for (const auto& r : rec) {
    CHECK(r.sigma_prime_sign == r.predicted_sign);
  }
}

TEST_CASE("crossing signs across the case table") {
  // one representative per case with a crossing in range
  const std::vector<std::pair<PairIndex, PairIndex>> cases = {
      {{0, 4}, {2, 2}}, {{1, 4}, {2, 2}}, {{2, 9}, {6, 7}}, {{0, 5}, {1, 4}}, {{1, 3}, {2, 2}}};
  int seen = 0;
  for (auto [a, b] : cases) {
    for (const auto& r : find_crossings(a, b, -50.0, -0.01)) {
      ++seen;
      CAPTURE(to_string(r.pair_a));
      CAPTURE(to_string(r.pair_b));
      CAPTURE(r.h_cross);
      CHECK(std::fabs(r.sigma_at_cross) < 1e-8);
      CHECK(r.sigma_prime_sign == r.analytic_sign);
      CHECK(r.sigma_prime_sign == r.predicted_sign);
    }
  }
  CHECK(seen >= 3);
}

TEST_CASE("crossing caps over random quadruples") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> slot(0, 8);
  int tested = 0;
  while (tested < 30) {
    const PairIndex a = PairIndex::canonical(slot(rng), slot(rng));
    const PairIndex b = PairIndex::canonical(slot(rng), slot(rng));
    const auto cls = classify_pairs(a, b);
    if (cls.table_case == TableCase::Unclassified || cls.table_case == TableCase::II) continue;
    ++tested;
    const auto rec = find_crossings(a, b, -50.0, -0.01);
    CAPTURE(to_string(a));
    CAPTURE(to_string(b));
    CHECK(static_cast<int>(rec.size()) <= crossing_cap(cls.table_case));
    for (const auto& r : rec) CHECK(r.sigma_prime_sign == r.predicted_sign);
  }
}

TEST_CASE("crossing scan arguments") {
  CHECK_THROWS_AS(find_crossings({0, 2}, {1, 1}, -1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(find_crossings({0, 2}, {2, 0}, -2.0, -1.0), std::invalid_argument);
}

TEST_CASE("h2 star") {
  const double h2 = find_h2_star();
  CHECK(h2 == doctest::Approx(-0.4382).epsilon(2.5e-4));
  CHECK(pair_value({0, 1}, RobinParam(h2 - 1e-3)) < 0.0);
  CHECK(pair_value({0, 1}, RobinParam(h2 + 1e-3)) > 0.0);
}

TEST_CASE("h9 star") {
  const double h9 = find_h9_star();
  CHECK(h9 == doctest::Approx(-1.6293).epsilon(6e-5));
  CHECK(pair_value({2, 2}, RobinParam(-1.0)) < pair_value({0, 3}, RobinParam(-1.0)));
  CHECK(pair_value({2, 2}, RobinParam(-3.0)) > pair_value({0, 3}, RobinParam(-3.0)));
}

TEST_CASE("tilde h") {
  for (int q = 2; q <= 8; ++q) {
    const double t = tilde_h(q);
    CHECK(pair_value({0, q}, RobinParam(t - 0.1)) < 0.0);
    CHECK(pair_value({0, q}, RobinParam(t + 0.1)) > 0.0);
    if (q > 2) CHECK(t < tilde_h(q - 1));
  }
  CHECK_THROWS_AS(tilde_h(1), std::invalid_argument);
}

TEST_CASE("minimal labels in the deep regime") {
  const auto rep = minimal_labelling_check(RobinParam(-20.0));
  CHECK(rep.all_pass());
  auto label_of = [&](PairIndex pr) {
    for (const auto& c : rep.checks) {
      if (c.pair == pr) return c.actual_label;
    }
    return -1;
  };
  CHECK(label_of({0, 3}) == 9);
  CHECK(label_of({1, 2}) == 7);
  CHECK(label_of({1, 3}) == 11);
  for (double h : {-0.7, -2.0, -8.0, -40.0}) {
    CHECK(minimal_labelling_check(RobinParam(h)).all_pass());
  }
  CHECK_THROWS_AS(minimal_labelling_check(RobinParam(-0.5)), RegimeError);
}

TEST_CASE("negative spectrum structure below -2/pi") {
  for (double h : {-0.7, -1.3, -3.0, -9.0, -25.0}) {
    const auto neg = negative_spectrum(RobinParam(h));
    // (0,0), (0,1), (1,1), (0,2), (1,2), ..., (0,N), (1,N)?
    std::vector<PairIndex> seq;
    for (const auto& e : neg) {
      CHECK(e.pairs.size() == 1);
      seq.push_back(e.pairs.front());
    }
    REQUIRE(seq.size() >= 3);
    CHECK(seq[0] == PairIndex{0, 0});
    CHECK(seq[1] == PairIndex{0, 1});
    CHECK(seq[2] == PairIndex{1, 1});
    for (std::size_t i = 3; i < seq.size(); ++i) {
      const int q = 2 + static_cast<int>(i - 3) / 2;
      CHECK(seq[i] == PairIndex{static_cast<int>((i - 3) % 2), q});
    }
    const auto n = negative_pair_counts(RobinParam(h));
    CHECK(n.n0 >= n.n1);
    CHECK(n.n0 - n.n1 <= 1);
    CHECK(pair_value({0, n.n0 + 1}, RobinParam(h)) > 0.0);
  }
}

TEST_CASE("gap monotonicity") {
  for (int k = 3; k <= 6; ++k) {
    for (int l = 2; l < k; ++l) {
      double prev = 0.0;
      for (int i = 0; i < 20; ++i) {
        const double h = -10.0 + (10.0 - 0.6367 * 1.0001) * i / 19.0;
        const RobinParam p(h);
        const double g = std::pow(solve_alpha(k, p).root, 2) - std::pow(solve_alpha(l, p).root, 2);
        if (i > 0) CHECK(g >= prev - 1e-10);
        prev = g;
      }
      for (int i = 0; i < 20; ++i) {
        const double h = kCriticalH + 1e-3 + (-1e-3 - kCriticalH - 1e-3) * i / 19.0;
        const RobinParam p(h);
        const double g = std::pow(solve_alpha(k, p).root, 2) - std::pow(solve_alpha(l, p).root, 2);
        if (i > 0) CHECK(g <= prev + 1e-10);
        prev = g;
      }
    }
  }
  double prev = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double h = -10.0 + (10.0 - 0.64) * i / 19.0;
    ModeTable t(RobinParam(h), 1);
    const double g = (t[0].shift - t[1].shift) * (t[0].root + t[1].root);
    if (i > 0) CHECK(g >= prev);
    prev = g;
  }
}

TEST_CASE("(1,q') lies below (0,q) in the deep regime") {
  for (double h : {-0.7, -1.5, -4.0, -12.0}) {
    const RobinParam p(h);
    for (int q = 3; q <= 8; ++q) {
      for (int qp = 2; qp < q; ++qp) CHECK(pair_value({1, qp}, p) < pair_value({0, q}, p));
      CHECK(pair_value({1, q}, p) < pair_value({0, q + 1}, p));
    }
  }
}

TEST_CASE("counting bound") {
  CHECK(counting_f(1090.0) < 0.0);
  CHECK(counting_f_root() == doctest::Approx(1091.2927).epsilon(1e-7));
  CHECK(counting_f(counting_f_root()) == doctest::Approx(0.0).epsilon(1e-15));
  const auto r = counting_bound_check(100.0, RobinParam(-1.0));
  CHECK(r.n_plus >= kPi * 25 - 40);
  const auto r2 = counting_bound_check(200.0, RobinParam(-1.0));
  CHECK(r2.lower_ok());
  CHECK(r2.upper_ok());
  long long upper = 0;
  for (int i = 2; i < 40; ++i) {
    for (int j = 2; j < 40; ++j) upper += (i - 1) * (i - 1) + (j - 1) * (j - 1) < 200;
  }
  CHECK(r2.lattice_upper == upper);
  CHECK(upper <= kPi / 4 * 200);
}
