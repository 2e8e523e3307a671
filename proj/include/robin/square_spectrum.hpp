#pragma once

// Robin spectrum of the square (-pi/2, pi/2)^2. Every eigenvalue is
// pi^-2 (s_p + s_q) for a pair of interval slots, where s_k is alpha_k^2 for
// trigonometric slots and -beta^2 for hyperbolic ones.

#include <compare>
#include <string>
#include <vector>

#include "robin/interval_spectrum.hpp"

namespace robin {

// Two values are merged when they differ by less than this fraction of the
// size of the terms that survive cancellation (see pair_difference).
inline constexpr double kDegeneracyTolerance = 1e-9;

struct PairIndex {
  int p = 0;
  int q = 0;

  // Orders the slots so that p <= q. Throws std::invalid_argument on negative
  // slots.
  static PairIndex canonical(int a, int b);
  bool diagonal() const { return p == q; }
  // 1 for p == q, 2 otherwise.
  int multiplicity() const { return diagonal() ? 1 : 2; }

  auto operator<=>(const PairIndex&) const = default;
};

std::string to_string(PairIndex pair);

double pair_value(PairIndex pair, RobinParam h);
double pair_value(PairIndex pair, ModeTable& table);

// value(a) - value(b) with common slots cancelled and the -h^2 pi^2 parts of
// hyperbolic slots cancelled by count, so exponentially small differences
// such as (0,q) vs (1,q) for very negative h are resolved.
struct PairDifference {
  double value = 0.0;
  // pi^-2 times the magnitude of the uncancelled terms.
  double scale = 0.0;
  bool degenerate() const;
};
PairDifference pair_difference(PairIndex a, PairIndex b, ModeTable& table);

// sigma(h) = value(a) - value(b).
double sigma(PairIndex a, PairIndex b, RobinParam h);
// Analytic derivative (2/pi) sum(+-s_k / a_k), valid wherever no a_k vanishes.
double sigma_prime(PairIndex a, PairIndex b, RobinParam h);

struct SpectrumEntry {
  int label = 0;  // minimal label
  double value = 0.0;
  std::vector<PairIndex> pairs;
  int multiplicity = 0;

  bool negative() const { return value < 0.0; }
  bool contains(PairIndex pair) const;
  // Labels label .. label + multiplicity - 1 all carry this value.
  int last_label() const { return label + multiplicity - 1; }
};

struct SpectrumOptions {
  // Largest slot in the first candidate pool; 0 picks K + 4.
  int initial_cutoff = 0;
  // The pool is never grown past this slot.
  int max_cutoff = 4096;
};

// Entries covering labels 1..K (the last entry may extend past K). Throws
// CutoffTooSmall if a pool bounded by max_cutoff cannot certify the K-th value.
std::vector<SpectrumEntry> enumerate_spectrum(RobinParam h, int K,
                                              const SpectrumOptions& opts = {});
// All entries with negative value.
std::vector<SpectrumEntry> negative_spectrum(RobinParam h);

// N(h), N'(h): the largest q with lambda_(0,q) < 0 and with lambda_(1,q) < 0
// (-1 if none).
struct NegativePairCounts {
  int n0 = -1;
  int n1 = -1;
};
NegativePairCounts negative_pair_counts(RobinParam h);

struct AkValue {
  int slot = 0;
  double h = 0.0;
  double value = 0.0;
};
// a_k(h) = h pi + s_k/2 + h^2 pi^2/2.
AkValue a_value(int slot, RobinParam h);
double a_value(const IntervalEigenvalue& mode);

// Sign classification of sigma' at a crossing between an outer pair (p,q) and
// an inner pair (p',q') with p < p' <= q' < q.
enum class TableCase { I, II, III, IV, V, Unclassified };
const char* to_string(TableCase c);

struct CaseAssignment {
  TableCase table_case = TableCase::Unclassified;
  PairIndex outer;
  PairIndex inner;
};
CaseAssignment classify_pairs(PairIndex a, PairIndex b);

// Sign of sigma' = d/dh (value(outer) - value(inner)) at a crossing. Case (ii)
// below -2/pi has no fixed sign; the closed form is evaluated at h instead.
int table_sign(TableCase c, PairIndex outer, PairIndex inner, RobinParam h);
// Crossings allowed on (-inf, 0): 1 for case (i), 2 for (iii)-(v), -1 if the
// case carries no bound.
int crossing_cap(TableCase c);

struct CrossingRecord {
  // Oriented as outer - inner when the pairs are classifiable.
  PairIndex pair_a;
  PairIndex pair_b;
  double h_cross = 0.0;
  double sigma_at_cross = 0.0;
  // Central-difference estimate and its sign.
  double sigma_prime = 0.0;
  int sigma_prime_sign = 0;
  // Sign from the a_k closed form and from the case table.
  int analytic_sign = 0;
  int predicted_sign = 0;
  TableCase table_case = TableCase::Unclassified;
  Regime regime = Regime::Shallow;
};

struct CrossingScanOptions {
  int samples_per_decade = 2000;
  // Half-width of the excluded band around -2/pi.
  double guard_band = 1e-8;
  double h_tolerance = 1e-10;
  int threads = 0;
};

// Crossings of the eigencurves of a and b on [h_min, h_max] (h_max < 0),
// sorted by h. Throws ScanTooCoarse when a tangency cannot be resolved into
// zero or two crossings.
std::vector<CrossingRecord> find_crossings(PairIndex a, PairIndex b, double h_min,
                                           double h_max,
                                           const CrossingScanOptions& opts = {});

// Unique h in (-2/pi, 0) with beta_0 = alpha_1, i.e. lambda_(0,1) = 0.
double find_h2_star();
// Unique crossing of the (2,2) and (0,3) eigencurves.
double find_h9_star();
// Unique h with beta_0 = alpha_q; lambda_(0,q) < 0 below it. Requires q >= 2.
double tilde_h(int q);

struct LabellingCheck {
  PairIndex pair;
  int expected_label = 0;
  int actual_label = 0;
  bool pass = false;
};
struct LabellingReport {
  double h = 0.0;
  std::vector<LabellingCheck> checks;
  bool all_pass() const;
};
// For each negative entry given by (0, 2l+3), (1, 2l+2) or (1, 2l+3), checks
// the minimal label is 8l+9, 8l+7 or 8l+11 respectively. Requires h < -2/pi.
LabellingReport minimal_labelling_check(RobinParam h);

inline constexpr double kBesselJ0FirstZero = 2.404825557695773;

// f(lambda) = pi/4 - pi/j^2 - 8/sqrt(lambda).
double counting_f(double lambda);
// The unique zero of counting_f.
double counting_f_root();

struct CountingBoundReport {
  double lambda = 0.0;
  double h = 0.0;
  // Ordered pairs (i, j), i, j >= 2, with pi^-2 (alpha_i^2 + alpha_j^2) < lambda.
  long long n_plus = 0;
  // #{i, j >= 2 : i^2 + j^2 < lambda} and #{i, j >= 2 : (i-1)^2 + (j-1)^2 < lambda}.
  long long lattice_lower = 0;
  long long lattice_upper = 0;
  // pi lambda/4 - 4 sqrt(lambda) and pi lambda/4.
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double f_value = 0.0;
  bool lower_ok() const { return n_plus >= lattice_lower && lattice_lower >= lower_bound; }
  bool upper_ok() const { return n_plus <= lattice_upper && lattice_upper <= upper_bound; }
};
CountingBoundReport counting_bound_check(double lambda, RobinParam h);

}  // namespace robin
