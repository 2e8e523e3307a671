#pragma once

// CSV and SVG emitters. CSV follows RFC 4180 quoting with '\n' line ends and
// numbers printed with 15 significant digits.

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "robin/contour.hpp"
#include "robin/nodal_analysis.hpp"
#include "robin/square_spectrum.hpp"

namespace robin::report {

std::string format_number(double v);
std::string csv_field(std::string_view s);
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

// "(0,1)" or "(2,2);(0,3)" for merged entries.
std::string pairs_field(const std::vector<PairIndex>& pairs);

// k,value,pairs,multiplicity,negative -- one row per label 1..K.
void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumEntry>& entries, int K);
// pair_a,pair_b,h_cross,sigma_prime_sign,case
void write_crossings_csv(std::ostream& os, const std::vector<CrossingRecord>& rows);
// theta,domains,boundary_zeros,critical_zeros,euler_bound
void write_nodal_csv(std::ostream& os, const std::vector<NodalReport>& rows);
// k,value,verdict,evidence
void write_verdict_csv(std::ostream& os, const std::vector<VerdictResult>& rows);

// Square [-pi/2, pi/2]^2 (y up), nodal polylines, critical zeros as r = 0.01
// circles.
void write_nodal_svg(std::ostream& os, const std::vector<Polyline>& lines,
                     const std::vector<Point2>& critical, const std::string& title);

struct Eigencurve {
  PairIndex pair;
  std::vector<std::pair<double, double>> points;  // (h, lambda)
};

// lambda_(p,q)(h) at `samples` points spaced uniformly in log|h|.
std::vector<Eigencurve> sample_eigencurves(const std::vector<PairIndex>& pairs, double h_min,
                                           double h_max, int samples);
void write_eigencurve_svg(std::ostream& os, const std::vector<Eigencurve>& curves,
                          const std::vector<CrossingRecord>& crossings);

}  // namespace robin::report
