#include "robin/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace robin::report {

namespace {

std::string svg_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  const bool quote = s.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!quote) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_field(fields[i]);
  }
  os << '\n';
}

std::string pairs_field(const std::vector<PairIndex>& pairs) {
  std::string out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out += ';';
    out += to_string(pairs[i]);
  }
  return out;
}

void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumEntry>& entries, int K) {
  write_csv_row(os, {"k", "value", "pairs", "multiplicity", "negative"});
  for (const auto& e : entries) {
    for (int k = e.label; k <= e.last_label() && k <= K; ++k) {
      write_csv_row(os, {std::to_string(k), format_number(e.value), pairs_field(e.pairs),
                         std::to_string(e.multiplicity), e.negative() ? "true" : "false"});
    }
  }
}

void write_crossings_csv(std::ostream& os, const std::vector<CrossingRecord>& rows) {
  write_csv_row(os, {"pair_a", "pair_b", "h_cross", "sigma_prime_sign", "case"});
  for (const auto& r : rows) {
    write_csv_row(os, {to_string(r.pair_a), to_string(r.pair_b), format_number(r.h_cross),
                       std::to_string(r.sigma_prime_sign), to_string(r.table_case)});
  }
}

void write_nodal_csv(std::ostream& os, const std::vector<NodalReport>& rows) {
  write_csv_row(os, {"theta", "domains", "boundary_zeros", "critical_zeros", "euler_bound"});
  for (const auto& r : rows) {
    write_csv_row(os, {format_number(r.spec.theta), std::to_string(r.domains),
                       std::to_string(r.boundary_zeros), std::to_string(r.interior_critical_zeros),
                       std::to_string(r.euler_upper_bound)});
  }
}

void write_verdict_csv(std::ostream& os, const std::vector<VerdictResult>& rows) {
  write_csv_row(os, {"k", "value", "verdict", "evidence"});
  for (const auto& r : rows) {
    write_csv_row(os, {std::to_string(r.label), format_number(r.value), to_string(r.verdict),
                       r.evidence});
  }
}

void write_nodal_svg(std::ostream& os, const std::vector<Polyline>& lines,
                     const std::vector<Point2>& critical, const std::string& title) {
  const double half = 0.5 * kPi;
  const std::string lo = svg_number(-half), side = svg_number(kPi);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << lo << ' ' << lo << ' ' << side
     << ' ' << side << "\" width=\"600\" height=\"600\">\n";
  os << "<title>" << xml_escape(title) << "</title>\n";
  os << "<g transform=\"scale(1,-1)\">\n";
  os << "<rect x=\"" << lo << "\" y=\"" << lo << "\" width=\"" << side << "\" height=\"" << side
     << "\" fill=\"white\" stroke=\"black\" stroke-width=\"0.01\"/>\n";
  for (const auto& pl : lines) {
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.008\" points=\"";
    for (std::size_t i = 0; i < pl.points.size(); ++i) {
      if (i) os << ' ';
      os << svg_number(pl.points[i].x) << ',' << svg_number(pl.points[i].y);
    }
    os << "\"/>\n";
  }
  for (const auto& c : critical) {
    os << "<circle cx=\"" << svg_number(c.x) << "\" cy=\"" << svg_number(c.y)
       << "\" r=\"0.01\" fill=\"#d62728\"/>\n";
  }
  os << "</g>\n</svg>\n";
}

std::vector<Eigencurve> sample_eigencurves(const std::vector<PairIndex>& pairs, double h_min,
                                           double h_max, int samples) {
  if (!(h_min < h_max) || h_max >= 0.0 || samples < 2) {
    throw std::invalid_argument("eigencurves need h_min < h_max < 0 and at least 2 samples");
  }
  std::vector<Eigencurve> out;
  const double a = std::log(-h_max), b = std::log(-h_min);
  for (const PairIndex& p : pairs) {
    Eigencurve c;
    c.pair = p;
    for (int i = 0; i < samples; ++i) {
      const double h = -std::exp(a + (b - a) * i / (samples - 1));
      c.points.emplace_back(h, pair_value(p, RobinParam(h)));
    }
    std::sort(c.points.begin(), c.points.end());
    out.push_back(std::move(c));
  }
  return out;
}

void write_eigencurve_svg(std::ostream& os, const std::vector<Eigencurve>& curves,
                          const std::vector<CrossingRecord>& crossings) {
  double hmin = std::numeric_limits<double>::infinity(), hmax = -hmin;
  double lmin = hmin, lmax = -hmin;
  for (const auto& c : curves) {
    for (const auto& [h, l] : c.points) {
      hmin = std::min(hmin, h);
      hmax = std::max(hmax, h);
      lmin = std::min(lmin, l);
      lmax = std::max(lmax, l);
    }
  }
  if (!(hmin < hmax)) {
    hmin = -1.0;
    hmax = 0.0;
  }
  if (!(lmin < lmax)) {
    lmin -= 1.0;
    lmax += 1.0;
  }
  constexpr double W = 800, H = 500, M = 50;
  auto px = [&](double h) { return M + (h - hmin) / (hmax - hmin) * (W - 2 * M); };
  auto py = [&](double l) { return H - M - (l - lmin) / (lmax - lmin) * (H - 2 * M); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << ' ' << H
     << "\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W - 2 * M << "\" height=\""
     << H - 2 * M << "\" fill=\"white\" stroke=\"black\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">h ["
     << svg_number(hmin) << ", " << svg_number(hmax) << "]</text>\n";
  os << "<text x=\"10\" y=\"" << M - 10 << "\">lambda [" << svg_number(lmin) << ", "
     << svg_number(lmax) << "]</text>\n";
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const char* colour = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < curves[k].points.size(); ++i) {
      if (i) os << ' ';
      os << svg_number(px(curves[k].points[i].first)) << ','
         << svg_number(py(curves[k].points[i].second));
    }
    os << "\"/>\n";
    os << "<text x=\"" << W - M + 4 << "\" y=\"" << M + 16 * (k + 1) << "\" fill=\"" << colour
       << "\" font-size=\"12\">" << xml_escape(to_string(curves[k].pair)) << "</text>\n";
  }
  for (const auto& c : crossings) {
    const double l = pair_value(c.pair_a, RobinParam(c.h_cross));
    os << "<circle cx=\"" << svg_number(px(c.h_cross)) << "\" cy=\"" << svg_number(py(l))
       << "\" r=\"4\" fill=\"none\" stroke=\"black\"/>\n";
  }
  os << "</svg>\n";
}

}  // namespace robin::report
