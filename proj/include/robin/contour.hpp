#pragma once

// Zero-level polylines by marching squares.

#include <vector>

#include "robin/nodal_analysis.hpp"

namespace robin {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Polyline {
  std::vector<Point2> points;
  bool closed = false;
};

// values[j * nx + i] sampled at (x0 + i dx, y0 + j dy). Samples equal to zero
// count as positive; ambiguous saddle cells are split by the cell-centre
// average. Segments are chained into polylines through shared cell edges.
std::vector<Polyline> marching_squares(const std::vector<double>& values, int nx, int ny,
                                       double x0, double y0, double dx, double dy);

// Nodal set of Phi on the (R+1)^2 grid over the square.
std::vector<Polyline> nodal_polylines(const EigenfunctionSpec& spec, int resolution,
                                      int threads = 0);

}  // namespace robin
