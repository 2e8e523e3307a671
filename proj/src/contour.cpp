#include "robin/contour.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

#include "robin/parallel.hpp"

namespace robin {

namespace {

// Edge ids: horizontal edge (i,j)-(i+1,j) is 2*(j*nx+i), vertical edge
// (i,j)-(i,j+1) is 2*(j*nx+i)+1.
struct Segment {
  std::int64_t a;
  std::int64_t b;
};

}  // namespace

std::vector<Polyline> marching_squares(const std::vector<double>& v, int nx, int ny,
                                       double x0, double y0, double dx, double dy) {
  if (nx < 2 || ny < 2 || v.size() != static_cast<std::size_t>(nx) * ny) {
    throw std::invalid_argument("marching_squares: bad grid shape");
  }
  auto at = [&](int i, int j) { return v[static_cast<std::size_t>(j) * nx + i]; };
  auto hedge = [&](int i, int j) { return 2 * (static_cast<std::int64_t>(j) * nx + i); };
  auto vedge = [&](int i, int j) { return hedge(i, j) + 1; };

  std::unordered_map<std::int64_t, Point2> where;
  auto crossing = [&](std::int64_t id, int i, int j, bool vertical) {
    if (where.count(id)) return;
    const double a = at(i, j);
    const double b = vertical ? at(i, j + 1) : at(i + 1, j);
    const double t = a / (a - b);
    where[id] = vertical ? Point2{x0 + i * dx, y0 + (j + t) * dy}
                         : Point2{x0 + (i + t) * dx, y0 + j * dy};
  };

  std::vector<Segment> segs;
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double c[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
      int code = 0;
      for (int k = 0; k < 4; ++k) code |= (c[k] >= 0.0 ? 1 : 0) << k;
      if (code == 0 || code == 15) continue;
      // Edges in corner order: bottom, right, top, left.
      const std::array<std::int64_t, 4> e = {hedge(i, j), vedge(i + 1, j), hedge(i, j + 1),
                                             vedge(i, j)};
      std::vector<int> cut;
      for (int k = 0; k < 4; ++k) {
        const bool pa = c[k] >= 0.0, pb = c[(k + 1) % 4] >= 0.0;
        if (pa != pb) cut.push_back(k);
      }
      for (int k : cut) {
        switch (k) {
          case 0: crossing(e[0], i, j, false); break;
          case 1: crossing(e[1], i + 1, j, true); break;
          case 2: crossing(e[2], i, j + 1, false); break;
          default: crossing(e[3], i, j, true); break;
        }
      }
      if (cut.size() == 2) {
        segs.push_back({e[cut[0]], e[cut[1]]});
      } else if (cut.size() == 4) {
        const bool centre = (c[0] + c[1] + c[2] + c[3]) >= 0.0;
        const bool first = c[0] >= 0.0;
        if (centre == first) {
          segs.push_back({e[0], e[1]});
          segs.push_back({e[2], e[3]});
        } else {
          segs.push_back({e[3], e[0]});
          segs.push_back({e[1], e[2]});
        }
      }
    }
  }

  std::unordered_map<std::int64_t, std::vector<std::size_t>> touching;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    touching[segs[s].a].push_back(s);
    touching[segs[s].b].push_back(s);
  }
  std::vector<bool> used(segs.size(), false);
  auto next_from = [&](std::int64_t edge, std::size_t from) -> long {
    for (std::size_t s : touching[edge]) {
      if (s != from && !used[s]) return static_cast<long>(s);
    }
    return -1;
  };

  std::vector<Polyline> out;
  auto trace = [&](std::size_t start, std::int64_t start_edge) {
    Polyline pl;
    std::int64_t edge = start_edge;
    long s = static_cast<long>(start);
    pl.points.push_back(where[edge]);
    while (s >= 0) {
      used[s] = true;
      edge = segs[s].a == edge ? segs[s].b : segs[s].a;
      const Point2 pt = where[edge];
      if (pt.x != pl.points.back().x || pt.y != pl.points.back().y) pl.points.push_back(pt);
      s = next_from(edge, static_cast<std::size_t>(s));
    }
    pl.closed = pl.points.size() > 2 && edge == start_edge;
    out.push_back(std::move(pl));
  };
  // Open chains start at edges used by a single segment.
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    if (touching[segs[s].a].size() == 1) trace(s, segs[s].a);
    else if (touching[segs[s].b].size() == 1) trace(s, segs[s].b);
  }
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (!used[s]) trace(s, segs[s].a);
  }
  return out;
}

std::vector<Polyline> nodal_polylines(const EigenfunctionSpec& spec, int R, int threads) {
  if (R < 2) throw std::invalid_argument("resolution too small");
  const PhiEvaluator phi(spec);
  const int n = R + 1;
  const double step = kPi / R;
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  parallel_for(
      n,
      [&](std::size_t j) {
        const double y = -0.5 * kPi + step * static_cast<double>(j);
        for (int i = 0; i < n; ++i) v[j * n + i] = phi(-0.5 * kPi + step * i, y);
      },
      threads);
  return marching_squares(v, n, n, -0.5 * kPi, -0.5 * kPi, step, step);
}

}  // namespace robin
