#pragma once

// Zero level set of a scalar field sampled on a rectilinear grid (marching
// squares). Edge crossings are located by bisection on the field itself, not by
// linear interpolation, and shared between neighbouring cells so that segments
// chain into polylines exactly.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "otima/error.hpp"
#include "otima/numerics.hpp"

namespace otima::level_set {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Polyline = std::vector<Point>;

namespace detail {

// Edge key: orientation (0 = along x, 1 = along y) and lower-left node index.
using EdgeKey = std::array<std::size_t, 3>;

}  // namespace detail

/// Trace f(x, y) == 0 over the grid xs x ys (both strictly increasing).
///
/// "Inside" is f > 0. Polylines are oriented by increasing y (ties: decreasing
/// x) and sorted by their first point.
template <class F>
std::vector<Polyline> trace(const std::vector<double>& xs, const std::vector<double>& ys, F&& f,
                            int bisection_steps = 60) {
  const std::size_t nx = xs.size(), ny = ys.size();
  if (nx < 2 || ny < 2) throw DomainError("level_set: grid must be at least 2x2");
  for (std::size_t i = 1; i < nx; ++i)
    if (!(xs[i] > xs[i - 1])) throw DomainError("level_set: x grid must increase");
  for (std::size_t j = 1; j < ny; ++j)
    if (!(ys[j] > ys[j - 1])) throw DomainError("level_set: y grid must increase");

  std::vector<double> v(nx * ny);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) v[j * nx + i] = f(xs[i], ys[j]);
  const auto inside = [&](std::size_t i, std::size_t j) { return v[j * nx + i] > 0.0; };

  std::map<detail::EdgeKey, std::size_t> edge_point;
  std::vector<Point> points;
  const auto crossing = [&](const detail::EdgeKey& key) -> std::size_t {
    if (auto it = edge_point.find(key); it != edge_point.end()) return it->second;
    const std::size_t i = key[1], j = key[2];
    Point p;
    if (key[0] == 0) {
      p.y = ys[j];
      const double y = p.y;
      const auto g = [&](double x) { return f(x, y) > 0.0 ? 1.0 : -1.0; };
      p.x = numerics::bisect(g, xs[i], xs[i + 1], bisection_steps);
    } else {
      p.x = xs[i];
      const double x = p.x;
      const auto g = [&](double y) { return f(x, y) > 0.0 ? 1.0 : -1.0; };
      p.y = numerics::bisect(g, ys[j], ys[j + 1], bisection_steps);
    }
    points.push_back(p);
    edge_point.emplace(key, points.size() - 1);
    return points.size() - 1;
  };

  std::vector<std::pair<std::size_t, std::size_t>> segments;
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const bool b0 = inside(i, j), b1 = inside(i + 1, j), b2 = inside(i + 1, j + 1),
                 b3 = inside(i, j + 1);
      const detail::EdgeKey bottom{0, i, j}, right{1, i + 1, j}, top{0, i, j + 1}, left{1, i, j};
      std::vector<detail::EdgeKey> cut;
      if (b0 != b1) cut.push_back(bottom);
      if (b1 != b2) cut.push_back(right);
      if (b2 != b3) cut.push_back(top);
      if (b3 != b0) cut.push_back(left);
      if (cut.size() == 2) {
        segments.emplace_back(crossing(cut[0]), crossing(cut[1]));
      } else if (cut.size() == 4) {
        const bool centre = f(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])) > 0.0;
        if (centre == b0) {
          segments.emplace_back(crossing(bottom), crossing(right));
          segments.emplace_back(crossing(top), crossing(left));
        } else {
          segments.emplace_back(crossing(left), crossing(bottom));
          segments.emplace_back(crossing(right), crossing(top));
        }
      }
    }
  }

  // Chain segments through shared crossing points.
  std::vector<std::vector<std::size_t>> incident(points.size());
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].first].push_back(s);
    incident[segments[s].second].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);
  const auto walk = [&](std::size_t start) {
    std::vector<std::size_t> chain{start};
    std::size_t at = start;
    for (;;) {
      bool moved = false;
      for (std::size_t s : incident[at]) {
        if (used[s]) continue;
        used[s] = true;
        at = segments[s].first == at ? segments[s].second : segments[s].first;
        chain.push_back(at);
        moved = true;
        break;
      }
      if (!moved) break;
    }
    return chain;
  };

  std::vector<Polyline> lines;
  const auto emit = [&](const std::vector<std::size_t>& chain) {
    Polyline line;
    for (std::size_t idx : chain) line.push_back(points[idx]);
    const Point& a = line.front();
    const Point& b = line.back();
    if (b.y < a.y || (b.y == a.y && b.x > a.x)) std::reverse(line.begin(), line.end());
    lines.push_back(std::move(line));
  };
  // Open lines start at boundary points (one incident segment), then closed loops.
  for (std::size_t p = 0; p < points.size(); ++p)
    if (incident[p].size() == 1 && !used[incident[p][0]]) emit(walk(p));
  for (std::size_t s = 0; s < segments.size(); ++s)
    if (!used[s]) emit(walk(segments[s].first));

  std::sort(lines.begin(), lines.end(), [](const Polyline& a, const Polyline& b) {
    if (a.front().y != b.front().y) return a.front().y < b.front().y;
    return a.front().x < b.front().x;
  });
  return lines;
}

}  // namespace otima::level_set
