#include "layout/semantics.hpp"

#include "layout/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace layout {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSliver = 1e-12;

double wrap_turn(double d) {
  while (d > std::numbers::pi) d -= kTwoPi;
  while (d <= -std::numbers::pi) d += kTwoPi;
  return d;
}

double frac(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

}  // namespace

double TurningFunction::operator()(double s) const {
  const double k = std::floor(s);
  const double r = s - k;
  auto it = std::upper_bound(breaks.begin(), breaks.end(), r);
  const std::size_t idx = it == breaks.begin() ? 0 : std::size_t(it - breaks.begin()) - 1;
  return angle[idx] + kTwoPi * k;
}

TurningFunction turning_function(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 4) throw Error(ErrorKind::DegeneratePolygon, "polygon has " + std::to_string(n) + " vertices");
  std::vector<double> len(n), heading(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Vector2d e = poly[(k + 1) % n] - poly[k];
    len[k] = e.norm();
    if (len[k] <= 0.0) throw Error(ErrorKind::DegeneratePolygon, "zero-length edge at vertex " + std::to_string(k));
    heading[k] = std::atan2(e.y(), e.x());
    total += len[k];
  }
  TurningFunction tf;
  double s = 0.0, theta = heading[0];
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) theta += wrap_turn(heading[k] - heading[k - 1]);
    tf.breaks.push_back(s / total);
    tf.angle.push_back(theta);
    s += len[k];
  }
  return tf;
}

double turning_distance_sq_at(const TurningFunction& a, const TurningFunction& b, double shift) {
  std::vector<double> cuts = b.breaks;
  for (double x : a.breaks) cuts.push_back(frac(x - shift));
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  // Pieces narrower than kSliver are breaks that differ only by rounding.
  std::vector<std::pair<double, double>> pieces;
  double mean = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double w = cuts[k + 1] - cuts[k];
    if (w <= kSliver) continue;
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    pieces.emplace_back(w, a(mid + shift) - b(mid));
    mean += w * pieces.back().second;
  }
  double total = 0.0, sq = 0.0;
  for (const auto& [w, f] : pieces) total += w;
  if (total <= 0.0) return 0.0;
  mean /= total;
  for (const auto& [w, f] : pieces) sq += w * (f - mean) * (f - mean);
  return sq / total;
}

double turning_distance(const TurningFunction& a, const TurningFunction& b) {
  double best = std::numeric_limits<double>::infinity();
  for (double x : a.breaks)
    for (double y : b.breaks) best = std::min(best, turning_distance_sq_at(a, b, frac(x - y)));
  return std::sqrt(best);
}

double turning_distance(const Polygon& a, const Polygon& b) {
  return turning_distance(turning_function(a), turning_function(b));
}

Polygon unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

RegionLabel classify(double perimeter, double turning_distance, const ClassifierParams& params) {
  return perimeter < params.max_perimeter && turning_distance < params.max_turning_distance ? RegionLabel::Room
                                                                                             : RegionLabel::Corridor;
}

RegionLabel classify(const Region& region, const ClassifierParams& params) {
  return classify(perimeter(region.outer_boundary), turning_distance(region.outer_boundary, unit_square()), params);
}

RegionFeatures region_features(const Region& region) {
  RegionFeatures f;
  f.area = signed_area(region.outer_boundary);
  for (const auto& h : region.holes) f.area -= std::abs(signed_area(h));
  f.perimeter = perimeter(region.outer_boundary);
  const Bounds bb = bounding_box(region.outer_boundary);
  const double lo = std::min(bb.width(), bb.height()), hi = std::max(bb.width(), bb.height());
  f.aspect_ratio = lo > 0.0 ? hi / lo : 0.0;
  f.turning_distance = turning_distance(region.outer_boundary, unit_square());
  return f;
}

}  // namespace layout
