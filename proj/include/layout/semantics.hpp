#pragma once

// Room / corridor labeling from boundary shape.

#include "layout/model.hpp"

#include <vector>

namespace layout {

/// Piecewise-constant cumulative heading of a polygon boundary, arc length
/// normalized to 1. `angle[k]` holds on [breaks[k], breaks[k+1]), with
/// breaks[0] = 0 and an implicit final break at 1.
struct TurningFunction {
  std::vector<double> breaks;
  std::vector<double> angle;

  /// Value at any s; Θ(s + 1) = Θ(s) + 2π.
  double operator()(double s) const;
};

/// Throws DegeneratePolygon for fewer than 4 vertices or a zero-length edge.
TurningFunction turning_function(const Polygon& poly);

/// L2 turning distance minimized over start shift and rotation. The
/// minimum is taken over every shift that aligns a break of `a` with a
/// break of `b`, which is exact for the L2 metric.
double turning_distance(const Polygon& a, const Polygon& b);
double turning_distance(const TurningFunction& a, const TurningFunction& b);

/// Squared distance at a fixed shift, rotation already optimized.
double turning_distance_sq_at(const TurningFunction& a, const TurningFunction& b, double shift);

Polygon unit_square();

struct ClassifierParams {
  double max_perimeter = 60.0;  ///< meters
  double max_turning_distance = 1.0;
};

/// Room iff perimeter < max_perimeter and turning distance to the unit square < max_turning_distance.
RegionLabel classify(const Region& region, const ClassifierParams& params = {});
RegionLabel classify(double perimeter, double turning_distance, const ClassifierParams& params = {});

RegionFeatures region_features(const Region& region);

}  // namespace layout
