#pragma once

// Doorway detection on a single layout plane: points below door height are
// binned along the plane, the histogram is smoothed and differentiated, and
// the resulting edge signal is correlated with falling/rising edge pairs.

#include "layout/model.hpp"

#include <optional>
#include <vector>

namespace layout {

struct Histogram {
  double origin = 0.0;  ///< left edge of bin 0
  double bin_width = 0.1;
  Eigen::ArrayXd counts;
  double observed_min = 0.0, observed_max = 0.0;

  bool empty() const { return counts.size() == 0; }
  double bin_center(Eigen::Index b) const { return origin + (double(b) + 0.5) * bin_width; }
};

/// Edge signal on the histogram's bin axis. `raw` keeps the unsmoothed
/// counts so candidate apertures can be checked against the evidence.
struct Signal {
  double origin = 0.0;
  double bin_width = 0.1;
  Eigen::ArrayXd values;
  Eigen::ArrayXd raw;
  double observed_min = 0.0, observed_max = 0.0;

  bool empty() const { return values.size() == 0; }
};

struct DoorParams {
  double min_width = 0.8;
  double max_width = 1.2;
  double width_step = 0.1;
  /// Absolute threshold; when unset, `response_fraction` times the response
  /// of an ideal 1 m aperture cut into a wall of median bin height is used.
  std::optional<double> response_min;
  double response_fraction = 0.5;
  double suppression_radius = 0.5;
  /// Wall evidence required on each side of an aperture.
  double edge_margin = 0.5;
  /// Bins at or below this fraction of the median count are read as empty.
  double empty_fraction = 0.1;
  double sigma_bins = 2.0;
  double bin_width = 0.1;
  double z_max = 2.0;
};

/// Histogram of in-plane coordinates of points with z <= z_max, padded by
/// one bin on each side. Bins are aligned to multiples of `bin_width`.
Histogram plane_histogram(const SegmentCloud& cloud, Axis axis, double z_max = 2.0, double bin_width = 0.1);

/// Central difference of the Gaussian-smoothed counts (kernel truncated at
/// 4 sigma, symmetric reflection at both ends).
Signal smoothed_gradient(const Histogram& hist, double sigma_bins = 2.0);

/// Peak response of the pipeline on an ideal 1 m gap in a wall of unit bin height.
double unit_aperture_response(double sigma_bins = 2.0, double bin_width = 0.1);

/// Threshold used when `params.response_min` is unset.
double default_response_min(const Signal& signal, const DoorParams& params);

std::vector<Doorway> detect_doorways(const Signal& signal, int plane_id, const DoorParams& params = {});

/// Runs histogram, gradient and detection for one plane.
std::vector<Doorway> detect_plane_doorways(const SegmentCloud& cloud, const LayoutPlane& plane,
                                           const DoorParams& params = {});

/// The same aperture is seen from both faces of a wall. Doorways on parallel
/// planes closer than `max_plane_gap` whose intervals overlap collapse to the
/// strongest one. Output is renumbered by (plane id, center).
std::vector<Doorway> merge_coincident_doorways(const std::vector<Doorway>& doorways,
                                               const std::vector<LayoutPlane>& planes,
                                               double max_plane_gap = 0.3);

}  // namespace layout
