#include "layout/doors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

namespace layout {

namespace {

// Symmetric (half-sample) reflection: x[-1] = x[0], x[n] = x[n-1].
Eigen::Index reflect(Eigen::Index i, Eigen::Index n) {
  while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
  return i;
}

double median_nonzero(const Eigen::ArrayXd& counts) {
  std::vector<double> v;
  for (double c : counts)
    if (c > 0) v.push_back(c);
  if (v.empty()) return 0.0;
  auto mid = v.begin() + std::ptrdiff_t(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  return 0.5 * (upper + *std::max_element(v.begin(), mid));
}

struct Hit {
  double response;
  double center;
  double width;
};

}  // namespace

Histogram plane_histogram(const SegmentCloud& cloud, Axis axis, double z_max, double bin_width) {
  Histogram h;
  h.bin_width = bin_width;
  std::vector<double> coords;
  for (const auto& p : cloud.points)
    if (p.z() <= z_max) coords.push_back(along_plane(axis, p));
  if (coords.empty()) return h;
  const auto [lo, hi] = std::minmax_element(coords.begin(), coords.end());
  h.observed_min = *lo;
  h.observed_max = *hi;
  const auto first = std::int64_t(std::floor(*lo / bin_width));
  const auto last = std::int64_t(std::floor(*hi / bin_width));
  h.origin = double(first - 1) * bin_width;
  h.counts = Eigen::ArrayXd::Zero(last - first + 3);
  for (double c : coords) h.counts(std::int64_t(std::floor(c / bin_width)) - first + 1) += 1.0;
  return h;
}

Signal smoothed_gradient(const Histogram& hist, double sigma_bins) {
  Signal s;
  s.origin = hist.origin;
  s.bin_width = hist.bin_width;
  s.raw = hist.counts;
  s.observed_min = hist.observed_min;
  s.observed_max = hist.observed_max;
  const Eigen::Index n = hist.counts.size();
  if (n == 0) return s;

  const int radius = int(std::ceil(4.0 * sigma_bins));
  Eigen::ArrayXd kernel(2 * radius + 1);
  for (int k = -radius; k <= radius; ++k) kernel(k + radius) = std::exp(-0.5 * (k / sigma_bins) * (k / sigma_bins));
  kernel /= kernel.sum();

  Eigen::ArrayXd smooth = Eigen::ArrayXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int k = -radius; k <= radius; ++k) smooth(i) += kernel(k + radius) * hist.counts(reflect(i + k, n));

  s.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) s.values(i) = 0.5 * (smooth(reflect(i + 1, n)) - smooth(reflect(i - 1, n)));
  return s;
}

double unit_aperture_response(double sigma_bins, double bin_width) {
  const int gap = std::max(1, int(std::lround(1.0 / bin_width)));
  const int wall = gap + int(std::ceil(8.0 * sigma_bins)) + 2;
  Histogram h;
  h.bin_width = bin_width;
  h.counts = Eigen::ArrayXd::Ones(2 * wall + gap);
  h.counts.segment(wall, gap).setZero();
  const Signal s = smoothed_gradient(h, sigma_bins);
  double best = 0.0;
  for (Eigen::Index p = 0; p + gap < s.values.size(); ++p) best = std::max(best, s.values(p + gap) - s.values(p));
  return best;
}

double default_response_min(const Signal& signal, const DoorParams& params) {
  return params.response_fraction * median_nonzero(signal.raw) *
         unit_aperture_response(params.sigma_bins, signal.bin_width);
}

namespace {

// Sub-bin position of the extremum of `sign * g` within two bins of `b`;
// NaN when the window holds no local extremum.
double refine_extremum(const Eigen::ArrayXd& g, Eigen::Index b, double sign) {
  const Eigen::Index n = g.size();
  Eigen::Index best = b;
  for (Eigen::Index k = std::max<Eigen::Index>(0, b - 2); k <= std::min(n - 1, b + 2); ++k)
    if (sign * g(k) > sign * g(best)) best = k;
  if ((best > 0 && sign * g(best - 1) > sign * g(best)) || (best + 1 < n && sign * g(best + 1) > sign * g(best)))
    return std::numeric_limits<double>::quiet_NaN();
  double delta = 0.0;
  if (best > 0 && best + 1 < n) {
    const double l = sign * g(best - 1), c = sign * g(best), r = sign * g(best + 1);
    const double denom = l - 2.0 * c + r;
    if (denom < 0.0) delta = std::clamp(0.5 * (l - r) / denom, -0.5, 0.5);
  }
  return double(best) + delta;
}

}  // namespace

std::vector<Doorway> detect_doorways(const Signal& signal, int plane_id, const DoorParams& params) {
  std::vector<Doorway> out;
  const Eigen::Index n = signal.values.size();
  if (n < 3) return out;
  const double bw = signal.bin_width;
  const double threshold = params.response_min ? *params.response_min : default_response_min(signal, params);
  const double empty_level = params.empty_fraction * median_nonzero(signal.raw);

  // Length of the run of empty bins around `b`, in meters; 0 when `b` holds evidence.
  auto empty_run = [&](Eigen::Index b) {
    if (b < 0 || b >= n || signal.raw(b) > empty_level) return 0.0;
    Eigen::Index l = b, r = b;
    while (l > 0 && signal.raw(l - 1) <= empty_level) --l;
    while (r + 1 < n && signal.raw(r + 1) <= empty_level) ++r;
    return double(r - l + 1) * bw;
  };
  const double run_lo = params.min_width - 2.0 * bw - 1e-9;
  const double run_hi = params.max_width + 2.0 * bw + 1e-9;
  // Refined edges must agree with the band to within half a template step.
  const double width_lo = params.min_width - 0.5 * params.width_step;
  const double width_hi = params.max_width + 0.5 * params.width_step;

  std::vector<Hit> hits;
  const int steps = int(std::floor((params.max_width - params.min_width) / params.width_step + 1e-9));
  for (int w = 0; w <= steps; ++w) {
    const double width = params.min_width + w * params.width_step;
    const auto span = Eigen::Index(std::lround(width / bw));
    if (span < 1 || span >= n) continue;
    auto response = [&](Eigen::Index p) { return signal.values(p + span) - signal.values(p); };
    for (Eigen::Index p = 0; p + span < n; ++p) {
      const double r = response(p);
      if (!(r >= threshold) || r <= 0.0) continue;
      // Each edge is located independently: the gradient extremum nearest the
      // template tap, refined to sub-bin precision. Equal-response templates of
      // neighbouring widths then agree on the same aperture.
      const double left = refine_extremum(signal.values, p, -1.0);
      const double right = refine_extremum(signal.values, p + span, 1.0);
      const double edge_lo = signal.origin + (left + 0.5) * bw;
      const double edge_hi = signal.origin + (right + 0.5) * bw;
      if (!(edge_hi - edge_lo >= width_lo && edge_hi - edge_lo <= width_hi)) continue;
      const double center = 0.5 * (edge_lo + edge_hi);
      const double lo = center - 0.5 * width, hi = center + 0.5 * width;
      if (signal.observed_min > lo - params.edge_margin || signal.observed_max < hi + params.edge_margin) continue;
      const double run = empty_run(Eigen::Index(std::floor((center - signal.origin) / bw)));
      if (run < run_lo || run > run_hi) continue;
      hits.push_back({r, center, edge_hi - edge_lo});
    }
  }

  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return std::tie(b.response, a.center, a.width) < std::tie(a.response, b.center, b.width);
  });
  for (const Hit& h : hits) {
    const bool suppressed = std::any_of(out.begin(), out.end(), [&](const Doorway& d) {
      return std::abs(d.center - h.center) < std::max(params.suppression_radius, 0.5 * (d.width + h.width));
    });
    if (suppressed) continue;
    out.push_back(Doorway{int(out.size()), plane_id, h.center, h.width, h.response});
  }
  std::sort(out.begin(), out.end(), [](const Doorway& a, const Doorway& b) { return a.center < b.center; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = int(i);
  return out;
}

std::vector<Doorway> detect_plane_doorways(const SegmentCloud& cloud, const LayoutPlane& plane,
                                           const DoorParams& params) {
  const Histogram h = plane_histogram(cloud, plane.axis, params.z_max, params.bin_width);
  if (h.empty()) return {};
  return detect_doorways(smoothed_gradient(h, params.sigma_bins), plane.id, params);
}

std::vector<Doorway> merge_coincident_doorways(const std::vector<Doorway>& doorways,
                                               const std::vector<LayoutPlane>& planes, double max_plane_gap) {
  std::map<int, const LayoutPlane*> by_id;
  for (const auto& p : planes) by_id[p.id] = &p;

  std::vector<Doorway> order(doorways);
  std::sort(order.begin(), order.end(), [](const Doorway& a, const Doorway& b) {
    return std::tie(b.response, a.plane_id, a.center) < std::tie(a.response, b.plane_id, b.center);
  });
  std::vector<Doorway> kept;
  for (const auto& d : order) {
    const LayoutPlane* pd = by_id.count(d.plane_id) ? by_id[d.plane_id] : nullptr;
    const bool duplicate = pd && std::any_of(kept.begin(), kept.end(), [&](const Doorway& k) {
                             const LayoutPlane* pk = by_id[k.plane_id];
                             return pk && pk->axis == pd->axis && std::abs(pk->offset - pd->offset) <= max_plane_gap &&
                                    d.lo() < k.hi() && k.lo() < d.hi();
                           });
    if (!duplicate) kept.push_back(d);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Doorway& a, const Doorway& b) { return std::tie(a.plane_id, a.center) < std::tie(b.plane_id, b.center); });
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i].id = int(i);
  return kept;
}

}  // namespace layout
