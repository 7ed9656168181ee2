#include "nlse/stitching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "nlse/error.hpp"

namespace nlse {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double segment_value(const Segment& s, double x) { return s.profile.value(x - s.offset); }
double segment_slope(const Segment& s, double x) { return s.profile.derivative(x - s.offset); }

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

}  // namespace

PiecewiseSolution::PiecewiseSolution(std::vector<Segment> segments,
                                     std::vector<StitchMismatch> mismatch,
                                     std::vector<double> requested, double blend_width)
    : segments_(std::move(segments)),
      mismatch_(std::move(mismatch)),
      requested_(std::move(requested)),
      blend_width_(blend_width) {}

std::vector<double> PiecewiseSolution::stitch_points() const {
  std::vector<double> points;
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    points.push_back(segments_[i].lo);
  }
  return points;
}

std::size_t PiecewiseSolution::segment_index(double x) const {
  std::size_t i = 0;
  while (i + 1 < segments_.size() && x >= segments_[i + 1].lo) {
    ++i;
  }
  return i;
}

double PiecewiseSolution::raw_value(double x) const {
  return segment_value(segments_[segment_index(x)], x);
}

double PiecewiseSolution::raw_derivative(double x) const {
  return segment_slope(segments_[segment_index(x)], x);
}

namespace {

struct HermiteWindow {
  double a, b, ya, yb, da, db;

  double value(double x) const {
    const double h = b - a;
    const double t = (x - a) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * ya + (t3 - 2 * t2 + t) * h * da + (-2 * t3 + 3 * t2) * yb +
           (t3 - t2) * h * db;
  }
  double derivative(double x) const {
    const double h = b - a;
    const double t = (x - a) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * ya + (3 * t2 - 4 * t + 1) * h * da + (-6 * t2 + 6 * t) * yb +
            (3 * t2 - 2 * t) * h * db) /
           h;
  }
};

}  // namespace

double PiecewiseSolution::value(double x) const {
  if (blend_width_ > 0.0) {
    const double half = 0.5 * blend_width_;
    for (std::size_t i = 1; i < segments_.size(); ++i) {
      const double xs = segments_[i].lo;
      if (std::abs(x - xs) < half) {
        const Segment& L = segments_[i - 1];
        const Segment& R = segments_[i];
        const HermiteWindow w{xs - half,
                              xs + half,
                              segment_value(L, xs - half),
                              segment_value(R, xs + half),
                              segment_slope(L, xs - half),
                              segment_slope(R, xs + half)};
        return w.value(x);
      }
    }
  }
  return raw_value(x);
}

double PiecewiseSolution::derivative(double x) const {
  if (blend_width_ > 0.0) {
    const double half = 0.5 * blend_width_;
    for (std::size_t i = 1; i < segments_.size(); ++i) {
      const double xs = segments_[i].lo;
      if (std::abs(x - xs) < half) {
        const Segment& L = segments_[i - 1];
        const Segment& R = segments_[i];
        const HermiteWindow w{xs - half,
                              xs + half,
                              segment_value(L, xs - half),
                              segment_value(R, xs + half),
                              segment_slope(L, xs - half),
                              segment_slope(R, xs + half)};
        return w.derivative(x);
      }
    }
  }
  return raw_derivative(x);
}

PiecewiseSolution build_stitched(const std::vector<SolutionProfile>& profiles,
                                 const std::vector<double>& targets, const StitchOptions& options) {
  if (profiles.size() < 2) {
    throw DomainError("stitching needs at least two profiles");
  }
  if (targets.size() + 1 != profiles.size()) {
    throw DomainError("stitching needs exactly one target point fewer than profiles");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!std::isfinite(targets[i]) || (i > 0 && !(targets[i] > targets[i - 1]))) {
      throw DomainError("stitch targets must be finite and strictly increasing");
    }
  }
  if (!(options.blend_width >= 0.0) || !(options.tolerance > 0.0)) {
    throw DomainError("blend width must be >= 0 and tolerance > 0");
  }
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    if (!profiles[i].first_node()) {
      std::ostringstream msg;
      msg << "profile " << i << " has no nodes (soliton, dn-type or zero profile)";
      throw StitchingError(msg.str());
    }
  }

  std::vector<Segment> segments;
  std::vector<StitchMismatch> mismatch;
  double point = targets.front();

  // Translation that puts a node of `p` on `x`, choosing the node nearest x.
  auto align = [](const SolutionProfile& p, double x) { return x - *p.nearest_node(x); };

  {
    const SolutionProfile& p = profiles.front();
    segments.push_back(Segment{p, -kInf, point, align(p, point)});
  }
  for (std::size_t i = 1; i < profiles.size(); ++i) {
    SolutionProfile p = profiles[i];
    const double offset = align(p, point);
    const Segment& left = segments.back();
    if (sign_of(segment_slope(left, point)) != sign_of(p.derivative(point - offset))) {
      p = p.with_sign(-p.sign());
    }
    double next = kInf;
    if (i + 1 < profiles.size()) {
      const double target = targets[i];
      next = offset + *p.nearest_node(target - offset);
      const double spacing = p.node_spacing();
      while (next <= point) {
        next += spacing;
      }
      if (std::abs(next - target) > spacing) {
        std::ostringstream msg;
        msg << "no node of profile " << i << " within half a period of target " << target;
        throw StitchingError(msg.str());
      }
    }
    Segment seg{p, point, next, offset};
    const double uL = segment_value(left, point);
    const double uR = segment_value(seg, point);
    if (std::abs(uL) > options.tolerance || std::abs(uR) > options.tolerance) {
      std::ostringstream msg;
      msg << "stitch point " << point << " is not a common node: |u-| = " << std::abs(uL)
          << ", |u+| = " << std::abs(uR);
      throw StitchingError(msg.str());
    }
    mismatch.push_back({std::abs(uR - uL), std::abs(segment_slope(seg, point) - segment_slope(left, point))});
    segments.back().hi = point;
    segments.push_back(seg);
    point = next;
  }

  if (options.blend_width > 0.0) {
    for (std::size_t i = 1; i + 1 < segments.size(); ++i) {
      if (segments[i].hi - segments[i].lo <= options.blend_width) {
        throw DomainError("blend windows of neighbouring stitch points overlap");
      }
    }
  }
  return PiecewiseSolution(std::move(segments), std::move(mismatch), targets, options.blend_width);
}

PeriodicBox periodic_box(const PiecewiseSolution& solution, double min_length) {
  const auto& segs = solution.segments();
  const Segment& left = segs.front();
  const Segment& right = segs.back();
  const double x_first = left.hi;
  const double x_last = right.lo;
  const double hL = left.profile.node_spacing();
  const double hR = right.profile.node_spacing();
  if (!std::isfinite(hL) || !std::isfinite(hR)) {
    throw StitchingError("outer segments must be periodic to close a periodic box");
  }
  PeriodicBox box;
  box.requested_length = min_length;
  for (std::size_t n = 2; n < 1000000; ++n) {
    const std::size_t nL = (n + 1) / 2;
    const std::size_t nR = n / 2;
    const double x0 = x_first - static_cast<double>(nL) * hL;
    const double x1 = x_last + static_cast<double>(nR) * hR;
    if (x1 - x0 < min_length) {
      continue;
    }
    const double sL = segment_slope(left, x0);
    const double sR = segment_slope(right, x1);
    if (sign_of(sL) != sign_of(sR)) {
      continue;
    }
    box.x0 = x0;
    box.length = x1 - x0;
    box.left_half_periods = nL;
    box.right_half_periods = nR;
    box.seam = {std::abs(segment_value(right, x1) - segment_value(left, x0)), std::abs(sR - sL)};
    return box;
  }
  throw StitchingError("could not close a periodic box");
}

ComplexField1D sample_on_box(const PiecewiseSolution& solution, const PeriodicBox& box, std::size_t n) {
  const Grid grid = Grid::periodic(n, box.x0, box.length);
  return ComplexField1D::sample(grid, [&solution](double x) {
    return std::complex<double>(solution.value(x), 0.0);
  });
}

ComplexField1D lse_rogue_initial(double alpha, const Grid& grid, std::vector<std::string>* warnings) {
  if (!std::isfinite(alpha)) {
    throw DomainError("alpha must be finite");
  }
  grid.validate();
  const double periods = grid.length() / (2.0 * std::numbers::pi);
  if (std::abs(periods - std::round(periods)) > 1e-9 * std::max(1.0, periods) && warnings) {
    std::ostringstream msg;
    msg << "box length " << grid.length()
        << " is not a multiple of 2 pi; the cosine background is not periodic on the grid";
    warnings->push_back(msg.str());
  }
  return ComplexField1D::sample(grid, [alpha](double x) {
    return std::complex<double>(std::cos(x) + alpha * std::exp(-x * x), 0.0);
  });
}

}  // namespace nlse
