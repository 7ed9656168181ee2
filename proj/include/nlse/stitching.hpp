#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nlse/field.hpp"
#include "nlse/oscillator.hpp"

namespace nlse {

/// u(x) = profile.value(x - offset) on [lo, hi).
struct Segment {
  SolutionProfile profile;
  double lo;
  double hi;
  double offset;
};

struct StitchMismatch {
  double du = 0.0;
  double ddu = 0.0;
};

struct StitchOptions {
  /// Width of the optional cubic-Hermite blend centred on each stitch point; 0 disables it.
  double blend_width = 0.0;
  /// Largest admissible |u| at a stitch point after phase alignment.
  double tolerance = 1e-9;
};

/**
 * Piecewise solution joined at common nodes. The first and last segments
 * extend to -inf and +inf. Mismatches are the one-sided jumps
 * |u(x_i+) - u(x_i-)| and |u'(x_i+) - u'(x_i-)| of the unblended pieces.
 */
class PiecewiseSolution {
 public:
  PiecewiseSolution(std::vector<Segment> segments, std::vector<StitchMismatch> mismatch,
                    std::vector<double> requested, double blend_width);

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  std::vector<double> stitch_points() const;
  /// Target positions before the later stitch points snapped to nodes.
  const std::vector<double>& requested_points() const noexcept { return requested_; }
  const std::vector<StitchMismatch>& mismatch() const noexcept { return mismatch_; }
  double blend_width() const noexcept { return blend_width_; }

  std::size_t segment_index(double x) const;
  double value(double x) const;
  double derivative(double x) const;

 private:
  double raw_value(double x) const;
  double raw_derivative(double x) const;

  std::vector<Segment> segments_;
  std::vector<StitchMismatch> mismatch_;
  std::vector<double> requested_;
  double blend_width_;
};

/**
 * Aligns consecutive profiles so that they share a node at each target.
 * The first stitch point is the first target. Segment i is translated so one
 * of its nodes sits on the current stitch point; its next stitch point is its
 * node nearest the following target. A segment's sign is flipped when needed
 * so the slopes on both sides of a node have the same sign.
 *
 * Throws StitchingError when a profile has no nodes (dn-type, soliton, zero)
 * or a node lies farther than half a period from its target, and DomainError
 * on malformed input.
 */
PiecewiseSolution build_stitched(const std::vector<SolutionProfile>& profiles,
                                 const std::vector<double>& targets, const StitchOptions& options = {});

/// Periodic extension: the outer segments are continued by whole half
/// periods until the box is at least `min_length` long and the slopes at the
/// seam have matching signs.
struct PeriodicBox {
  double x0 = 0.0;
  double length = 0.0;
  double requested_length = 0.0;
  std::size_t left_half_periods = 0;
  std::size_t right_half_periods = 0;
  StitchMismatch seam;
};

PeriodicBox periodic_box(const PiecewiseSolution& solution, double min_length);

/// Samples the solution on an n-point grid spanning the box.
ComplexField1D sample_on_box(const PiecewiseSolution& solution, const PeriodicBox& box, std::size_t n);

/// cos x + alpha e^{-x^2} on the grid. Appends a warning when the box length
/// is not a multiple of 2 pi.
ComplexField1D lse_rogue_initial(double alpha, const Grid& grid,
                                 std::vector<std::string>* warnings = nullptr);

}  // namespace nlse
