#ifndef CIRCTRUNC_ESTIMATORS_HPP
#define CIRCTRUNC_ESTIMATORS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "circtrunc/distributions.hpp"
#include "circtrunc/geometry.hpp"

namespace circtrunc {

using CircularSample = std::vector<Angle>;

struct EstimateResult {
  Angle value;
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// Resultant vector (sum of unit vectors) of a sample.
struct Resultant {
  double s = 0.0;
  double c = 0.0;
  [[nodiscard]] double length() const;
};
Resultant resultant(std::span<const Angle> sample);

/// Sample mean direction. Throws UndefinedDirection when the resultant
/// length is below 1e-12.
Angle mean_direction(std::span<const Angle> sample);

// Criteria minimized by the estimators below, exposed for checking.
double mean_objective(std::span<const Angle> sample, Angle alpha);
double median_objective(std::span<const Angle> sample, Angle alpha);
double l1_objective(std::span<const Angle> sample, Angle alpha);
double spatial_objective(std::span<const Angle> sample, double a1, double a2);
/// Sum of R_i d1(theta_i, alpha) with R_i the (average) rank of sin(theta_i - alpha).
double wilcoxon_objective(std::span<const Angle> sample, Angle alpha);

/// Minimizer of sum d1(theta_i, alpha). The criterion is piecewise linear
/// with breakpoints at theta_i and theta_i + pi, so it is searched exactly.
/// When the minimizers form an arc its midpoint is returned; separate
/// minimizing arcs are ordered counterclockwise from the first observation.
EstimateResult circular_median(std::span<const Angle> sample);

/// Minimizer of sum sqrt(1 - cos(theta_i - alpha)). The criterion is
/// concave between consecutive observations, so a minimizer is always an
/// observation; ties go to the first one counterclockwise from theta_1.
EstimateResult l1_estimator(std::span<const Angle> sample);

/// Direction of the planar spatial median of the sample's unit vectors
/// (modified Weiszfeld iteration). Throws DegenerateSpatialMedian when the
/// planar median lies within 1e-10 of the origin.
EstimateResult normalized_spatial_median(std::span<const Angle> sample);

/// Circular Wilcoxon estimator. Between rank changes and d1 breakpoints the
/// criterion is linear; its infimum over all pieces is located exactly.
/// At rank changes the criterion jumps, and `objective` is the infimum, i.e.
/// the one-sided limit from the lower side.
EstimateResult circular_wilcoxon(std::span<const Angle> sample);

struct TorusSample {
  std::vector<CircularSample> components;
  std::vector<double> concentrations;
};

/// Common-mean MLE over independent circular normal components:
/// atan2pi(sum k_i R_i sin theta_bar_i, sum k_i R_i cos theta_bar_i).
Angle mle_torus_common_mean(const TorusSample& sample);

/// Longitude MLE for Fisher data: atan2pi(sum sin th sin ph, sum sin th cos ph).
Angle mle_fisher_longitude(std::span<const SpherePoint> sample);

/// Location MLE for the Mardia-Sutton cylinder model, from the sample
/// correlations of (x, cos theta, sin theta).
Angle mle_cylinder_location(std::span<const CylinderPoint> sample);

}  // namespace circtrunc

#endif  // CIRCTRUNC_ESTIMATORS_HPP
