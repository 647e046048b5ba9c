#ifndef CIRCTRUNC_PROJECTION_HPP
#define CIRCTRUNC_PROJECTION_HPP

#include <optional>
#include <span>
#include <string>

#include "circtrunc/distributions.hpp"
#include "circtrunc/estimators.hpp"
#include "circtrunc/geometry.hpp"

namespace circtrunc {

/// Smallest closed convex arc containing `omega1`: its closure when it spans
/// at most a semicircle, otherwise the full circle.
Arc convex_closure(const Arc& omega1);

/// Estimation problem with the parameter restricted to `omega1`. The action
/// space is the convex closure of `omega1`.
struct RestrictedProblem {
  std::optional<CircularDistribution> dist;  // empty for models without one
  Arc omega1 = Arc::full();
  Arc action_space = Arc::full();

  static RestrictedProblem make(const Arc& omega1,
                                std::optional<CircularDistribution> dist = std::nullopt);
};

enum class Condition { C3, C4Unimodal, C4Mixture, None };
std::string to_string(Condition c);

struct ImprovementCertificate {
  Condition condition = Condition::None;
  bool applicable = false;
  std::string notes;
};

/// Which sufficient condition (if any) guarantees that projecting onto the
/// action space improves any rotation-equivariant estimator.
ImprovementCertificate check_conditions(const RestrictedProblem& p);

struct ProjectedEstimate {
  Angle value;
  bool forced = false;  // projected although no condition holds
};

/// Projection of `delta` onto the action space. Throws ConditionsNotMet when
/// no condition holds unless `force` is set, in which case the result is tagged.
ProjectedEstimate improve_by_projection(Angle delta, const RestrictedProblem& p, bool force = false);

/// Restricted MLE of a circular normal location over [0, b]:
/// theta_bar on [0, b], b on (b, pi + b/2), 0 on [pi + b/2, 2pi).
Angle restricted_mle_cn(Angle theta_bar, double b);

struct FoldedSample {
  CircularSample sample;
  double scale = 1.0;
  std::string note;
};

/// Maps theta to k theta so that a location in [0, 2pi/k) of a k-fold
/// symmetric density becomes a location on the whole circle.
FoldedSample kfold_reparameterize(int k, std::span<const Angle> sample);
/// Inverse map of a folded location back to [0, 2pi/k).
Angle kfold_unfold(Angle folded, int k);
/// Image of a restriction arc inside [0, 2pi/k) under the folding map.
Arc kfold_arc(const Arc& omega1, int k);

}  // namespace circtrunc

#endif  // CIRCTRUNC_PROJECTION_HPP
