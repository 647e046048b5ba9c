#include "circtrunc/projection.hpp"

#include <cmath>
#include <variant>

#include "circtrunc/errors.hpp"

namespace circtrunc {

namespace {

constexpr double kLengthTolerance = 1e-12;

bool is_wrapped_stable_non_gaussian(const CircularDistribution& d) {
  const auto* ws = std::get_if<WrappedStable>(&d.family());
  return ws != nullptr && ws->alpha != 2.0;
}

}  // namespace

Arc convex_closure(const Arc& omega1) {
  if (omega1.is_empty() || omega1.is_full()) {
    return omega1;
  }
  if (omega1.length() <= kPi + kLengthTolerance) {
    return omega1.closure();
  }
  return Arc::full();
}

RestrictedProblem RestrictedProblem::make(const Arc& omega1,
                                          std::optional<CircularDistribution> dist) {
  if (omega1.is_empty()) {
    throw EmptyArc("restricted problem: empty parameter arc");
  }
  RestrictedProblem p;
  p.dist = std::move(dist);
  p.omega1 = omega1;
  p.action_space = convex_closure(omega1);
  return p;
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::C3:
      return "C3";
    case Condition::C4Unimodal:
      return "C4/C1";
    case Condition::C4Mixture:
      return "C4/C2";
    case Condition::None:
      return "none";
  }
  return "none";
}

ImprovementCertificate check_conditions(const RestrictedProblem& p) {
  ImprovementCertificate cert;
  const Arc& a = p.action_space;
  if (a.is_full()) {
    cert.notes = "action space is the whole circle; projection is the identity";
    return cert;
  }
  const double len = a.length();
  if (len <= 2.0 * kPi / 3.0 + kLengthTolerance) {
    cert.condition = Condition::C3;
    cert.applicable = true;
    cert.notes = "action space no longer than 2pi/3";
    return cert;
  }
  if (!p.dist) {
    cert.notes = "action space longer than 2pi/3 and no distribution to check";
    return cert;
  }
  const CircularDistribution& d = *p.dist;
  // Every supported family is symmetric about its location.
  if (!d.is_mixture() || d.epsilon() == 1.0) {
    if (d.base().unimodal_at_location()) {
      cert.condition = Condition::C4Unimodal;
      cert.applicable = true;
      cert.notes = "symmetric and unimodal at the location";
    } else {
      cert.notes = "base density is not unimodal at its location";
    }
    return cert;
  }
  if (d.epsilon() < 0.5) {
    cert.notes = "antipodal mixture with epsilon < 1/2";
    return cert;
  }
  if (is_wrapped_stable_non_gaussian(d)) {
    cert.notes = "zeta monotonicity not established for wrapped stable with alpha < 2";
    return cert;
  }
  if (!d.base().unimodal_at_location()) {
    cert.notes = "base density is not unimodal at its location";
    return cert;
  }
  const ShapeReport shape = classify_mixture(d);
  if (shape.modality == ShapeReport::Modality::Degenerate || !shape.zeta_increasing) {
    cert.notes = "zeta is not increasing";
    return cert;
  }
  cert.condition = Condition::C4Mixture;
  cert.applicable = true;
  cert.notes = "antipodal mixture with epsilon >= 1/2 and increasing zeta";
  return cert;
}

ProjectedEstimate improve_by_projection(Angle delta, const RestrictedProblem& p, bool force) {
  const ImprovementCertificate cert = check_conditions(p);
  if (!cert.applicable && !force) {
    throw ConditionsNotMet("projection is not guaranteed to improve: " + cert.notes);
  }
  return {project(delta, p.action_space), !cert.applicable};
}

Angle restricted_mle_cn(Angle theta_bar, double b) {
  if (!(b >= 0.0 && b < kTwoPi)) {
    throw InvalidParameter("restricted_mle_cn: b must lie in [0, 2pi)");
  }
  const double t = theta_bar.radians();
  if (t <= b) {
    return theta_bar;
  }
  if (t < kPi + b / 2.0) {
    return Angle(b);
  }
  return Angle(0.0);
}

FoldedSample kfold_reparameterize(int k, std::span<const Angle> sample) {
  if (k < 2) {
    throw InvalidParameter("kfold_reparameterize: k must be >= 2");
  }
  FoldedSample out;
  out.scale = static_cast<double>(k);
  out.sample.reserve(sample.size());
  for (Angle a : sample) {
    out.sample.emplace_back(out.scale * a.radians());
  }
  if (k >= 3) {
    out.note = "restriction to [0, 2pi/k) has length <= 2pi/3: condition C3 holds";
  }
  return out;
}

Angle kfold_unfold(Angle folded, int k) {
  if (k < 2) {
    throw InvalidParameter("kfold_unfold: k must be >= 2");
  }
  return Angle(folded.radians() / static_cast<double>(k));
}

Arc kfold_arc(const Arc& omega1, int k) {
  if (k < 2) {
    throw InvalidParameter("kfold_arc: k must be >= 2");
  }
  const double scale = static_cast<double>(k);
  if (omega1.kind() != Arc::Kind::I || omega1.hi().radians() > kTwoPi / scale + 1e-15) {
    throw InvalidParameter("kfold_arc: arc must be an I-arc inside [0, 2pi/k]");
  }
  const double lo = scale * omega1.lo().radians();
  const double hi = scale * omega1.hi().radians();
  if (hi - lo >= kTwoPi - 1e-12) {
    if (omega1.lo_closed() || omega1.hi_closed()) {
      return Arc::full();
    }
    return Arc::J(lo, lo, false, false);
  }
  if (hi < kTwoPi) {
    return Arc::I(lo, hi, omega1.lo_closed(), omega1.hi_closed());
  }
  // The image ends at 2pi = 0.
  return Arc::J(hi - kTwoPi, lo, omega1.hi_closed(), omega1.lo_closed());
}

}  // namespace circtrunc
