#include "circtrunc/equivariant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "circtrunc/errors.hpp"
#include "circtrunc/quadrature.hpp"

namespace circtrunc {

namespace {

constexpr std::size_t kScaleGrid = 1024;
constexpr std::size_t kMinNodes = 256;
constexpr double kVanishing = 1e-12;
constexpr double kTieTolerance = 1e-12;
constexpr int kMonotoneGrid = 101;

double log_likelihood(const CircularDistribution& dist, std::span<const Angle> sample, double nu) {
  const CircularDistribution located = dist.with_location(Angle(nu));
  double total = 0.0;
  for (Angle theta : sample) {
    const double ld = located.log_density(theta);
    if (!std::isfinite(ld)) {
      throw ZeroDensity("density vanishes at a sample point");
    }
    total += ld;
  }
  return total;
}

void require_b(double b) {
  if (!(b > 0.0 && b <= kPi)) {
    throw InvalidParameter("b must lie in (0, pi]");
  }
}

Arc point_arc(double x) { return Arc::I(x, x); }

ReducedSpace make_reduced(double b, double b_star, int sign) {
  b_star = std::clamp(b_star, 0.0, b);
  ReducedSpace rs;
  rs.monotone_sign = sign;
  rs.b_star = Angle(b_star);
  const double half = b / 2.0;
  if (sign == 0) {
    rs.arc = point_arc(half);
  } else if (sign < 0) {
    rs.arc = Arc::I(std::min(b_star, half), half);
  } else {
    rs.arc = Arc::I(half, std::max(b_star, half));
  }
  return rs;
}

}  // namespace

GroupSpec GroupSpec::parse(const std::string& name, double b, int k) {
  if (name == "G1") {
    return rotation();
  }
  if (name == "G2") {
    return torus(k);
  }
  if (name == "G3") {
    return reflection(b);
  }
  throw InvalidParameter("unknown group '" + name + "' (expected G1, G2 or G3)");
}

Angle reflect(Angle theta, double b) { return Angle(b - theta.radians()); }

Angle admissible_equivariant(const CircularDistribution& dist, std::span<const Angle> sample) {
  if (sample.empty()) {
    throw InvalidParameter("admissible_equivariant: empty sample");
  }
  // Scale the likelihood by (roughly) its maximum so the integrands stay finite.
  double scale = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kScaleGrid; ++k) {
    scale = std::max(scale, log_likelihood(dist, sample, kTwoPi * k / kScaleGrid));
  }
  for (Angle theta : sample) {
    scale = std::max(scale, log_likelihood(dist, sample, theta.radians()));
  }
  auto lik = [&](double a) { return std::exp(log_likelihood(dist, sample, a) - scale); };
  const QuadratureResult mass = periodic_trapezoid(lik, 0.0, 1e-12, kMinNodes);
  const double abs_tol = 1e-12 * mass.value;
  const QuadratureResult s =
      periodic_trapezoid([&](double a) { return std::sin(a) * lik(a); }, abs_tol, 1e-12, kMinNodes);
  const QuadratureResult c =
      periodic_trapezoid([&](double a) { return std::cos(a) * lik(a); }, abs_tol, 1e-12, kMinNodes);
  if (std::hypot(s.value, c.value) < kVanishing * mass.value) {
    throw UndefinedDirection("admissible_equivariant: both integrals vanish");
  }
  return atan2pi(s.value, c.value);
}

double reflection_a_general(const CircularDistribution& dist, std::span<const Angle> sample,
                            double b, double nu) {
  require_b(b);
  const double lp_far = log_likelihood(dist, sample, b - nu);
  const double lp_near = log_likelihood(dist, sample, nu);
  return std::tanh(0.5 * (lp_far - lp_near)) * std::tan(b / 2.0 - nu);
}

double reflection_h(const CircularDistribution& dist, std::span<const Angle> sample, double b,
                    double nu) {
  return reduce_angle(b / 2.0 + std::atan(reflection_a_general(dist, sample, b, nu)));
}

ReducedSpace reduced_space_cn(Angle theta_bar, double r, double kappa, double b) {
  require_b(b);
  if (!(r >= 0.0)) {
    throw InvalidParameter("reduced_space_cn: r must be >= 0");
  }
  if (!(kappa > 0.0)) {
    throw InvalidParameter("reduced_space_cn: kappa must be > 0");
  }
  const double half = b / 2.0;
  const double t = theta_bar.radians();
  const double b_star =
      half + std::atan(std::tan(half) * std::tanh(kappa * r * std::sin(t - half) * std::sin(half)));
  int sign = 0;
  if (std::abs(t - half) <= kTieTolerance || std::abs(t - (kPi + half)) <= kTieTolerance) {
    sign = 0;
  } else if (t > half && t < kPi + half) {
    sign = 1;
  } else {
    sign = -1;
  }
  return make_reduced(b, b_star, sign);
}

ReducedSpace reduced_space_general(const CircularDistribution& dist,
                                   std::span<const Angle> sample, double b) {
  const double a0 = reflection_a_general(dist, sample, b, 0.0);
  const double b_star = b / 2.0 + std::atan(a0);
  const int sign = a0 > 0.0 ? 1 : (a0 < 0.0 ? -1 : 0);
  return make_reduced(b, b_star, sign);
}

HzValues h_z_reflection(const CircularDistribution& dist, std::span<const Angle> sample, double b,
                        std::span<const double> nu_grid) {
  require_b(b);
  HzValues out;
  out.values.reserve(nu_grid.size());
  for (double nu : nu_grid) {
    out.values.emplace_back(reflection_h(dist, sample, b, nu));
  }
  int direction = 0;
  double prev = reflection_a_general(dist, sample, b, 0.0);
  for (int k = 1; k < kMonotoneGrid; ++k) {
    const double cur = reflection_a_general(dist, sample, b, 0.5 * b * k / (kMonotoneGrid - 1));
    const double diff = cur - prev;
    if (std::abs(diff) > 1e-12) {
      const int d = diff > 0.0 ? 1 : -1;
      if (direction != 0 && d != direction) {
        out.monotone = false;
      }
      direction = d;
    }
    prev = cur;
  }
  return out;
}

Angle improve_equivariant(Angle delta, const ReducedSpace& rs, double b) {
  require_b(b);
  const double half = b / 2.0;
  if (rs.arc.length() == 0.0) {
    return Angle(half);
  }
  const double gamma = kPi + rs.b_star.radians() / 2.0 + b / 4.0;
  if (std::abs(delta.radians() - gamma) <= kTieTolerance) {
    return Angle(half);
  }
  return project(delta, rs.arc);
}

}  // namespace circtrunc
