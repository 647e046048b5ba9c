#include "circtrunc/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "circtrunc/errors.hpp"

namespace circtrunc {

namespace {

constexpr double kResultantFloor = 1e-12;
constexpr double kTieTolerance = 1e-10;
constexpr double kRankTieTolerance = 1e-13;
constexpr double kSpatialStep = 1e-12;
constexpr std::size_t kSpatialMaxIterations = 10000;
constexpr double kSpatialOriginFloor = 1e-10;
constexpr double kCoincident = 1e-14;

void require_nonempty(std::span<const Angle> sample, const char* who) {
  if (sample.empty()) {
    throw InvalidParameter(std::string(who) + ": empty sample");
  }
}

struct Candidate {
  double location;
  double value;
};

/// Smallest value; near-ties go to the first location counterclockwise from
/// `anchor`, which keeps the choice rotation-equivariant.
Candidate pick_best(const std::vector<Candidate>& candidates, Angle anchor) {
  double best = std::numeric_limits<double>::infinity();
  for (const Candidate& c : candidates) {
    best = std::min(best, c.value);
  }
  const double tol = kTieTolerance * (1.0 + std::abs(best));
  const Candidate* pick = nullptr;
  double pick_offset = 0.0;
  for (const Candidate& c : candidates) {
    if (c.value > best + tol) {
      continue;
    }
    const double off = ccw_offset(anchor, Angle(c.location));
    if (pick == nullptr || off < pick_offset) {
      pick = &c;
      pick_offset = off;
    }
  }
  return *pick;
}

std::vector<double> average_ranks(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && x[order[j]] - x[order[i]] <= kRankTieTolerance) {
      ++j;
    }
    const double r = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      ranks[order[k]] = r;
    }
    i = j;
  }
  return ranks;
}

std::vector<double> sine_ranks(std::span<const Angle> sample, double alpha) {
  std::vector<double> s(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    s[i] = std::sin(sample[i].radians() - alpha);
  }
  return average_ranks(s);
}

double weighted_arc_sum(std::span<const Angle> sample, const std::vector<double>& ranks,
                        Angle alpha) {
  double total = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    total += ranks[i] * arc_metric(sample[i], alpha);
  }
  return total;
}

}  // namespace

double Resultant::length() const { return std::hypot(s, c); }

Resultant resultant(std::span<const Angle> sample) {
  Resultant r;
  for (Angle a : sample) {
    r.s += a.sin();
    r.c += a.cos();
  }
  return r;
}

Angle mean_direction(std::span<const Angle> sample) {
  require_nonempty(sample, "mean_direction");
  const Resultant r = resultant(sample);
  if (r.length() < kResultantFloor) {
    throw UndefinedDirection();
  }
  return atan2pi(r.s, r.c);
}

double mean_objective(std::span<const Angle> sample, Angle alpha) {
  double total = 0.0;
  for (Angle a : sample) {
    total += chord_metric(a, alpha);
  }
  return total;
}

double median_objective(std::span<const Angle> sample, Angle alpha) {
  double total = 0.0;
  for (Angle a : sample) {
    total += arc_metric(a, alpha);
  }
  return total;
}

double l1_objective(std::span<const Angle> sample, Angle alpha) {
  double total = 0.0;
  for (Angle a : sample) {
    // sqrt(1 - cos x) = sqrt(2) |sin(x / 2)| without cancellation near 0.
    total += std::sqrt(2.0) * std::abs(std::sin(0.5 * (a.radians() - alpha.radians())));
  }
  return total;
}

double spatial_objective(std::span<const Angle> sample, double a1, double a2) {
  double total = 0.0;
  for (Angle a : sample) {
    total += std::hypot(a1 - a.cos(), a2 - a.sin());
  }
  return total;
}

double wilcoxon_objective(std::span<const Angle> sample, Angle alpha) {
  return weighted_arc_sum(sample, sine_ranks(sample, alpha.radians()), alpha);
}

// ---------------------------------------------------------------------------

EstimateResult circular_median(std::span<const Angle> sample) {
  require_nonempty(sample, "circular_median");
  std::vector<double> bp;
  bp.reserve(2 * sample.size());
  for (Angle a : sample) {
    bp.push_back(a.radians());
    bp.push_back(a.rotated(kPi).radians());
  }
  std::sort(bp.begin(), bp.end());
  const std::size_t m = bp.size();
  std::vector<double> g(m);
  for (std::size_t k = 0; k < m; ++k) {
    g[k] = median_objective(sample, Angle(bp[k]));
  }
  const double gmin = *std::min_element(g.begin(), g.end());
  const double tol = kTieTolerance * (1.0 + gmin);
  std::vector<bool> minimal(m);
  for (std::size_t k = 0; k < m; ++k) {
    minimal[k] = g[k] <= gmin + tol;
  }
  const Angle anchor = sample.front();
  if (std::all_of(minimal.begin(), minimal.end(), [](bool b) { return b; })) {
    // Criterion constant on the whole circle.
    return {anchor, median_objective(sample, anchor), m};
  }
  // Consecutive minimal breakpoints bound a flat piece; report the midpoint
  // of each maximal run.
  std::vector<Candidate> candidates;
  for (std::size_t k = 0; k < m; ++k) {
    if (!minimal[k] || minimal[(k + m - 1) % m]) {
      continue;
    }
    std::size_t e = k;
    while (minimal[(e + 1) % m]) {
      e = (e + 1) % m;
    }
    const double span = ccw_offset(Angle(bp[k]), Angle(bp[e]));
    const Angle mid(bp[k] + 0.5 * span);
    candidates.push_back({mid.radians(), median_objective(sample, mid)});
  }
  const Candidate best = pick_best(candidates, anchor);
  return {Angle(best.location), best.value, m};
}

EstimateResult l1_estimator(std::span<const Angle> sample) {
  require_nonempty(sample, "l1_estimator");
  std::vector<Candidate> candidates;
  candidates.reserve(sample.size());
  for (Angle a : sample) {
    candidates.push_back({a.radians(), l1_objective(sample, a)});
  }
  const Candidate best = pick_best(candidates, sample.front());
  return {Angle(best.location), best.value, sample.size()};
}

EstimateResult normalized_spatial_median(std::span<const Angle> sample) {
  require_nonempty(sample, "normalized_spatial_median");
  const std::size_t n = sample.size();
  std::vector<double> xs(n), ys(n);
  double y1 = 0.0, y2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = sample[i].cos();
    ys[i] = sample[i].sin();
    y1 += xs[i];
    y2 += ys[i];
  }
  y1 /= static_cast<double>(n);
  y2 /= static_cast<double>(n);

  // A data point is the unique median when the unit pulls of the other
  // points sum to less than its multiplicity; Weiszfeld only creeps towards it.
  for (std::size_t k = 0; k < n; ++k) {
    double r1 = 0.0, r2 = 0.0, eta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = std::hypot(xs[i] - xs[k], ys[i] - ys[k]);
      if (d < kCoincident) {
        eta += 1.0;
        continue;
      }
      r1 += (xs[i] - xs[k]) / d;
      r2 += (ys[i] - ys[k]) / d;
    }
    if (std::hypot(r1, r2) < eta * (1.0 - 1e-12)) {
      return {sample[k], spatial_objective(sample, xs[k], ys[k]), 0};
    }
  }

  // Vardi-Zhang modification of Weiszfeld: handles iterates that land on a
  // data point.
  std::size_t it = 0;
  for (; it < kSpatialMaxIterations; ++it) {
    double num1 = 0.0, num2 = 0.0, den = 0.0;
    double r1 = 0.0, r2 = 0.0;
    double eta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = std::hypot(xs[i] - y1, ys[i] - y2);
      if (d < kCoincident) {
        eta += 1.0;
        continue;
      }
      num1 += xs[i] / d;
      num2 += ys[i] / d;
      den += 1.0 / d;
      r1 += (xs[i] - y1) / d;
      r2 += (ys[i] - y2) / d;
    }
    if (den == 0.0) {
      break;  // every point coincides with the iterate
    }
    const double t1 = num1 / den;
    const double t2 = num2 / den;
    double next1 = t1, next2 = t2;
    if (eta > 0.0) {
      const double r = std::hypot(r1, r2);
      if (r <= eta) {
        break;  // data point satisfies the optimality condition
      }
      const double w = eta / r;
      next1 = (1.0 - w) * t1 + w * y1;
      next2 = (1.0 - w) * t2 + w * y2;
    }
    const double step = std::hypot(next1 - y1, next2 - y2);
    y1 = next1;
    y2 = next2;
    if (step < kSpatialStep) {
      ++it;
      break;
    }
  }
  if (std::hypot(y1, y2) < kSpatialOriginFloor) {
    throw DegenerateSpatialMedian("normalized_spatial_median: planar median at the origin");
  }
  return {atan2pi(y2, y1), spatial_objective(sample, y1, y2), it};
}

EstimateResult circular_wilcoxon(std::span<const Angle> sample) {
  require_nonempty(sample, "circular_wilcoxon");
  const std::size_t n = sample.size();
  std::vector<double> bp;
  bp.reserve(2 * n + n * (n - 1));
  for (Angle a : sample) {
    bp.push_back(a.radians());
    bp.push_back(a.rotated(kPi).radians());
  }
  // sin(theta_i - alpha) = sin(theta_j - alpha) at alpha = (theta_i + theta_j - pi) / 2 mod pi.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Angle m(0.5 * (sample[i].radians() + sample[j].radians() - kPi));
      bp.push_back(m.radians());
      bp.push_back(m.rotated(kPi).radians());
    }
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end(),
                       [](double a, double b) { return b - a < kCoincident; }),
           bp.end());
  if (bp.size() > 1 && bp.back() - bp.front() > kTwoPi - kCoincident) {
    bp.pop_back();
  }

  std::vector<Candidate> candidates;
  const std::size_t m = bp.size();
  candidates.reserve(2 * m);
  for (std::size_t k = 0; k < m; ++k) {
    const double a = bp[k];
    const double b = k + 1 < m ? bp[k + 1] : bp.front() + kTwoPi;
    const std::vector<double> ranks = sine_ranks(sample, 0.5 * (a + b));
    candidates.push_back({a, weighted_arc_sum(sample, ranks, Angle(a))});
    candidates.push_back({reduce_angle(b), weighted_arc_sum(sample, ranks, Angle(b))});
  }
  const Candidate best = pick_best(candidates, sample.front());
  return {Angle(best.location), best.value, m};
}

// ---------------------------------------------------------------------------

Angle mle_torus_common_mean(const TorusSample& sample) {
  if (sample.components.empty()) {
    throw InvalidParameter("mle_torus_common_mean: no components");
  }
  if (sample.components.size() != sample.concentrations.size()) {
    throw DimensionMismatch("mle_torus_common_mean: " + std::to_string(sample.components.size()) +
                            " components but " + std::to_string(sample.concentrations.size()) +
                            " concentrations");
  }
  double s = 0.0;
  double c = 0.0;
  for (std::size_t i = 0; i < sample.components.size(); ++i) {
    const double k = sample.concentrations[i];
    if (!(k > 0.0)) {
      throw InvalidParameter("mle_torus_common_mean: concentrations must be > 0");
    }
    require_nonempty(sample.components[i], "mle_torus_common_mean");
    // k_i R_i (sin, cos)(theta_bar_i) is k_i times the component resultant.
    const Resultant r = resultant(sample.components[i]);
    s += k * r.s;
    c += k * r.c;
  }
  if (std::hypot(s, c) < kResultantFloor) {
    throw UndefinedDirection();
  }
  return atan2pi(s, c);
}

Angle mle_fisher_longitude(std::span<const SpherePoint> sample) {
  if (sample.empty()) {
    throw InvalidParameter("mle_fisher_longitude: empty sample");
  }
  double s = 0.0;
  double c = 0.0;
  for (const SpherePoint& p : sample) {
    const double st = std::sin(p.theta);
    s += st * p.phi.sin();
    c += st * p.phi.cos();
  }
  if (std::abs(s) < kResultantFloor && std::abs(c) < kResultantFloor) {
    throw UndefinedDirection();
  }
  return atan2pi(s, c);
}

Angle mle_cylinder_location(std::span<const CylinderPoint> sample) {
  const std::size_t n = sample.size();
  if (n < 3) {
    throw InvalidParameter("mle_cylinder_location: need at least 3 observations");
  }
  std::array<double, 3> mean{};
  for (const CylinderPoint& p : sample) {
    mean[0] += p.x;
    mean[1] += p.theta.cos();
    mean[2] += p.theta.sin();
  }
  for (double& m : mean) {
    m /= static_cast<double>(n);
  }
  std::array<std::array<double, 3>, 3> cross{};
  for (const CylinderPoint& p : sample) {
    const std::array<double, 3> d{p.x - mean[0], p.theta.cos() - mean[1], p.theta.sin() - mean[2]};
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 3; ++k) {
        cross[i][k] += d[i] * d[k];
      }
    }
  }
  const double s1 = std::sqrt(cross[0][0]);
  const double s2 = std::sqrt(cross[1][1]);
  const double s3 = std::sqrt(cross[2][2]);
  if (!(s1 > 0.0 && s2 > 0.0 && s3 > 0.0)) {
    throw DegenerateSample("mle_cylinder_location: zero sample variance");
  }
  const double r12 = cross[0][1] / (s1 * s2);
  const double r13 = cross[0][2] / (s1 * s3);
  const double r23 = cross[1][2] / (s2 * s3);
  const double den = r23 * r13 - r12;
  if (std::abs(den) < 1e-12) {
    throw DegenerateSample("mle_cylinder_location: r23 r13 - r12 vanishes");
  }
  // Regression of x on (cos, sin): the coefficients are proportional to
  // (cos nu, sin nu) with a nonnegative factor, which fixes the quadrant.
  const double s = s2 * (r13 - r12 * r23);
  const double c = s3 * (r12 - r13 * r23);
  return atan2pi(s, c);
}

}  // namespace circtrunc
