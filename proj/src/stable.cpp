#include "circtrunc/stable.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "circtrunc/errors.hpp"

namespace circtrunc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = kPi / 2.0;

enum class Kind { Density, Derivative, Survival };

// Integral representation for x > 0 with theta = (pi/2) s(z), s the logistic
// function, so both ends of (0, pi/2) are resolved:
//   h(theta) = x^{a/(a-1)} V(theta),
//   V(theta) = (cos theta / sin(a theta))^{a/(a-1)} cos((a-1) theta) / cos theta.
// log h is monotone in z, increasing for a < 1 and decreasing for a > 1.
class Representation {
 public:
  Representation(double x, double alpha)
      : alpha_(alpha), e_(alpha / (alpha - 1.0)), log_x_term_(e_ * std::log(x)) {}

  [[nodiscard]] double log_h(double z) const {
    const double theta = kHalfPi * logistic(z);
    const double c = kHalfPi * logistic(-z);  // pi/2 - theta, accurate near pi/2
    const double log_cos = std::log(std::sin(c));
    const double log_v = e_ * (log_cos - std::log(std::sin(alpha_ * theta))) +
                         std::log(std::cos((alpha_ - 1.0) * theta)) - log_cos;
    return log_x_term_ + log_v;
  }

  [[nodiscard]] double jacobian(double z) const { return kHalfPi * logistic(z) * logistic(-z); }

  [[nodiscard]] bool increasing() const { return alpha_ < 1.0; }

  /// z with log h(z) = level, or NaN when the level is not crossed.
  [[nodiscard]] double solve(double level) const {
    double lo = -kZMax;
    double hi = kZMax;
    double f_lo = log_h(lo) - level;
    const double f_hi = log_h(hi) - level;
    if (!(f_lo * f_hi < 0.0)) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    // Split points only shape the quadrature panels; moderate accuracy is enough.
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = log_h(mid) - level;
      if ((f_mid < 0.0) == (f_lo < 0.0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  static constexpr double kZMax = 700.0;

 private:
  static double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

  double alpha_;
  double e_;
  double log_x_term_;
};

double integrate_representation(double x, double alpha, Kind kind) {
  const Representation rep(x, alpha);
  auto integrand = [&](double z) {
    const double lh = rep.log_h(z);
    const double jac = rep.jacobian(z);
    if (!std::isfinite(lh)) {
      // h = 0 or h = inf at the far ends.
      if (lh < 0.0) {
        return (kind == Kind::Survival && alpha > 1.0) ? jac : 0.0;
      }
      return (kind == Kind::Survival && alpha < 1.0) ? jac : 0.0;
    }
    const double h = std::exp(lh);
    switch (kind) {
      case Kind::Density:
        return lh > 7.0 ? (h > 745.0 ? 0.0 : std::exp(lh - h)) * jac : std::exp(lh - h) * jac;
      case Kind::Derivative:
        return h > 745.0 ? 0.0 : (1.0 - h) * std::exp(lh - h) * jac;
      case Kind::Survival:
        return (alpha < 1.0 ? -std::expm1(-h) : std::exp(-h)) * jac;
    }
    return 0.0;
  };
  static constexpr std::array<double, 11> kLevels{-30.0, -10.0, -4.0, -2.0, -1.0, 0.0,
                                                  1.0,   2.0,   3.5,  5.0,  6.6};
  std::vector<double> cuts;
  for (double level : kLevels) {
    const double z = rep.solve(level);
    if (std::isfinite(z)) {
      cuts.push_back(z);
    }
  }
  if (!rep.increasing()) {
    std::reverse(cuts.begin(), cuts.end());
  }
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  // The Jacobian is below e^{-40} forty units beyond the outermost cut, and
  // every integrand is bounded by it there.
  const double lo = std::max(-Representation::kZMax, (cuts.empty() ? 0.0 : cuts.front()) - 40.0);
  const double hi = std::min(Representation::kZMax, (cuts.empty() ? 0.0 : cuts.back()) + 40.0);
  double total = 0.0;
  double prev = lo;
  for (double c : cuts) {
    if (c > prev) {
      total += GK::integrate(integrand, prev, c, 10, 1e-12);
      prev = c;
    }
  }
  total += GK::integrate(integrand, prev, hi, 10, 1e-12);
  return total;
}

// Series in x^{-alpha}: convergent for alpha < 1, asymptotic for alpha > 1.
//   g(x)  = (1/pi) sum_k (-1)^{k+1} Gamma(ak+1)/k! sin(k pi a/2) x^{-ak-1}
//   g'(x) = -(1/pi) sum_k (-1)^{k+1} Gamma(ak+1)/k! sin(k pi a/2) (ak+1) x^{-ak-2}
//   S(x)  = (1/pi) sum_k (-1)^{k+1} Gamma(ak)/k! sin(k pi a/2) x^{-ak}
// Returns false when the terms do not settle cleanly.
bool tail_series(double x, double alpha, Kind kind, double& out) {
  const double log_x = std::log(x);
  double sum = 0.0;
  double max_term = 0.0;
  double prev_abs = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 400; ++k) {
    const double ak = alpha * k;
    double log_mag = 0.0;
    double scale = 1.0;
    switch (kind) {
      case Kind::Density:
        log_mag = std::lgamma(ak + 1.0) - std::lgamma(k + 1.0) - (ak + 1.0) * log_x;
        break;
      case Kind::Derivative:
        log_mag = std::lgamma(ak + 1.0) - std::lgamma(k + 1.0) - (ak + 2.0) * log_x;
        scale = -(ak + 1.0);
        break;
      case Kind::Survival:
        log_mag = std::lgamma(ak) - std::lgamma(k + 1.0) - ak * log_x;
        break;
    }
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    const double term = sign * scale * std::exp(log_mag) * std::sin(k * kPi * alpha / 2.0);
    const double mag = std::exp(log_mag) * std::abs(scale);
    if (alpha > 1.0 && mag > prev_abs) {
      return false;  // asymptotic series started to diverge
    }
    prev_abs = mag;
    sum += term;
    max_term = std::max(max_term, std::abs(term));
    if (mag < 1e-17 * std::abs(sum)) {
      if (max_term > 1e3 * std::abs(sum)) {
        return false;  // cancellation
      }
      out = sum / kPi;
      return true;
    }
  }
  return false;
}

// Series in x^2, convergent for alpha > 1:
//   g(x)  = 1/(pi a) sum_k (-1)^k Gamma((2k+1)/a)/(2k)! x^{2k}
//   g'(x) = 1/(pi a) sum_k (-1)^k Gamma((2k+1)/a)/(2k)! 2k x^{2k-1}
//   S(x)  = 1/2 - 1/(pi a) sum_k (-1)^k Gamma((2k+1)/a)/(2k+1)! x^{2k+1}
bool centre_series(double x, double alpha, Kind kind, double& out) {
  if (alpha < 1.0) {
    return false;
  }
  const double log_x = std::log(x);
  double sum = 0.0;
  double max_term = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double lg = std::lgamma((2.0 * k + 1.0) / alpha);
    double log_mag = 0.0;
    double scale = 1.0;
    switch (kind) {
      case Kind::Density:
        log_mag = lg - std::lgamma(2.0 * k + 1.0) + 2.0 * k * log_x;
        break;
      case Kind::Derivative:
        if (k == 0) {
          continue;
        }
        log_mag = lg - std::lgamma(2.0 * k + 1.0) + (2.0 * k - 1.0) * log_x;
        scale = 2.0 * k;
        break;
      case Kind::Survival:
        log_mag = lg - std::lgamma(2.0 * k + 2.0) + (2.0 * k + 1.0) * log_x;
        break;
    }
    const double mag = scale * std::exp(log_mag);
    const double term = (k % 2 == 0 ? 1.0 : -1.0) * mag;
    sum += term;
    max_term = std::max(max_term, mag);
    if (k > 2 && mag < 1e-17 * std::abs(sum)) {
      if (max_term > 1e3 * std::abs(sum)) {
        return false;
      }
      sum /= kPi * alpha;
      out = kind == Kind::Survival ? 0.5 - sum : sum;
      // The survival subtraction loses digits once S is small.
      return kind != Kind::Survival || out > 1e-3;
    }
  }
  return false;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0 && alpha != 1.0)) {
    throw InvalidParameter("stable law: alpha must be in (0, 1) u (1, 2)");
  }
}

}  // namespace

double stable_density(double x, double alpha) {
  check_alpha(alpha);
  x = std::abs(x);
  if (x == 0.0) {
    return std::tgamma(1.0 + 1.0 / alpha) / kPi;
  }
  double v = 0.0;
  if (tail_series(x, alpha, Kind::Density, v) || centre_series(x, alpha, Kind::Density, v)) {
    return v;
  }
  return alpha / (kPi * std::abs(alpha - 1.0) * x) * integrate_representation(x, alpha, Kind::Density);
}

double stable_density_derivative(double x, double alpha) {
  check_alpha(alpha);
  if (x == 0.0) {
    return 0.0;
  }
  const double sign = x < 0.0 ? -1.0 : 1.0;
  x = std::abs(x);
  double v = 0.0;
  if (tail_series(x, alpha, Kind::Derivative, v) || centre_series(x, alpha, Kind::Derivative, v)) {
    return sign * v;
  }
  // g = c I / x with d/dx (h e^{-h}) = (e / x) h (1 - h) e^{-h}.
  const double c = alpha / (kPi * std::abs(alpha - 1.0));
  const double e = alpha / (alpha - 1.0);
  const double g = c / x * integrate_representation(x, alpha, Kind::Density);
  const double j = integrate_representation(x, alpha, Kind::Derivative);
  return sign * (-g / x + c * e / (x * x) * j);
}

double stable_survival(double x, double alpha) {
  check_alpha(alpha);
  if (x < 0.0) {
    return 1.0 - stable_survival(-x, alpha);
  }
  if (x == 0.0) {
    return 0.5;
  }
  double v = 0.0;
  if (tail_series(x, alpha, Kind::Survival, v) || centre_series(x, alpha, Kind::Survival, v)) {
    return v;
  }
  return integrate_representation(x, alpha, Kind::Survival) / kPi;
}

}  // namespace circtrunc
