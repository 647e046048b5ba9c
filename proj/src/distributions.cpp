#include "circtrunc/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "circtrunc/errors.hpp"
#include "circtrunc/quadrature.hpp"
#include "circtrunc/stable.hpp"

namespace circtrunc {

namespace detail {

class InverseCdfTable {
 public:
  static constexpr std::size_t kIntervals = 1u << 14;

  /// `density` is any nonnegative function of the offset x in [-pi, pi];
  /// it need not be normalized.
  template <typename F>
  explicit InverseCdfTable(F&& density) : cdf_(kIntervals + 1, 0.0) {
    const double h = kTwoPi / static_cast<double>(kIntervals);
    double prev = density(-kPi);
    for (std::size_t k = 1; k <= kIntervals; ++k) {
      const double cur = density(-kPi + h * static_cast<double>(k));
      cdf_[k] = cdf_[k - 1] + 0.5 * h * (prev + cur);
      prev = cur;
    }
    const double total = cdf_.back();
    for (double& c : cdf_) {
      c /= total;
    }
  }

  /// Offset x in [-pi, pi] with CDF(x) = u, linear between table nodes.
  [[nodiscard]] double invert(double u) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
    k = std::clamp<std::size_t>(k, 1, kIntervals);
    const double lo = cdf_[k - 1];
    const double hi = cdf_[k];
    const double h = kTwoPi / static_cast<double>(kIntervals);
    const double frac = hi > lo ? (u - lo) / (hi - lo) : 0.5;
    return -kPi + h * (static_cast<double>(k - 1) + frac);
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace detail

namespace {

constexpr double kSeriesCutoff = 1e-14;
// Longer theta series switch to summing the wrapped line density.
constexpr double kMaxSeriesTerms = 65536.0;
// Explicit wraps on each side before the tail is taken from the survival function.
constexpr int kExplicitWraps = 16;
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) {
    throw InvalidParameter(what);
  }
}

/// Number of theta-series terms above the cutoff.
double theta_series_length(double rho, double alpha) {
  return std::pow(std::log(kSeriesCutoff) / std::log(rho), 1.0 / alpha);
}

/// rho^{i^alpha} for i = 1, 2, ... until the term drops below the cutoff.
std::vector<double> theta_series(double rho, double alpha) {
  std::vector<double> c;
  const double log_rho = std::log(rho);
  for (std::size_t i = 1;; ++i) {
    const double term = std::exp(std::pow(static_cast<double>(i), alpha) * log_rho);
    if (term < kSeriesCutoff) {
      break;
    }
    c.push_back(term);
  }
  return c;
}

/// sum_{i>=1} c_i T_i(t) by Clenshaw's recurrence.
double chebyshev_t_sum(const std::vector<double>& c, double t) {
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t i = c.size(); i >= 1; --i) {
    const double b0 = c[i - 1] + 2.0 * t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  // No T_0 term.
  return b1 * t - b2;
}

/// sum_{i>=1} c_i i U_{i-1}(t), the t-derivative of chebyshev_t_sum.
double chebyshev_t_sum_derivative(const std::vector<double>& c, double t) {
  // Clenshaw for sum_{k>=0} a_k U_k(t) with a_k = (k+1) c_{k+1}.
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = c.size(); k >= 1; --k) {
    const double a = static_cast<double>(k) * c[k - 1];
    const double b0 = a + 2.0 * t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return b1;
}

double best_fisher_offset(double kappa, Rng& rng) {
  if (kappa < 1e-8) {
    return kTwoPi * uniform_open(rng) - kPi;
  }
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  for (;;) {
    const double u1 = uniform_open(rng);
    const double u2 = uniform_open(rng);
    const double u3 = uniform_open(rng);
    const double z = std::cos(kPi * u1);
    const double f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      const double x = std::acos(std::clamp(f, -1.0, 1.0));
      return u3 > 0.5 ? x : -x;
    }
  }
}

/// Symmetric alpha-stable variate with characteristic function exp(-|s|^alpha)
/// (Chambers-Mallows-Stuck).
double symmetric_stable(double alpha, Rng& rng) {
  const double v = kPi * (uniform_open(rng) - 0.5);
  const double w = -std::log(uniform_open(rng));
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

}  // namespace

// ---------------------------------------------------------------------------
// Bessel helpers

double log_bessel_i0(double kappa) {
  kappa = std::abs(kappa);
  if (kappa <= 700.0) {
    return std::log(std::cyl_bessel_i(0.0, kappa));
  }
  const double k = kappa;
  return k - 0.5 * std::log(kTwoPi * k) +
         std::log1p(1.0 / (8.0 * k) + 9.0 / (128.0 * k * k) + 225.0 / (3072.0 * k * k * k));
}

double bessel_ratio_a1(double kappa) {
  if (kappa <= 700.0) {
    return std::cyl_bessel_i(1.0, kappa) / std::cyl_bessel_i(0.0, kappa);
  }
  return 1.0 - 1.0 / (2.0 * kappa) - 1.0 / (8.0 * kappa * kappa);
}

double wrapped_normal_product_density(double t, double rho) {
  require(rho > 0.0 && rho < 1.0, "wrapped normal: rho must be in (0, 1)");
  double prod = 1.0;
  for (int i = 1;; ++i) {
    const double odd = std::pow(rho, 2 * i - 1);
    if (odd < 1e-17) {
      break;
    }
    prod *= (1.0 - std::pow(rho, 2 * i)) * (1.0 + 2.0 * t * odd + odd * odd);
  }
  return prod / kTwoPi;
}

// ---------------------------------------------------------------------------
// Factories

CircularDistribution CircularDistribution::circular_normal(Angle nu, double kappa) {
  require(kappa > 0.0 && std::isfinite(kappa), "circular normal: kappa must be > 0");
  CircularDistribution d(CircularNormal{kappa}, nu);
  d.log_norm_ = -kLogTwoPi - log_bessel_i0(kappa);
  return d;
}

CircularDistribution CircularDistribution::wrapped_cauchy(Angle nu, double rho) {
  require(rho > 0.0 && rho < 1.0, "wrapped Cauchy: rho must be in (0, 1)");
  return CircularDistribution(WrappedCauchy{rho}, nu);
}

CircularDistribution CircularDistribution::wrapped_normal(Angle nu, double rho) {
  require(rho > 0.0 && rho < 1.0, "wrapped normal: rho must be in (0, 1)");
  CircularDistribution d(WrappedNormal{rho}, nu);
  if (theta_series_length(rho, 2.0) > kMaxSeriesTerms) {
    d.wrapped_sum_ = true;
    d.line_scale_ = std::sqrt(-2.0 * std::log(rho));  // standard deviation
  } else {
    d.series_ = std::make_shared<const std::vector<double>>(theta_series(rho, 2.0));
  }
  return d;
}

CircularDistribution CircularDistribution::cardioid(Angle nu, double rho) {
  require(std::abs(rho) < 0.5, "cardioid: |rho| must be < 1/2");
  CircularDistribution d(Cardioid{rho}, nu);
  d.inverse_cdf_ = std::make_shared<const detail::InverseCdfTable>(
      [rho](double x) { return 1.0 + 2.0 * rho * std::cos(x); });
  return d;
}

CircularDistribution CircularDistribution::jones_pewsey(Angle nu, double kappa, double psi) {
  require(kappa > 0.0 && std::isfinite(kappa), "Jones-Pewsey: kappa must be > 0");
  require(std::isfinite(psi), "Jones-Pewsey: psi must be finite");
  CircularDistribution d(JonesPewsey{kappa, psi}, nu);
  if (psi == 0.0) {
    d.log_norm_ = -kLogTwoPi - log_bessel_i0(kappa);
    d.inverse_cdf_ = std::make_shared<const detail::InverseCdfTable>(
        [kappa](double x) { return std::exp(kappa * (std::cos(x) - 1.0)); });
    return d;
  }
  const double tau = std::tanh(kappa * psi);
  const double inv_psi = 1.0 / psi;
  // Scale by the value at the mode so large exponents stay finite.
  const double log_peak = inv_psi * std::log1p(tau);
  auto scaled = [tau, inv_psi, log_peak](double x) {
    return std::exp(inv_psi * std::log1p(tau * std::cos(x)) - log_peak);
  };
  const QuadratureResult q = periodic_trapezoid(scaled, 0.0, 1e-13);
  d.log_norm_ = -(std::log(q.value) + log_peak);
  d.inverse_cdf_ = std::make_shared<const detail::InverseCdfTable>(scaled);
  return d;
}

CircularDistribution CircularDistribution::wrapped_stable(Angle nu, double rho, double alpha) {
  require(rho > 0.0 && rho < 1.0, "wrapped stable: rho must be in (0, 1)");
  require(alpha > 0.0 && alpha <= 2.0 && alpha != 1.0,
          "wrapped stable: alpha must be in (0, 1) u (1, 2]");
  CircularDistribution d(WrappedStable{rho, alpha}, nu);
  if (theta_series_length(rho, alpha) > kMaxSeriesTerms) {
    d.wrapped_sum_ = true;
    // Characteristic function exp(-|s p|^alpha); for alpha = 2 store the
    // standard deviation as the wrapped normal does.
    d.line_scale_ = alpha == 2.0 ? std::sqrt(-2.0 * std::log(rho)) : std::pow(-std::log(rho), 1.0 / alpha);
  } else {
    d.series_ = std::make_shared<const std::vector<double>>(theta_series(rho, alpha));
  }
  return d;
}

CircularDistribution CircularDistribution::antipodal_mixture(const CircularDistribution& base,
                                                             double epsilon) {
  require(epsilon >= 0.0 && epsilon <= 1.0, "antipodal mixture: epsilon must be in [0, 1]");
  CircularDistribution d = base;
  d.mixture_ = true;
  d.epsilon_ = epsilon;
  return d;
}

// ---------------------------------------------------------------------------

std::string CircularDistribution::base_name() const {
  return std::visit(Overloaded{
                        [](const CircularNormal&) { return std::string("circular_normal"); },
                        [](const WrappedCauchy&) { return std::string("wrapped_cauchy"); },
                        [](const WrappedNormal&) { return std::string("wrapped_normal"); },
                        [](const Cardioid&) { return std::string("cardioid"); },
                        [](const JonesPewsey&) { return std::string("jones_pewsey"); },
                        [](const WrappedStable&) { return std::string("wrapped_stable"); },
                    },
                    family_);
}

std::string CircularDistribution::name() const {
  return mixture_ ? std::string("antipodal_mixture") : base_name();
}

CircularDistribution CircularDistribution::with_location(Angle nu) const {
  CircularDistribution d = *this;
  d.nu_ = nu;
  return d;
}

CircularDistribution CircularDistribution::base() const {
  CircularDistribution d = *this;
  d.mixture_ = false;
  d.epsilon_ = 1.0;
  return d;
}

// ---------------------------------------------------------------------------
// Wrapped sums of the line law, for offsets x in [-pi, pi].

namespace {

bool gaussian_line(const BaseFamily& f) {
  return std::holds_alternative<WrappedNormal>(f) ||
         (std::holds_alternative<WrappedStable>(f) && std::get<WrappedStable>(f).alpha == 2.0);
}

/// Offset reduced to [-pi, pi].
double centred(double x) { return std::remainder(x, kTwoPi); }

}  // namespace

double CircularDistribution::wrapped_sum_density(double x) const {
  x = centred(x);
  const double s = line_scale_;
  if (gaussian_line(family_)) {
    // The scale is tiny here, so two wraps each side are plenty.
    double sum = 0.0;
    for (int k = -2; k <= 2; ++k) {
      const double z = (x + kTwoPi * k) / s;
      sum += std::exp(-0.5 * z * z);
    }
    return sum / (s * std::sqrt(kTwoPi));
  }
  const double alpha = std::get<WrappedStable>(family_).alpha;
  double sum = 0.0;
  for (int k = -kExplicitWraps; k <= kExplicitWraps; ++k) {
    sum += stable_density((x + kTwoPi * k) / s, alpha) / s;
  }
  // Remaining wraps by the midpoint rule with its first Euler-Maclaurin term:
  // sum_{k > K} p(x + 2 pi k) ~ S((Y + x) / s) / 2pi + 2pi p'(Y + x) / 24.
  const double y = kTwoPi * (kExplicitWraps + 0.5);
  sum += (stable_survival((y + x) / s, alpha) + stable_survival((y - x) / s, alpha)) / kTwoPi;
  sum += kTwoPi / 24.0 *
         (stable_density_derivative((y + x) / s, alpha) + stable_density_derivative((y - x) / s, alpha)) / (s * s);
  return sum;
}

double CircularDistribution::wrapped_sum_derivative(double x) const {
  x = centred(x);
  const double s = line_scale_;
  if (gaussian_line(family_)) {
    double sum = 0.0;
    for (int k = -2; k <= 2; ++k) {
      const double z = (x + kTwoPi * k) / s;
      sum += -z * std::exp(-0.5 * z * z);
    }
    return sum / (s * s * std::sqrt(kTwoPi));
  }
  const double alpha = std::get<WrappedStable>(family_).alpha;
  double sum = 0.0;
  for (int k = -kExplicitWraps; k <= kExplicitWraps; ++k) {
    sum += stable_density_derivative((x + kTwoPi * k) / s, alpha) / (s * s);
  }
  const double y = kTwoPi * (kExplicitWraps + 0.5);
  sum += (stable_density((y - x) / s, alpha) - stable_density((y + x) / s, alpha)) / (kTwoPi * s);
  // Euler-Maclaurin term 2pi p''/24; p'' by a central difference of p', as it is only a correction.
  const auto second = [&](double u) {
    const double h = 1e-3 * u;
    return (stable_density_derivative((u + h) / s, alpha) - stable_density_derivative((u - h) / s, alpha)) /
           (2.0 * h * s * s);
  };
  sum += kTwoPi / 24.0 * (second(y + x) - second(y - x));
  return sum;
}

double CircularDistribution::wrapped_sum_log_density(double x) const {
  if (!gaussian_line(family_)) {
    return std::log(wrapped_sum_density(x));
  }
  // log-sum-exp keeps the far side finite when the scale is tiny.
  x = centred(x);
  const double s = line_scale_;
  std::array<double, 5> e{};
  double top = -std::numeric_limits<double>::infinity();
  for (int k = -2; k <= 2; ++k) {
    const double z = (x + kTwoPi * k) / s;
    e[k + 2] = -0.5 * z * z;
    top = std::max(top, e[k + 2]);
  }
  double sum = 0.0;
  for (double v : e) {
    sum += std::exp(v - top);
  }
  return top + std::log(sum) - std::log(s) - 0.5 * kLogTwoPi;
}

double CircularDistribution::base_density_offset(double x) const {
  if (wrapped_sum_) {
    return wrapped_sum_density(x);
  }
  return density_t(std::cos(x));
}

double CircularDistribution::base_log_density_offset(double x) const {
  if (wrapped_sum_) {
    return wrapped_sum_log_density(x);
  }
  const double t = std::cos(x);
  return std::visit(
      Overloaded{
          [&](const CircularNormal& f) { return f.kappa * t + log_norm_; },
          [&](const JonesPewsey& f) {
            if (f.psi == 0.0) {
              return f.kappa * t + log_norm_;
            }
            return std::log1p(std::tanh(f.kappa * f.psi) * t) / f.psi + log_norm_;
          },
          [&](const auto&) { return std::log(density_t(t)); },
      },
      family_);
}

double CircularDistribution::density_t(double t) const {
  if (wrapped_sum_) {
    return wrapped_sum_density(std::acos(std::clamp(t, -1.0, 1.0)));
  }
  return std::visit(
      Overloaded{
          [&](const CircularNormal& f) { return std::exp(f.kappa * t + log_norm_); },
          [&](const WrappedCauchy& f) {
            return (1.0 - f.rho * f.rho) / (kTwoPi * (1.0 + f.rho * f.rho - 2.0 * f.rho * t));
          },
          [&](const WrappedNormal&) { return (1.0 + 2.0 * chebyshev_t_sum(*series_, t)) / kTwoPi; },
          [&](const Cardioid& f) { return (1.0 + 2.0 * f.rho * t) / kTwoPi; },
          [&](const JonesPewsey& f) {
            if (f.psi == 0.0) {
              return std::exp(f.kappa * t + log_norm_);
            }
            return std::exp(std::log1p(std::tanh(f.kappa * f.psi) * t) / f.psi + log_norm_);
          },
          [&](const WrappedStable&) { return (1.0 + 2.0 * chebyshev_t_sum(*series_, t)) / kTwoPi; },
      },
      family_);
}

double CircularDistribution::density_t_derivative(double t) const {
  if (wrapped_sum_) {
    // dF/dt = -f'(x) / sin x with x = acos t; near t = +-1 use a point just
    // inside, far below the scale on which f varies.
    const double x_min = 1e-4 * std::min(line_scale_, 1.0);
    const double x = std::clamp(std::acos(std::clamp(t, -1.0, 1.0)), x_min, kPi - 1e-4);
    return -wrapped_sum_derivative(x) / std::sin(x);
  }
  return std::visit(
      Overloaded{
          [&](const CircularNormal& f) { return f.kappa * std::exp(f.kappa * t + log_norm_); },
          [&](const WrappedCauchy& f) {
            const double den = 1.0 + f.rho * f.rho - 2.0 * f.rho * t;
            return 2.0 * f.rho * (1.0 - f.rho * f.rho) / (kTwoPi * den * den);
          },
          [&](const WrappedNormal&) { return chebyshev_t_sum_derivative(*series_, t) / kPi; },
          [&](const Cardioid& f) { return f.rho / kPi; },
          [&](const JonesPewsey& f) {
            if (f.psi == 0.0) {
              return f.kappa * std::exp(f.kappa * t + log_norm_);
            }
            const double tau = std::tanh(f.kappa * f.psi);
            return tau / f.psi *
                   std::exp((1.0 / f.psi - 1.0) * std::log1p(tau * t) + log_norm_);
          },
          [&](const WrappedStable&) { return chebyshev_t_sum_derivative(*series_, t) / kPi; },
      },
      family_);
}

double CircularDistribution::zeta(double t) const {
  if (!(t >= -1.0 && t <= 1.0)) {
    throw InvalidParameter("zeta: t must lie in [-1, 1]");
  }
  return std::visit(
      Overloaded{
          [&](const CircularNormal& f) { return std::exp(2.0 * f.kappa * t); },
          [&](const WrappedCauchy& f) {
            const double r2 = 1.0 + f.rho * f.rho;
            const double q = (r2 + 2.0 * f.rho * t) / (r2 - 2.0 * f.rho * t);
            return q * q;
          },
          [&](const Cardioid& f) {
            if (f.rho == 0.0) {
              throw UndefinedZeta("zeta: uniform cardioid has f'(t) = 0");
            }
            return 1.0;
          },
          [&](const JonesPewsey& f) {
            if (f.psi == 0.0) {
              return std::exp(2.0 * f.kappa * t);
            }
            const double tau = std::tanh(f.kappa * f.psi);
            return std::exp((1.0 / f.psi - 1.0) * (std::log1p(tau * t) - std::log1p(-tau * t)));
          },
          [&](const auto&) {
            const double den = density_t_derivative(-t);
            if (den == 0.0) {
              throw UndefinedZeta("zeta: f'(-t) = 0");
            }
            return density_t_derivative(t) / den;
          },
      },
      family_);
}

bool CircularDistribution::unimodal_at_location() const {
  const bool base_ok = std::visit(Overloaded{
                                      [](const Cardioid& f) { return f.rho > 0.0; },
                                      [](const auto&) { return true; },
                                  },
                                  family_);
  if (!mixture_ || epsilon_ == 1.0) {
    return base_ok;
  }
  if (!base_ok) {
    return false;
  }
  const ShapeReport shape = classify_mixture(*this);
  return shape.modality == ShapeReport::Modality::Unimodal && shape.modes.size() == 1 &&
         shape.modes.front() == nu_;
}

double CircularDistribution::density(Angle theta) const {
  const double x = theta.radians() - nu_.radians();
  if (!mixture_) {
    return base_density_offset(x);
  }
  return epsilon_ * base_density_offset(x) + (1.0 - epsilon_) * base_density_offset(x + kPi);
}

double CircularDistribution::log_density(Angle theta) const {
  const double x = theta.radians() - nu_.radians();
  if (!mixture_) {
    return base_log_density_offset(x);
  }
  return std::log(density(theta));
}

double CircularDistribution::draw_offset(Rng& rng) const {
  return std::visit(
      Overloaded{
          [&](const CircularNormal& f) { return best_fisher_offset(f.kappa, rng); },
          [&](const WrappedCauchy& f) {
            return -std::log(f.rho) * std::tan(kPi * (uniform_open(rng) - 0.5));
          },
          [&](const WrappedNormal& f) {
            std::normal_distribution<double> normal(0.0, std::sqrt(-2.0 * std::log(f.rho)));
            return normal(rng);
          },
          [&](const WrappedStable& f) {
            const double scale = std::pow(-std::log(f.rho), 1.0 / f.alpha);
            return scale * symmetric_stable(f.alpha, rng);
          },
          [&](const auto&) { return inverse_cdf_->invert(uniform_open(rng)); },
      },
      family_);
}

Angle CircularDistribution::draw(Rng& rng) const {
  double shift = 0.0;
  if (mixture_) {
    if (!(uniform_open(rng) < epsilon_)) {
      shift = kPi;
    }
  }
  return Angle(nu_.radians() + shift + draw_offset(rng));
}

void CircularDistribution::sample_into(Rng& rng, std::vector<Angle>& out, std::size_t n) const {
  out.clear();
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(draw(rng));
  }
}

std::vector<Angle> CircularDistribution::sample(std::size_t n, std::uint64_t seed) const {
  if (n == 0) {
    throw InvalidParameter("sample: n must be >= 1");
  }
  Rng rng(seed);
  std::vector<Angle> out;
  sample_into(rng, out, n);
  return out;
}

// ---------------------------------------------------------------------------

ShapeReport classify_mixture(const CircularDistribution& dist) {
  constexpr int kGrid = 2000;
  ShapeReport report;
  std::array<double, kGrid + 1> z{};
  try {
    for (int k = 0; k <= kGrid; ++k) {
      z[k] = dist.zeta(-1.0 + 2.0 * k / kGrid);
    }
  } catch (const UndefinedZeta&) {
    report.modality = ShapeReport::Modality::Degenerate;
    return report;
  }
  report.zeta_min = *std::min_element(z.begin(), z.end());
  report.zeta_max = *std::max_element(z.begin(), z.end());
  report.zeta_increasing = true;
  for (int k = 0; k < kGrid; ++k) {
    if (z[k + 1] < z[k] - 1e-12 * std::abs(z[k])) {
      report.zeta_increasing = false;
    }
  }
  report.epsilon_lo = 1.0 / (1.0 + report.zeta_max);
  report.epsilon_hi = 1.0 / (1.0 + report.zeta_min);

  // The analysis is written for a base whose density rises towards its centre;
  // a decreasing base (e.g. cardioid with rho < 0) has its mode at nu + pi.
  const Angle nu = dist.location();
  const bool rising = dist.density_t_derivative(0.0) > 0.0;
  const Angle base_mode = rising ? nu : nu.rotated(kPi);
  const double eps = dist.is_mixture() ? dist.epsilon() : 1.0;
  const bool near = eps >= report.epsilon_hi;
  const bool far = eps <= report.epsilon_lo;
  if (near && far) {
    report.modality = ShapeReport::Modality::Degenerate;
    return report;
  }
  if (near) {
    report.modality = ShapeReport::Modality::Unimodal;
    report.modes = {base_mode};
    return report;
  }
  if (far) {
    report.modality = ShapeReport::Modality::Unimodal;
    report.modes = {base_mode.rotated(kPi)};
    return report;
  }

  report.modality = ShapeReport::Modality::Bimodal;
  report.modes = {base_mode, base_mode.rotated(kPi)};
  // Antimode offset w solves zeta(cos w) = (1 - eps) / eps.
  const double target = (1.0 - eps) / eps;
  int bracket = 0;
  for (int k = 0; k < kGrid; ++k) {
    if ((z[k] - target) * (z[k + 1] - target) <= 0.0) {
      bracket = k;
      break;
    }
  }
  double lo = -1.0 + 2.0 * bracket / kGrid;
  double hi = -1.0 + 2.0 * (bracket + 1) / kGrid;
  const bool increasing_here = z[bracket + 1] >= z[bracket];
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool below = dist.zeta(mid) < target;
    if (below == increasing_here) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double w = std::acos(std::clamp(0.5 * (lo + hi), -1.0, 1.0));
  report.antimodes = {base_mode.rotated(w), base_mode.rotated(-w)};
  return report;
}

// ---------------------------------------------------------------------------
// Sphere

double density_sphere(const FisherSphere& dist, double theta, Angle phi) {
  require(dist.kappa > 0.0, "Fisher: kappa must be > 0");
  require(theta >= 0.0 && theta <= kPi, "Fisher: colatitude must lie in [0, pi]");
  const double s = std::sin(theta);
  if (s <= 0.0) {
    return 0.0;
  }
  const double k = dist.kappa;
  // log sinh k, stable for large k.
  const double log_sinh = k + std::log1p(-std::exp(-2.0 * k)) - std::log(2.0);
  const double inner = s * std::sin(dist.nu1) * std::cos(phi.radians() - dist.nu2.radians()) +
                       std::cos(theta) * std::cos(dist.nu1);
  return std::exp(std::log(k * s) - std::log(4.0 * kPi) - log_sinh + k * inner);
}

std::vector<SpherePoint> sample_sphere(const FisherSphere& dist, std::size_t n,
                                       std::uint64_t seed) {
  require(dist.kappa > 0.0, "Fisher: kappa must be > 0");
  require(n >= 1, "sample_sphere: n must be >= 1");
  Rng rng(seed);
  const double k = dist.kappa;
  const double st = std::sin(dist.nu1), ct = std::cos(dist.nu1);
  const double sp = std::sin(dist.nu2.radians()), cp = std::cos(dist.nu2.radians());
  const std::array<double, 3> mu{st * cp, st * sp, ct};
  const std::array<double, 3> e1{ct * cp, ct * sp, -st};
  const std::array<double, 3> e2{-sp, cp, 0.0};
  std::vector<SpherePoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = uniform_open(rng);
    const double w = std::clamp(1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * k)) / k, -1.0, 1.0);
    const double v = kTwoPi * uniform_open(rng);
    const double r = std::sqrt(std::max(0.0, 1.0 - w * w));
    std::array<double, 3> x{};
    for (int j = 0; j < 3; ++j) {
      x[j] = w * mu[j] + r * (std::cos(v) * e1[j] + std::sin(v) * e2[j]);
    }
    const double theta = std::acos(std::clamp(x[2], -1.0, 1.0));
    const Angle phi = (x[0] == 0.0 && x[1] == 0.0) ? Angle{} : atan2pi(x[1], x[0]);
    out.push_back({theta, phi});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cylinder

std::vector<CylinderPoint> sample_cylinder(const MardiaSutton& dist, std::size_t n,
                                           std::uint64_t seed) {
  require(dist.kappa > 0.0, "Mardia-Sutton: kappa must be > 0");
  require(dist.rho >= 0.0 && dist.rho <= 1.0, "Mardia-Sutton: rho must be in [0, 1]");
  require(dist.sigma > 0.0, "Mardia-Sutton: sigma must be > 0");
  require(n >= 1, "sample_cylinder: n must be >= 1");
  Rng rng(seed);
  const CircularDistribution marginal = CircularDistribution::circular_normal(dist.nu0, dist.kappa);
  const double sd = dist.sigma * std::sqrt(1.0 - dist.rho * dist.rho);
  const double shift = std::cos(dist.nu0.radians() - dist.nu.radians());
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<CylinderPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Angle theta = marginal.draw(rng);
    const double mean = dist.mu + dist.sigma * dist.rho * std::sqrt(dist.kappa) *
                                      (std::cos(theta.radians() - dist.nu.radians()) - shift);
    out.push_back({mean + sd * normal(rng), theta});
  }
  return out;
}

}  // namespace circtrunc
