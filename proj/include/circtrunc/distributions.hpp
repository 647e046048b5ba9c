#ifndef CIRCTRUNC_DISTRIBUTIONS_HPP
#define CIRCTRUNC_DISTRIBUTIONS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "circtrunc/geometry.hpp"
#include "circtrunc/random.hpp"

namespace circtrunc {

namespace detail {
/// Tabulated inverse CDF of a symmetric density on [-pi, pi].
class InverseCdfTable;
}  // namespace detail

/// Symmetric base families, each centred at zero. Densities depend on the
/// offset x = theta - nu only through t = cos x.
struct CircularNormal {
  double kappa;
};
struct WrappedCauchy {
  double rho;
};
struct WrappedNormal {
  double rho;
};
struct Cardioid {
  double rho;
};
struct JonesPewsey {
  double kappa;
  double psi;
};
struct WrappedStable {
  double rho;
  double alpha;
};

using BaseFamily =
    std::variant<CircularNormal, WrappedCauchy, WrappedNormal, Cardioid, JonesPewsey, WrappedStable>;

/// A circular density family located at nu, optionally mixed with its own
/// antipodal copy: eps * f(. | nu) + (1 - eps) * f(. | nu + pi).
///
/// Objects are immutable once built; any tables needed for sampling are built
/// in the factory and shared between copies.
class CircularDistribution {
 public:
  static CircularDistribution circular_normal(Angle nu, double kappa);
  static CircularDistribution wrapped_cauchy(Angle nu, double rho);
  static CircularDistribution wrapped_normal(Angle nu, double rho);
  static CircularDistribution cardioid(Angle nu, double rho);
  static CircularDistribution jones_pewsey(Angle nu, double kappa, double psi);
  static CircularDistribution wrapped_stable(Angle nu, double rho, double alpha);
  static CircularDistribution antipodal_mixture(const CircularDistribution& base, double epsilon);

  [[nodiscard]] const BaseFamily& family() const noexcept { return family_; }
  [[nodiscard]] Angle location() const noexcept { return nu_; }
  [[nodiscard]] bool is_mixture() const noexcept { return mixture_; }
  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
  /// "circular_normal", "wrapped_cauchy", ...; mixtures report "antipodal_mixture".
  [[nodiscard]] std::string name() const;
  [[nodiscard]] std::string base_name() const;

  /// Same family and shape, relocated.
  [[nodiscard]] CircularDistribution with_location(Angle nu) const;
  /// The unmixed base family at the same location.
  [[nodiscard]] CircularDistribution base() const;

  [[nodiscard]] double density(Angle theta) const;
  [[nodiscard]] double log_density(Angle theta) const;

  /// Base density and its t-derivative as functions of t = cos(theta - nu).
  [[nodiscard]] double density_t(double t) const;
  [[nodiscard]] double density_t_derivative(double t) const;

  /// zeta(t) = f'(t) / f'(-t) of the base family. Throws UndefinedZeta when
  /// f'(-t) vanishes.
  [[nodiscard]] double zeta(double t) const;

  /// True for base families that are unimodal with their mode at nu.
  [[nodiscard]] bool unimodal_at_location() const;

  [[nodiscard]] Angle draw(Rng& rng) const;
  [[nodiscard]] std::vector<Angle> sample(std::size_t n, std::uint64_t seed) const;
  void sample_into(Rng& rng, std::vector<Angle>& out, std::size_t n) const;

 private:
  CircularDistribution(BaseFamily family, Angle nu) : family_(family), nu_(nu) {}
  [[nodiscard]] double base_density_offset(double x) const;
  [[nodiscard]] double base_log_density_offset(double x) const;
  [[nodiscard]] double draw_offset(Rng& rng) const;

  BaseFamily family_;
  Angle nu_;
  bool mixture_ = false;
  double epsilon_ = 1.0;
  // Normalizing constant (Jones-Pewsey) and log I0(kappa) (circular normal).
  double log_norm_ = 0.0;
  std::shared_ptr<const std::vector<double>> series_;  // theta-series coefficients
  // Wrapped normal / stable whose theta series is too long: the density is
  // summed over wraps of the line law with this scale instead.
  bool wrapped_sum_ = false;
  double line_scale_ = 0.0;
  [[nodiscard]] double wrapped_sum_density(double x) const;
  [[nodiscard]] double wrapped_sum_derivative(double x) const;
  [[nodiscard]] double wrapped_sum_log_density(double x) const;
  std::shared_ptr<const detail::InverseCdfTable> inverse_cdf_;
};

/// Modified Bessel function I0 in log form; stable for large kappa.
double log_bessel_i0(double kappa);
/// Mean resultant length A(kappa) = I1(kappa) / I0(kappa).
double bessel_ratio_a1(double kappa);

/// Wrapped normal density written through the Jacobi triple product,
/// f(t) = (1/2pi) prod_i (1 - rho^{2i}) (1 + 2 t rho^{2i-1} + rho^{4i-2}).
double wrapped_normal_product_density(double t, double rho);

// ---------------------------------------------------------------------------
// Shape of antipodal mixtures

struct ShapeReport {
  enum class Modality { Unimodal, Bimodal, Degenerate };

  double zeta_min = 0.0;
  double zeta_max = 0.0;
  Modality modality = Modality::Degenerate;
  std::vector<Angle> modes;
  std::vector<Angle> antimodes;
  /// Unimodal at nu + pi for eps <= epsilon_lo; unimodal at nu for eps >= epsilon_hi.
  double epsilon_lo = 0.0;
  double epsilon_hi = 0.0;
  bool zeta_increasing = false;
};

/// Evaluates zeta on a 2001-point grid of t in [-1, 1] and reports the
/// modality thresholds and the modality at the distribution's epsilon.
/// Plain (unmixed) distributions are treated as epsilon = 1.
ShapeReport classify_mixture(const CircularDistribution& dist);

// ---------------------------------------------------------------------------
// Sphere and cylinder models

/// Fisher distribution on the sphere in (colatitude, longitude) coordinates.
struct FisherSphere {
  double nu1;    // mean colatitude in [0, pi]
  Angle nu2;     // mean longitude
  double kappa;  // > 0
};

struct SpherePoint {
  double theta;  // colatitude in [0, pi]
  Angle phi;     // longitude
};

/// Density on [0, pi] x [0, 2pi) including the sin(theta) Jacobian.
double density_sphere(const FisherSphere& dist, double theta, Angle phi);
std::vector<SpherePoint> sample_sphere(const FisherSphere& dist, std::size_t n, std::uint64_t seed);

/// Mardia-Sutton cylinder model: theta ~ CN(nu0, kappa) and
/// X | theta ~ N(mu + sigma rho sqrt(kappa) {cos(theta - nu) - cos(nu0 - nu)}, sigma^2 (1 - rho^2)).
struct MardiaSutton {
  Angle nu0;
  double kappa;
  double mu;
  Angle nu;
  double rho;
  double sigma;
};

struct CylinderPoint {
  double x;
  Angle theta;
};

std::vector<CylinderPoint> sample_cylinder(const MardiaSutton& dist, std::size_t n,
                                           std::uint64_t seed);

}  // namespace circtrunc

#endif  // CIRCTRUNC_DISTRIBUTIONS_HPP
