#ifndef CIRCTRUNC_EQUIVARIANT_HPP
#define CIRCTRUNC_EQUIVARIANT_HPP

#include <span>
#include <string>
#include <vector>

#include "circtrunc/distributions.hpp"
#include "circtrunc/geometry.hpp"

namespace circtrunc {

/// Transformation groups acting on the circle.
struct GroupSpec {
  enum class Kind { Rotation, Torus, Reflection };
  Kind kind = Kind::Rotation;
  int k = 1;       // torus dimension
  double b = 0.0;  // reflection g(theta) = b - theta

  static GroupSpec rotation() { return {Kind::Rotation, 1, 0.0}; }
  static GroupSpec torus(int k) { return {Kind::Torus, k, 0.0}; }
  static GroupSpec reflection(double b) { return {Kind::Reflection, 1, b}; }
  /// "G1", "G2", "G3".
  static GroupSpec parse(const std::string& name, double b = 0.0, int k = 1);
};

/// g(theta) = (b - theta) mod 2pi.
Angle reflect(Angle theta, double b);

/// Unique admissible rotation-equivariant estimator:
/// atan2pi(int sin(a) L(a) da, int cos(a) L(a) da) with L(a) = prod f_a(theta_i).
/// Throws UndefinedDirection when both integrals vanish (relative to the
/// integral of L).
Angle admissible_equivariant(const CircularDistribution& dist, std::span<const Angle> sample);

/// a(nu) = tanh((log P_{b-nu} - log P_nu) / 2) tan(b/2 - nu), with
/// P_nu = prod f_nu(theta_i); the tanh form is the printed ratio evaluated in
/// log space. Throws ZeroDensity when a density vanishes at a sample point.
double reflection_a_general(const CircularDistribution& dist, std::span<const Angle> sample,
                            double b, double nu);

/// h_z(nu) = (b/2 + atan(a(nu))) mod 2pi.
double reflection_h(const CircularDistribution& dist, std::span<const Angle> sample, double b,
                    double nu);

struct ReducedSpace {
  Arc arc = Arc::full();
  int monotone_sign = 0;  // sign of a(0)
  Angle b_star;
};

/// Reduced estimation space for a circular normal sample with mean direction
/// theta_bar and resultant length r (length of the sum of unit vectors).
ReducedSpace reduced_space_cn(Angle theta_bar, double r, double kappa, double b);

/// Same construction for any family: b* = h_z(0) and the sign of a(0).
ReducedSpace reduced_space_general(const CircularDistribution& dist,
                                   std::span<const Angle> sample, double b);

struct HzValues {
  std::vector<Angle> values;
  /// a(nu) checked on 101 points of [0, b/2]; false when the differences change sign.
  bool monotone = true;
};

HzValues h_z_reflection(const CircularDistribution& dist, std::span<const Angle> sample, double b,
                        std::span<const double> nu_grid);

/// Projection of delta onto the reduced space, with the antipodal tie point
/// gamma = pi + b*/2 + b/4 sent to b/2.
Angle improve_equivariant(Angle delta, const ReducedSpace& rs, double b);

}  // namespace circtrunc

#endif  // CIRCTRUNC_EQUIVARIANT_HPP
