#ifndef CIRCTRUNC_STABLE_HPP
#define CIRCTRUNC_STABLE_HPP

namespace circtrunc {

// Standard symmetric alpha-stable law on the line, characteristic function
// exp(-|t|^alpha), alpha in (0, 1) u (1, 2).

/// Density g(x).
double stable_density(double x, double alpha);
/// Derivative g'(x).
double stable_density_derivative(double x, double alpha);
/// Upper tail P(X > x).
double stable_survival(double x, double alpha);

}  // namespace circtrunc

#endif  // CIRCTRUNC_STABLE_HPP
