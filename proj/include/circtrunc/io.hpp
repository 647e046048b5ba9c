#ifndef CIRCTRUNC_IO_HPP
#define CIRCTRUNC_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "circtrunc/distributions.hpp"
#include "circtrunc/estimators.hpp"
#include "circtrunc/geometry.hpp"
#include "circtrunc/risk.hpp"

namespace circtrunc {

/// {"family": "circular_normal", "params": {"nu": 0, "kappa": 1}}. Families:
///   circular_normal {nu, kappa}      wrapped_cauchy {nu, rho}
///   wrapped_normal {nu, rho}         cardioid {nu, rho}
///   jones_pewsey {nu, kappa, psi}    wrapped_stable {nu, rho, alpha}
///   antipodal_mixture {epsilon, base: <distribution>}
/// "nu" defaults to 0.
CircularDistribution parse_distribution(const nlohmann::json& j);
nlohmann::json distribution_to_json(const CircularDistribution& d);

/// {"lo": r, "hi": r}: the closed arc running counterclockwise from lo to hi.
/// Optional "lo_closed"/"hi_closed" flags default to true.
Arc parse_arc(const nlohmann::json& j);
/// "lo:hi" with the same meaning.
Arc parse_arc_text(const std::string& text);

struct ProblemSpec {
  CircularDistribution dist = CircularDistribution::circular_normal(Angle(0.0), 1.0);
  std::optional<Arc> omega1;
  std::string estimator;
  std::string group = "G1";
  std::optional<double> b;
};

/// {"distribution", "omega1", "estimator", "group", "b"}; "b" alone means omega1 = [0, b].
ProblemSpec parse_problem(const nlohmann::json& j);

/// Problem keys plus "estimators" (list), "n", "replicates", "seed", and
/// either "nu_grid" (list) or "nu_points" (count of equally spaced points
/// spanning omega1, or [0, 2pi) without it).
ExperimentConfig parse_experiment(const nlohmann::json& j);

/// Equally spaced points from the start to the end of a closed arc
/// (or over [0, 2pi) for the full circle).
std::vector<double> arc_grid(const Arc& arc, std::size_t points);

/// Reads a JSON document from a file, or parses the text itself when it
/// starts with '{'.
nlohmann::json load_json(const std::string& path_or_text);

/// Numeric CSV reader: skips blank lines, '#' comments and a non-numeric
/// header line; every other row must have `columns` numeric fields.
std::vector<std::vector<double>> read_numeric_csv(std::istream& in, std::size_t columns);

}  // namespace circtrunc

#endif  // CIRCTRUNC_IO_HPP
