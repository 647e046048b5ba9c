#ifndef CIRCTRUNC_RISK_HPP
#define CIRCTRUNC_RISK_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "circtrunc/distributions.hpp"
#include "circtrunc/geometry.hpp"

namespace circtrunc {

/// Circular loss 1 - cos(truth - estimate).
double loss(Angle truth, Angle estimate);

/// Everything an estimator may need beyond the sample.
struct EstimatorContext {
  std::optional<CircularDistribution> dist;
  std::optional<Arc> omega1;  // parameter restriction; closed I-arcs [lo, lo + b]
};

/// Maps a sample (and, for oracle rules, the true location) to an estimate.
using EstimatorFn = std::function<Angle(std::span<const Angle> sample, Angle truth)>;

/// Builds a named estimator:
///   mean, median, l1, spatial_median, wilcoxon, admissible,
///   restricted_mle, projected:<base>, reflection_improved[:<base>],
///   constant:<radians>, truth.
/// Throws ModelEstimatorMismatch when the rule does not fit the model and
/// InvalidParameter for unknown names.
EstimatorFn make_estimator(const std::string& name, const EstimatorContext& ctx);

struct ExperimentConfig {
  CircularDistribution dist = CircularDistribution::circular_normal(Angle(0.0), 1.0);
  std::vector<std::string> estimators;
  std::optional<Arc> omega1;
  std::vector<double> nu_grid;
  std::size_t n = 10;
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;

  /// Throws InvalidParameter when the config is unusable.
  void validate() const;
};

struct RiskPoint {
  double nu = 0.0;
  double risk = 0.0;
  double mc_se = 0.0;
  std::size_t replicates = 0;
  std::size_t redraws = 0;
};

struct RiskCurve {
  std::string estimator;
  std::vector<RiskPoint> points;
};

/// Worker count from CIRC_TRUNC_THREADS, else the hardware count.
unsigned default_threads();

/// Runs body(begin, end) over disjoint chunks of [0, count) on `threads`
/// workers. Chunks are fixed by `count` alone.
void parallel_chunks(std::size_t count, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& body);

/// Mean and standard error of a loss vector, summed in index order.
RiskPoint summarize(double nu, std::span<const double> losses, std::size_t redraws);

/// Risk of every configured estimator at every grid point. Replicate r at
/// grid index i draws its sample from the substream (seed, i, r, attempt);
/// all estimators see the same sample. An estimator with no defined value on
/// a sample gets fresh draws (attempt = 1, 2, ... up to 100) for itself only,
/// counted in `redraws`. Output is identical for any thread count.
std::vector<RiskCurve> run_experiment(const ExperimentConfig& cfg, unsigned threads = 0);

/// Risk of a single estimator at a single location.
RiskPoint estimate_risk(const ExperimentConfig& cfg, const std::string& estimator, double nu,
                        unsigned threads = 0);

// ---------------------------------------------------------------------------
// Comparison of two curves

enum class PointVerdict { Improves, Worsens, Inconclusive };
std::string to_string(PointVerdict v);

struct DominanceRow {
  double nu = 0.0;
  double risk_old = 0.0;
  double risk_new = 0.0;
  double diff = 0.0;  // old - new
  double se = 0.0;    // sqrt(se_old^2 + se_new^2)
  PointVerdict verdict = PointVerdict::Inconclusive;
  double relative_improvement_pct = 0.0;
};

struct DominanceReport {
  std::string old_name;
  std::string new_name;
  std::vector<DominanceRow> rows;
  /// "uniformly dominates", "uniformly dominated", "inconclusive" or "mixed".
  std::string verdict;
  double max_relative_improvement_pct = 0.0;
};

/// Pointwise comparison at 3 standard errors. "uniformly dominates" needs
/// no point where the new rule is worse and at least one where it is better.
/// Throws GridMismatch when the curves use different grids.
DominanceReport dominance_report(const RiskCurve& old_curve, const RiskCurve& new_curve);

// ---------------------------------------------------------------------------
// CSV

void write_risk_csv(std::ostream& out, std::span<const RiskCurve> curves);
std::vector<RiskCurve> read_risk_csv(std::istream& in);
void write_dominance(std::ostream& out, const DominanceReport& report);

/// Formats with 10 significant digits.
std::string format_number(double x);

}  // namespace circtrunc

#endif  // CIRCTRUNC_RISK_HPP
