#include "circtrunc/risk.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "circtrunc/equivariant.hpp"
#include "circtrunc/errors.hpp"
#include "circtrunc/estimators.hpp"
#include "circtrunc/projection.hpp"
#include "circtrunc/random.hpp"

namespace circtrunc {

namespace {

constexpr int kMaxRedraws = 100;
constexpr double kSeThreshold = 3.0;

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

const Arc& require_omega(const EstimatorContext& ctx, const std::string& name) {
  if (!ctx.omega1) {
    throw ModelEstimatorMismatch("estimator '" + name + "' needs a parameter restriction (omega1)");
  }
  return *ctx.omega1;
}

const CircularDistribution& require_dist(const EstimatorContext& ctx, const std::string& name) {
  if (!ctx.dist) {
    throw ModelEstimatorMismatch("estimator '" + name + "' needs a distribution");
  }
  return *ctx.dist;
}

const CircularNormal* plain_cn(const CircularDistribution& d) {
  if (d.is_mixture()) {
    return nullptr;
  }
  return std::get_if<CircularNormal>(&d.family());
}

std::vector<Angle> shifted(std::span<const Angle> sample, double by) {
  std::vector<Angle> out;
  out.reserve(sample.size());
  for (Angle a : sample) {
    out.push_back(a.rotated(by));
  }
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw InvalidParameter("CSV: cannot parse " + what + " '" + s + "'");
  }
  return v;
}

}  // namespace

double loss(Angle truth, Angle estimate) {
  return 1.0 - std::cos(truth.radians() - estimate.radians());
}

EstimatorFn make_estimator(const std::string& name, const EstimatorContext& ctx) {
  if (name == "mean") {
    return [](std::span<const Angle> s, Angle) { return mean_direction(s); };
  }
  if (name == "median") {
    return [](std::span<const Angle> s, Angle) { return circular_median(s).value; };
  }
  if (name == "l1") {
    return [](std::span<const Angle> s, Angle) { return l1_estimator(s).value; };
  }
  if (name == "spatial_median") {
    return [](std::span<const Angle> s, Angle) { return normalized_spatial_median(s).value; };
  }
  if (name == "wilcoxon") {
    return [](std::span<const Angle> s, Angle) { return circular_wilcoxon(s).value; };
  }
  if (name == "truth") {
    return [](std::span<const Angle>, Angle truth) { return truth; };
  }
  if (starts_with(name, "constant:")) {
    const std::string arg = name.substr(9);
    const Angle c(parse_double(arg, "constant"));
    return [c](std::span<const Angle>, Angle) { return c; };
  }
  if (name == "admissible") {
    const CircularDistribution dist = require_dist(ctx, name);
    return [dist](std::span<const Angle> s, Angle) { return admissible_equivariant(dist, s); };
  }
  if (name == "restricted_mle") {
    const CircularDistribution& dist = require_dist(ctx, name);
    if (plain_cn(dist) == nullptr) {
      throw ModelEstimatorMismatch("restricted_mle is defined for the circular normal model only");
    }
    // Likelihood maximized over the restriction itself, which need not be convex.
    const Arc omega = require_omega(ctx, name).closure();
    if (omega.is_full()) {
      return [](std::span<const Angle> s, Angle) { return mean_direction(s); };
    }
    const double start = omega.start().radians();
    const double b = omega.length();
    return [start, b](std::span<const Angle> s, Angle) {
      // Work in the frame where the restriction is [0, b].
      const Angle bar = mean_direction(s).rotated(-start);
      return restricted_mle_cn(bar, b).rotated(start);
    };
  }
  if (starts_with(name, "projected:")) {
    const EstimatorFn base = make_estimator(name.substr(10), ctx);
    const Arc omega = convex_closure(require_omega(ctx, name));
    return [base, omega](std::span<const Angle> s, Angle truth) {
      return project(base(s, truth), omega);
    };
  }
  if (name == "reflection_improved" || starts_with(name, "reflection_improved:")) {
    const std::string base_name = name.size() > 19 ? name.substr(20) : std::string("mean");
    const EstimatorFn base = make_estimator(base_name, ctx);
    const CircularDistribution dist = require_dist(ctx, name);
    const Arc omega = convex_closure(require_omega(ctx, name));
    if (omega.is_full() || omega.length() > kPi + 1e-12 || omega.length() <= 0.0) {
      throw ModelEstimatorMismatch("reflection_improved needs a restriction of length in (0, pi]");
    }
    const double start = omega.start().radians();
    const double b = std::min(omega.length(), kPi);
    const CircularNormal* cn = plain_cn(dist);
    const double kappa = cn != nullptr ? cn->kappa : 0.0;
    return [base, dist, start, b, kappa](std::span<const Angle> s, Angle truth) {
      const std::vector<Angle> local = shifted(s, -start);
      ReducedSpace rs;
      if (kappa > 0.0) {
        const Resultant r = resultant(local);
        rs = reduced_space_cn(mean_direction(local), r.length(), kappa, b);
      } else {
        rs = reduced_space_general(dist, local, b);
      }
      const Angle delta = base(s, truth).rotated(-start);
      return improve_equivariant(delta, rs, b).rotated(start);
    };
  }
  throw InvalidParameter("unknown estimator '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (estimators.empty()) {
    throw InvalidParameter("experiment: no estimators");
  }
  if (nu_grid.empty()) {
    throw InvalidParameter("experiment: empty nu grid");
  }
  if (n < 1) {
    throw InvalidParameter("experiment: n must be >= 1");
  }
  if (replicates < 1) {
    throw InvalidParameter("experiment: replicates must be >= 1");
  }
  if (omega1) {
    const Arc closed = omega1->closure();
    for (double nu : nu_grid) {
      if (!closed.contains(Angle(nu))) {
        throw InvalidParameter("experiment: nu = " + format_number(nu) +
                               " lies outside omega1 " + omega1->to_string());
      }
    }
  }
}

unsigned default_threads() {
  if (const char* env = std::getenv("CIRC_TRUNC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) {
      return static_cast<unsigned>(v);
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

void parallel_chunks(std::size_t count, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& body) {
  if (threads == 0) {
    threads = default_threads();
  }
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (workers == 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) {
      break;
    }
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

RiskPoint summarize(double nu, std::span<const double> losses, std::size_t redraws) {
  RiskPoint p;
  p.nu = nu;
  p.replicates = losses.size();
  p.redraws = redraws;
  if (losses.empty()) {
    return p;
  }
  double sum = 0.0;
  for (double l : losses) {
    sum += l;
  }
  const double mean = sum / static_cast<double>(losses.size());
  double ss = 0.0;
  for (double l : losses) {
    ss += (l - mean) * (l - mean);
  }
  p.risk = mean;
  if (losses.size() > 1) {
    const double sd = std::sqrt(ss / static_cast<double>(losses.size() - 1));
    p.mc_se = sd / std::sqrt(static_cast<double>(losses.size()));
  }
  return p;
}

std::vector<RiskCurve> run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  const EstimatorContext ctx{cfg.dist, cfg.omega1};
  std::vector<EstimatorFn> rules;
  rules.reserve(cfg.estimators.size());
  for (const std::string& name : cfg.estimators) {
    rules.push_back(make_estimator(name, ctx));
  }
  const std::size_t m = rules.size();
  const std::size_t reps = cfg.replicates;

  std::vector<RiskCurve> curves(m);
  for (std::size_t e = 0; e < m; ++e) {
    curves[e].estimator = cfg.estimators[e];
  }
  std::vector<double> losses(m * reps);
  std::vector<int> redraws(m * reps);

  for (std::size_t i = 0; i < cfg.nu_grid.size(); ++i) {
    const Angle truth(cfg.nu_grid[i]);
    const CircularDistribution located = cfg.dist.with_location(truth);
    parallel_chunks(reps, threads, [&](std::size_t begin, std::size_t end) {
      std::vector<Angle> sample;
      std::vector<Angle> retry;
      for (std::size_t r = begin; r < end; ++r) {
        Rng rng = make_rng(cfg.seed, {i, r, 0});
        located.sample_into(rng, sample, cfg.n);
        for (std::size_t e = 0; e < m; ++e) {
          int attempts = 0;
          std::optional<Angle> est;
          try {
            est = rules[e](sample, truth);
          } catch (const UndefinedDirection&) {
          } catch (const DegenerateSpatialMedian&) {
          }
          while (!est) {
            if (++attempts > kMaxRedraws) {
              throw NumericError("estimator '" + cfg.estimators[e] + "' undefined on " +
                                 std::to_string(kMaxRedraws) + " consecutive redraws");
            }
            Rng again = make_rng(cfg.seed, {i, r, static_cast<std::uint64_t>(attempts)});
            located.sample_into(again, retry, cfg.n);
            try {
              est = rules[e](retry, truth);
            } catch (const UndefinedDirection&) {
            } catch (const DegenerateSpatialMedian&) {
            }
          }
          losses[e * reps + r] = loss(truth, *est);
          redraws[e * reps + r] = attempts;
        }
      }
    });
    for (std::size_t e = 0; e < m; ++e) {
      std::size_t total_redraws = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        total_redraws += static_cast<std::size_t>(redraws[e * reps + r]);
      }
      curves[e].points.push_back(summarize(
          cfg.nu_grid[i], std::span<const double>(losses.data() + e * reps, reps), total_redraws));
    }
  }
  return curves;
}

RiskPoint estimate_risk(const ExperimentConfig& cfg, const std::string& estimator, double nu,
                        unsigned threads) {
  ExperimentConfig one = cfg;
  one.estimators = {estimator};
  one.nu_grid = {nu};
  return run_experiment(one, threads).front().points.front();
}

// ---------------------------------------------------------------------------

std::string to_string(PointVerdict v) {
  switch (v) {
    case PointVerdict::Improves:
      return "improves";
    case PointVerdict::Worsens:
      return "worsens";
    case PointVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

DominanceReport dominance_report(const RiskCurve& old_curve, const RiskCurve& new_curve) {
  if (old_curve.points.size() != new_curve.points.size()) {
    throw GridMismatch("dominance: curves have " + std::to_string(old_curve.points.size()) +
                       " and " + std::to_string(new_curve.points.size()) + " points");
  }
  DominanceReport rep;
  rep.old_name = old_curve.estimator;
  rep.new_name = new_curve.estimator;
  bool any_better = false;
  bool any_worse = false;
  for (std::size_t k = 0; k < old_curve.points.size(); ++k) {
    const RiskPoint& a = old_curve.points[k];
    const RiskPoint& b = new_curve.points[k];
    if (std::abs(a.nu - b.nu) > 1e-9) {
      throw GridMismatch("dominance: grids differ at point " + std::to_string(k));
    }
    DominanceRow row;
    row.nu = a.nu;
    row.risk_old = a.risk;
    row.risk_new = b.risk;
    row.diff = a.risk - b.risk;
    row.se = std::hypot(a.mc_se, b.mc_se);
    const double margin = kSeThreshold * row.se;
    if (row.diff > margin) {
      row.verdict = PointVerdict::Improves;
      any_better = true;
    } else if (row.diff < -margin) {
      row.verdict = PointVerdict::Worsens;
      any_worse = true;
    }
    row.relative_improvement_pct = a.risk > 0.0 ? 100.0 * row.diff / a.risk : 0.0;
    rep.max_relative_improvement_pct =
        k == 0 ? row.relative_improvement_pct
               : std::max(rep.max_relative_improvement_pct, row.relative_improvement_pct);
    rep.rows.push_back(row);
  }
  if (any_better && any_worse) {
    rep.verdict = "mixed";
  } else if (any_better) {
    rep.verdict = "uniformly dominates";
  } else if (any_worse) {
    rep.verdict = "uniformly dominated";
  } else {
    rep.verdict = "inconclusive";
  }
  return rep;
}

// ---------------------------------------------------------------------------

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

void write_risk_csv(std::ostream& out, std::span<const RiskCurve> curves) {
  out << "estimator,nu,risk,mc_se,replicates,redraws\n";
  for (const RiskCurve& c : curves) {
    for (const RiskPoint& p : c.points) {
      out << c.estimator << ',' << format_number(p.nu) << ',' << format_number(p.risk) << ','
          << format_number(p.mc_se) << ',' << p.replicates << ',' << p.redraws << '\n';
    }
  }
}

std::vector<RiskCurve> read_risk_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw InvalidParameter("risk CSV: empty input");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != "estimator,nu,risk,mc_se,replicates,redraws") {
    throw InvalidParameter("risk CSV: unexpected header '" + line + "'");
  }
  std::vector<RiskCurve> curves;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 6) {
      throw InvalidParameter("risk CSV: expected 6 fields in '" + line + "'");
    }
    RiskPoint p;
    p.nu = parse_double(f[1], "nu");
    p.risk = parse_double(f[2], "risk");
    p.mc_se = parse_double(f[3], "mc_se");
    p.replicates = static_cast<std::size_t>(parse_double(f[4], "replicates"));
    p.redraws = static_cast<std::size_t>(parse_double(f[5], "redraws"));
    if (curves.empty() || curves.back().estimator != f[0]) {
      curves.push_back({f[0], {}});
    }
    curves.back().points.push_back(p);
  }
  return curves;
}

void write_dominance(std::ostream& out, const DominanceReport& report) {
  out << "old,new,verdict,max_relative_improvement_pct\n";
  out << report.old_name << ',' << report.new_name << ',' << report.verdict << ','
      << format_number(report.max_relative_improvement_pct) << "\n\n";
  out << "nu,risk_old,risk_new,diff,se,verdict,relative_improvement_pct\n";
  for (const DominanceRow& r : report.rows) {
    out << format_number(r.nu) << ',' << format_number(r.risk_old) << ','
        << format_number(r.risk_new) << ',' << format_number(r.diff) << ','
        << format_number(r.se) << ',' << to_string(r.verdict) << ','
        << format_number(r.relative_improvement_pct) << '\n';
  }
}

}  // namespace circtrunc
