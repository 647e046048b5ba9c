#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "circtrunc/equivariant.hpp"
#include "circtrunc/errors.hpp"
#include "circtrunc/estimators.hpp"
#include "circtrunc/io.hpp"
#include "circtrunc/projection.hpp"

namespace circtrunc::cli {

namespace {

constexpr std::uint64_t kReproSeed = 20240101;

/// Writes to --output when given, otherwise to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) {
        throw InvalidParameter("cannot write '" + path + "'");
      }
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

std::vector<std::vector<double>> read_rows(const std::string& path, std::size_t columns) {
  if (path == "-") {
    return read_numeric_csv(std::cin, columns);
  }
  std::ifstream in(path);
  if (!in) {
    throw InvalidParameter("cannot open '" + path + "'");
  }
  return read_numeric_csv(in, columns);
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

RiskCurve pick_curve(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidParameter("cannot open '" + path + "'");
  }
  std::vector<RiskCurve> curves = read_risk_csv(in);
  if (curves.empty()) {
    throw InvalidParameter("'" + path + "' holds no risk curve");
  }
  if (name.empty()) {
    if (curves.size() != 1) {
      throw InvalidParameter("'" + path + "' holds several curves; choose one by name");
    }
    return curves.front();
  }
  for (RiskCurve& c : curves) {
    if (c.estimator == name) {
      return c;
    }
  }
  throw InvalidParameter("no curve named '" + name + "' in '" + path + "'");
}

struct EstimateOptions {
  std::string input = "-";
  std::string estimator = "mean";
  std::string distribution;
  std::string arc;
  std::vector<double> kappas;
};

void run_estimate(const EstimateOptions& o, std::ostream& out) {
  std::optional<EstimateResult> full;
  Angle value;
  if (o.estimator == "torus_mle") {
    const auto rows = read_rows(o.input, 2);
    TorusSample ts;
    for (const auto& row : rows) {
      const auto comp = static_cast<std::size_t>(row[0]);
      if (row[0] < 0.0 || static_cast<double>(comp) != row[0]) {
        throw InvalidParameter("torus CSV: component must be a nonnegative integer");
      }
      if (ts.components.size() <= comp) {
        ts.components.resize(comp + 1);
      }
      ts.components[comp].emplace_back(row[1]);
    }
    ts.concentrations = o.kappas;
    value = mle_torus_common_mean(ts);
  } else if (o.estimator == "fisher_longitude") {
    std::vector<SpherePoint> pts;
    for (const auto& row : read_rows(o.input, 2)) {
      pts.push_back({row[0], Angle(row[1])});
    }
    value = mle_fisher_longitude(pts);
  } else if (o.estimator == "cylinder_mle") {
    std::vector<CylinderPoint> pts;
    for (const auto& row : read_rows(o.input, 2)) {
      pts.push_back({row[0], Angle(row[1])});
    }
    value = mle_cylinder_location(pts);
  } else {
    CircularSample sample;
    for (const auto& row : read_rows(o.input, 1)) {
      sample.emplace_back(row[0]);
    }
    if (o.estimator == "median") {
      full = circular_median(sample);
    } else if (o.estimator == "l1") {
      full = l1_estimator(sample);
    } else if (o.estimator == "spatial_median") {
      full = normalized_spatial_median(sample);
    } else if (o.estimator == "wilcoxon") {
      full = circular_wilcoxon(sample);
    } else {
      EstimatorContext ctx;
      if (!o.distribution.empty()) {
        ctx.dist = parse_distribution(load_json(o.distribution));
      }
      if (!o.arc.empty()) {
        ctx.omega1 = parse_arc_text(o.arc);
      }
      value = make_estimator(o.estimator, ctx)(sample, Angle{});
    }
    if (full) {
      value = full->value;
    }
  }
  out << "estimator,value,objective,iterations\n";
  out << o.estimator << ',' << format_number(value.radians()) << ',';
  if (full) {
    out << format_number(full->objective) << ',' << full->iterations;
  } else {
    out << ',';
  }
  out << '\n';
}

std::vector<RiskCurve> relabel(std::vector<RiskCurve> curves, const std::string& suffix) {
  for (RiskCurve& c : curves) {
    c.estimator += suffix;
  }
  return curves;
}

}  // namespace

std::vector<RiskCurve> repro_figure1(std::size_t replicates, std::uint64_t seed,
                                     std::size_t points, unsigned threads) {
  ExperimentConfig cfg;
  cfg.dist = CircularDistribution::antipodal_mixture(
      CircularDistribution::circular_normal(Angle(0.0), 1.0), 0.1);
  cfg.omega1 = Arc::I(0.0, kPi);
  cfg.estimators = {"mean", "projected:mean"};
  cfg.nu_grid = arc_grid(*cfg.omega1, points);
  cfg.n = 10;
  cfg.replicates = replicates;
  cfg.seed = seed;
  return run_experiment(cfg, threads);
}

std::vector<RiskCurve> repro_figure2(std::size_t replicates, std::uint64_t seed,
                                     std::size_t points, unsigned threads) {
  std::vector<RiskCurve> all;
  const std::vector<std::pair<double, std::string>> bs = {
      {kPi / 6.0, "pi/6"}, {kPi / 2.0, "pi/2"}, {5.0 * kPi / 6.0, "5pi/6"}, {kPi, "pi"}};
  for (const auto& [b, label] : bs) {
    ExperimentConfig cfg;
    cfg.dist = CircularDistribution::circular_normal(Angle(0.0), 1.0);
    cfg.omega1 = Arc::I(0.0, b);
    cfg.estimators = {"mean", "restricted_mle", "reflection_improved"};
    cfg.nu_grid = arc_grid(*cfg.omega1, points);
    cfg.n = 10;
    cfg.replicates = replicates;
    cfg.seed = seed;
    for (RiskCurve& c : relabel(run_experiment(cfg, threads), "@b=" + label)) {
      all.push_back(std::move(c));
    }
  }
  return all;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Estimation of restricted circular parameters", "circtrunc"};
  app.require_subcommand(1);

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "Estimate a location from a sample CSV");
  estimate->add_option("--input,-i", est.input, "Sample CSV ('-' for stdin)");
  estimate
      ->add_option("--estimator,-e", est.estimator,
                   "mean, median, l1, spatial_median, wilcoxon, admissible, restricted_mle, "
                   "projected:<base>, reflection_improved[:<base>], torus_mle, "
                   "fisher_longitude, cylinder_mle")
      ->capture_default_str();
  estimate->add_option("--distribution,-d", est.distribution, "Distribution JSON (file or text)");
  estimate->add_option("--arc", est.arc, "Parameter restriction lo:hi");
  estimate->add_option("--kappa", est.kappas, "Component concentrations for torus_mle")
      ->delimiter(',');

  double angle = 0.0;
  std::string arc_text;
  int digits = 4;
  auto* project_cmd = app.add_subcommand("project", "Project an angle onto a closed arc");
  project_cmd->add_option("--angle", angle, "Angle in radians")->required();
  project_cmd->add_option("--arc", arc_text, "Closed arc lo:hi (counterclockwise)")->required();
  project_cmd->add_option("--digits", digits, "Decimals printed")->capture_default_str();

  std::string dist_spec;
  std::size_t sample_n = 100;
  std::uint64_t sample_seed = 1;
  std::string output;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a sample as CSV");
  sample_cmd->add_option("--distribution,-d", dist_spec, "Distribution JSON (file or text)")
      ->required();
  sample_cmd->add_option("--n,-n", sample_n, "Sample size")->capture_default_str();
  sample_cmd->add_option("--seed", sample_seed, "Seed")->capture_default_str();
  sample_cmd->add_option("--output,-o", output, "Output file");

  std::string config_spec;
  unsigned threads = 0;
  auto* risk_cmd = app.add_subcommand("risk-curve", "Monte Carlo risk curves from a config");
  risk_cmd->add_option("--config,-c", config_spec, "Experiment JSON (file or text)")->required();
  risk_cmd->add_option("--output,-o", output, "Output file");
  risk_cmd->add_option("--threads", threads, "Worker threads (0: CIRC_TRUNC_THREADS or all)");

  std::string old_path, new_path, old_name, new_name;
  auto* dom_cmd = app.add_subcommand("dominance", "Compare two risk curves");
  dom_cmd->add_option("--old", old_path, "Risk CSV of the estimator being improved")->required();
  dom_cmd->add_option("--new", new_path, "Risk CSV of the candidate improvement")->required();
  dom_cmd->add_option("--old-name", old_name, "Curve to take from --old");
  dom_cmd->add_option("--new-name", new_name, "Curve to take from --new");
  dom_cmd->add_option("--output,-o", output, "Output file");

  std::string figure;
  std::size_t replicates = 100000;
  std::uint64_t repro_seed = kReproSeed;
  std::size_t points = 11;
  auto* repro_cmd = app.add_subcommand("repro", "Risk data behind the two figures");
  repro_cmd->add_option("figure", figure, "figure1 or figure2")
      ->required()
      ->check(CLI::IsMember({"figure1", "figure2"}));
  repro_cmd->add_option("--replicates", replicates, "Replicates per grid point")
      ->capture_default_str();
  repro_cmd->add_option("--seed", repro_seed, "Seed")->capture_default_str();
  repro_cmd->add_option("--points", points, "Grid points per curve")->capture_default_str();
  repro_cmd->add_option("--threads", threads, "Worker threads");
  repro_cmd->add_option("--output,-o", output, "Output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*estimate) {
      run_estimate(est, out);
    } else if (*project_cmd) {
      if (digits < 0 || digits > 17) {
        throw InvalidParameter("--digits must be in [0, 17]");
      }
      out << fixed(project(Angle(angle), parse_arc_text(arc_text)).radians(), digits) << '\n';
    } else if (*sample_cmd) {
      const CircularDistribution d = parse_distribution(load_json(dist_spec));
      Sink sink(output, out);
      sink.stream() << "theta\n";
      for (Angle a : d.sample(sample_n, sample_seed)) {
        sink.stream() << format_number(a.radians()) << '\n';
      }
    } else if (*risk_cmd) {
      const ExperimentConfig cfg = parse_experiment(load_json(config_spec));
      const std::vector<RiskCurve> curves = run_experiment(cfg, threads);
      Sink sink(output, out);
      write_risk_csv(sink.stream(), curves);
    } else if (*dom_cmd) {
      const DominanceReport rep =
          dominance_report(pick_curve(old_path, old_name), pick_curve(new_path, new_name));
      Sink sink(output, out);
      write_dominance(sink.stream(), rep);
    } else if (*repro_cmd) {
      const std::vector<RiskCurve> curves =
          figure == "figure1" ? repro_figure1(replicates, repro_seed, points, threads)
                              : repro_figure2(replicates, repro_seed, points, threads);
      Sink sink(output, out);
      write_risk_csv(sink.stream(), curves);
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}

}  // namespace circtrunc::cli
