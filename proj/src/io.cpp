#include "circtrunc/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "circtrunc/errors.hpp"

namespace circtrunc {

using nlohmann::json;

namespace {

double number(const json& obj, const char* key) {
  if (!obj.contains(key)) {
    throw InvalidParameter(std::string("missing field '") + key + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw InvalidParameter(std::string("field '") + key + "' must be a number");
  }
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback) {
  return obj.contains(key) ? number(obj, key) : fallback;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

CircularDistribution parse_distribution(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
    throw InvalidParameter("distribution: expected {\"family\": ..., \"params\": {...}}");
  }
  const std::string family = j.at("family").get<std::string>();
  const json params = j.contains("params") ? j.at("params") : json::object();
  if (!params.is_object()) {
    throw InvalidParameter("distribution: 'params' must be an object");
  }
  if (family == "antipodal_mixture") {
    if (!params.contains("base")) {
      throw InvalidParameter("antipodal_mixture: missing 'base'");
    }
    return CircularDistribution::antipodal_mixture(parse_distribution(params.at("base")),
                                                   number(params, "epsilon"));
  }
  const Angle nu(number_or(params, "nu", 0.0));
  if (family == "circular_normal") {
    return CircularDistribution::circular_normal(nu, number(params, "kappa"));
  }
  if (family == "wrapped_cauchy") {
    return CircularDistribution::wrapped_cauchy(nu, number(params, "rho"));
  }
  if (family == "wrapped_normal") {
    return CircularDistribution::wrapped_normal(nu, number(params, "rho"));
  }
  if (family == "cardioid") {
    return CircularDistribution::cardioid(nu, number(params, "rho"));
  }
  if (family == "jones_pewsey") {
    return CircularDistribution::jones_pewsey(nu, number(params, "kappa"), number(params, "psi"));
  }
  if (family == "wrapped_stable") {
    return CircularDistribution::wrapped_stable(nu, number(params, "rho"), number(params, "alpha"));
  }
  throw InvalidParameter("distribution: unknown family '" + family + "'");
}

json distribution_to_json(const CircularDistribution& d) {
  json params = std::visit(
      Overloaded{
          [](const CircularNormal& f) { return json{{"kappa", f.kappa}}; },
          [](const WrappedCauchy& f) { return json{{"rho", f.rho}}; },
          [](const WrappedNormal& f) { return json{{"rho", f.rho}}; },
          [](const Cardioid& f) { return json{{"rho", f.rho}}; },
          [](const JonesPewsey& f) { return json{{"kappa", f.kappa}, {"psi", f.psi}}; },
          [](const WrappedStable& f) { return json{{"rho", f.rho}, {"alpha", f.alpha}}; },
      },
      d.family());
  params["nu"] = d.location().radians();
  json base = {{"family", d.base_name()}, {"params", params}};
  if (!d.is_mixture()) {
    return base;
  }
  return {{"family", "antipodal_mixture"},
          {"params", {{"epsilon", d.epsilon()}, {"base", base}}}};
}

Arc parse_arc(const json& j) {
  if (!j.is_object()) {
    throw InvalidParameter("arc: expected {\"lo\": r, \"hi\": r}");
  }
  const double lo = number(j, "lo");
  const double hi = number(j, "hi");
  const bool lo_closed = j.value("lo_closed", true);
  const bool hi_closed = j.value("hi_closed", true);
  const Angle a(lo);
  const Angle b(hi);
  if (hi - lo >= kTwoPi) {
    return Arc::full();
  }
  if (a.radians() <= b.radians()) {
    return Arc::I(a.radians(), b.radians(), lo_closed, hi_closed);
  }
  // Runs from lo through 0 to hi.
  return Arc::J(b.radians(), a.radians(), hi_closed, lo_closed);
}

Arc parse_arc_text(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw InvalidParameter("arc: expected 'lo:hi', got '" + text + "'");
  }
  auto parse = [&text](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') {
      throw InvalidParameter("arc: cannot parse '" + text + "'");
    }
    return v;
  };
  return parse_arc(json{{"lo", parse(text.substr(0, colon))}, {"hi", parse(text.substr(colon + 1))}});
}

ProblemSpec parse_problem(const json& j) {
  if (!j.is_object()) {
    throw InvalidParameter("problem: expected a JSON object");
  }
  ProblemSpec p;
  if (j.contains("distribution")) {
    p.dist = parse_distribution(j.at("distribution"));
  }
  if (j.contains("b")) {
    p.b = number(j, "b");
  }
  if (j.contains("omega1")) {
    p.omega1 = parse_arc(j.at("omega1"));
  } else if (p.b) {
    p.omega1 = Arc::I(0.0, *p.b);
  }
  if (j.contains("estimator")) {
    p.estimator = j.at("estimator").get<std::string>();
  }
  if (j.contains("group")) {
    p.group = j.at("group").get<std::string>();
    if (p.group != "G1" && p.group != "G2" && p.group != "G3") {
      throw InvalidParameter("problem: group must be G1, G2 or G3");
    }
  }
  return p;
}

std::vector<double> arc_grid(const Arc& arc, std::size_t points) {
  if (points == 0) {
    throw InvalidParameter("grid: need at least one point");
  }
  std::vector<double> out;
  out.reserve(points);
  if (arc.is_full()) {
    for (std::size_t k = 0; k < points; ++k) {
      out.push_back(kTwoPi * static_cast<double>(k) / static_cast<double>(points));
    }
    return out;
  }
  const double start = arc.start().radians();
  const double len = arc.length();
  if (points == 1) {
    out.push_back(reduce_angle(start + len / 2.0));
    return out;
  }
  for (std::size_t k = 0; k < points; ++k) {
    const double x = start + len * static_cast<double>(k) / static_cast<double>(points - 1);
    // Keep the closing endpoint exact instead of letting it wrap or drift.
    out.push_back(k + 1 == points ? arc.end().radians() : reduce_angle(x));
  }
  return out;
}

ExperimentConfig parse_experiment(const json& j) {
  const ProblemSpec p = parse_problem(j);
  ExperimentConfig cfg;
  cfg.dist = p.dist;
  cfg.omega1 = p.omega1;
  if (j.contains("estimators")) {
    cfg.estimators = j.at("estimators").get<std::vector<std::string>>();
  } else if (!p.estimator.empty()) {
    cfg.estimators = {p.estimator};
  }
  cfg.n = static_cast<std::size_t>(number_or(j, "n", 10.0));
  cfg.replicates = static_cast<std::size_t>(number_or(j, "replicates", 1000.0));
  if (j.contains("seed")) {
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("nu_grid")) {
    cfg.nu_grid = j.at("nu_grid").get<std::vector<double>>();
  } else {
    const auto points = static_cast<std::size_t>(number_or(j, "nu_points", 11.0));
    cfg.nu_grid = arc_grid(cfg.omega1 ? cfg.omega1->closure() : Arc::full(), points);
  }
  cfg.validate();
  return cfg;
}

json load_json(const std::string& path_or_text) {
  try {
    if (!path_or_text.empty() && path_or_text.front() == '{') {
      return json::parse(path_or_text);
    }
    std::ifstream in(path_or_text);
    if (!in) {
      throw InvalidParameter("cannot open '" + path_or_text + "'");
    }
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("invalid JSON: ") + e.what());
  }
}

std::vector<std::vector<double>> read_numeric_csv(std::istream& in, std::size_t columns) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || line.front() == '#') {
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    bool numeric = true;
    while (std::getline(ss, field, ',')) {
      char* end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (field.empty() || end == field.c_str()) {
        numeric = false;
        break;
      }
      while (*end == ' ' || *end == '\t') {
        ++end;
      }
      if (*end != '\0') {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw InvalidParameter("CSV line " + std::to_string(line_no) + ": non-numeric field");
    }
    first = false;
    if (row.size() != columns) {
      throw InvalidParameter("CSV line " + std::to_string(line_no) + ": expected " +
                             std::to_string(columns) + " fields, got " +
                             std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace circtrunc
