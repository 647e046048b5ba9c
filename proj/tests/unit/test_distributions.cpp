#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "circtrunc/distributions.hpp"
#include "circtrunc/errors.hpp"
#include "oracles.hpp"

using namespace circtrunc;

namespace {

// Independent closed forms for the base densities at offset x from the location.
double cn_density(double x, double kappa) {
  static thread_local double cached_kappa = -1.0, cached_norm = 0.0;
  if (kappa != cached_kappa) {
    cached_kappa = kappa;
    cached_norm = oracle::kTwoPi * oracle::bessel_i0_series(kappa);
  }
  return std::exp(kappa * std::cos(x)) / cached_norm;
}
double wc_density(double x, double rho) {
  return (1 - rho * rho) / (oracle::kTwoPi * (1 + rho * rho - 2 * rho * std::cos(x)));
}
double theta_series_density(double x, double rho, double alpha) {
  double sum = 1.0;
  for (int i = 1; i < 10000; ++i) {
    const double term = std::pow(rho, std::pow(static_cast<double>(i), alpha));
    if (term < 1e-18) break;
    sum += 2.0 * term * std::cos(i * x);
  }
  return sum / oracle::kTwoPi;
}
// Term-wise integral of the theta series from 0 to x.
double theta_series_cdf(double x, double rho, double alpha) {
  double sum = x;
  for (int i = 1; i < 10000; ++i) {
    const double term = std::pow(rho, std::pow(static_cast<double>(i), alpha));
    if (term < 1e-18) break;
    sum += 2.0 * term * std::sin(i * x) / i;
  }
  return sum / oracle::kTwoPi;
}
double cardioid_density(double x, double rho) { return (1 + 2 * rho * std::cos(x)) / oracle::kTwoPi; }
double jp_unnormalized(double x, double kappa, double psi) {
  return std::pow(1.0 + std::tanh(kappa * psi) * std::cos(x), 1.0 / psi);
}

struct Case {
  std::string label;
  CircularDistribution dist;
  std::function<double(double)> offset_density;
  // CDF of the offset from -pi, when a term-wise form is available.
  std::function<double(double)> offset_cdf = nullptr;
};

std::vector<Case> cases(double nu) {
  const Angle at(nu);
  const double jp_mass =
      oracle::integrate_circle([](double x) { return jp_unnormalized(x, 2.0, 0.5); });
  const double jp_mass_neg =
      oracle::integrate_circle([](double x) { return jp_unnormalized(x, 1.5, -0.7); });
  return {
      {"cn k=1", CircularDistribution::circular_normal(at, 1.0),
       [](double x) { return cn_density(x, 1.0); }},
      {"cn k=20", CircularDistribution::circular_normal(at, 20.0),
       [](double x) { return cn_density(x, 20.0); }},
      {"wc", CircularDistribution::wrapped_cauchy(at, 0.6),
       [](double x) { return wc_density(x, 0.6); }},
      {"wn", CircularDistribution::wrapped_normal(at, 0.7),
       [](double x) { return theta_series_density(x, 0.7, 2.0); },
       [](double x) { return theta_series_cdf(x, 0.7, 2.0) - theta_series_cdf(-oracle::kPi, 0.7, 2.0); }},
      {"cardioid", CircularDistribution::cardioid(at, 0.3),
       [](double x) { return cardioid_density(x, 0.3); }},
      {"jp", CircularDistribution::jones_pewsey(at, 2.0, 0.5),
       [=](double x) { return jp_unnormalized(x, 2.0, 0.5) / jp_mass; }},
      {"jp psi<0", CircularDistribution::jones_pewsey(at, 1.5, -0.7),
       [=](double x) { return jp_unnormalized(x, 1.5, -0.7) / jp_mass_neg; }},
      {"ws a=1.5", CircularDistribution::wrapped_stable(at, 0.6, 1.5),
       [](double x) { return theta_series_density(x, 0.6, 1.5); },
       [](double x) { return theta_series_cdf(x, 0.6, 1.5) - theta_series_cdf(-oracle::kPi, 0.6, 1.5); }},
      {"ws a=0.5", CircularDistribution::wrapped_stable(at, 0.3, 0.5),
       [](double x) { return theta_series_density(x, 0.3, 0.5); },
       [](double x) { return theta_series_cdf(x, 0.3, 0.5) - theta_series_cdf(-oracle::kPi, 0.3, 0.5); }},
  };
}

}  // namespace

TEST_CASE("density examples") {
  CHECK(CircularDistribution::cardioid(Angle(1.0), 0.0).density(Angle(2.5)) ==
        doctest::Approx(1.0 / oracle::kTwoPi));
  const double cn = CircularDistribution::circular_normal(Angle(0.0), 1.0).density(Angle(0.0));
  CHECK(cn == doctest::Approx(std::exp(1.0) / (oracle::kTwoPi * oracle::bessel_i0_series(1.0))));
  CHECK(cn == doctest::Approx(0.3417).epsilon(1e-3));
  CHECK(CircularDistribution::wrapped_cauchy(Angle(0.0), 0.5).density(Angle(0.0)) ==
        doctest::Approx(3.0 / oracle::kTwoPi));
}

TEST_CASE("densities match independent closed forms") {
  for (double nu : {0.0, 2.0, 5.5}) {
    for (const auto& c : cases(nu)) {
      CAPTURE(c.label);
      for (int k = 0; k < 97; ++k) {
        const double theta = oracle::kTwoPi * k / 97.0;
        const double expect = c.offset_density(theta - nu);
        CHECK(c.dist.density(Angle(theta)) == doctest::Approx(expect).epsilon(1e-9));
        CHECK(c.dist.log_density(Angle(theta)) ==
              doctest::Approx(std::log(expect)).epsilon(1e-9));
        CHECK(c.dist.density_t(std::cos(theta - nu)) == doctest::Approx(expect).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("densities integrate to one") {
  for (const auto& c : cases(1.0)) {
    CAPTURE(c.label);
    const double mass = oracle::integrate_circle([&](double x) { return c.dist.density(Angle(x)); });
    CHECK(std::abs(mass - 1.0) < 1e-6);
  }
  const auto mix = CircularDistribution::antipodal_mixture(
      CircularDistribution::circular_normal(Angle(0.3), 4.0), 0.2);
  CHECK(std::abs(oracle::integrate_circle([&](double x) { return mix.density(Angle(x)); }) - 1.0) <
        1e-6);
}

TEST_CASE("densities are symmetric about the location") {
  for (const auto& c : cases(0.8)) {
    CAPTURE(c.label);
    for (int k = 1; k < 50; ++k) {
      const double x = oracle::kPi * k / 50.0;
      const double a = c.dist.density(Angle(0.8 + x));
      const double b = c.dist.density(Angle(0.8 - x));
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, a));
    }
  }
}

TEST_CASE("wrapped stable at alpha 2 is the wrapped normal") {
  for (double rho : {0.1, 0.5, 0.9}) {
    const auto ws = CircularDistribution::wrapped_stable(Angle(1.0), rho, 2.0);
    const auto wn = CircularDistribution::wrapped_normal(Angle(1.0), rho);
    for (int k = 0; k < 200; ++k) {
      const Angle t(oracle::kTwoPi * k / 200.0);
      CHECK(std::abs(ws.density(t) - wn.density(t)) < 1e-9);
    }
  }
}

TEST_CASE("wrapped normal product form") {
  for (double rho : {0.2, 0.6, 0.95}) {
    for (int k = 0; k <= 100; ++k) {
      const double t = -1.0 + 2.0 * k / 100.0;
      const double series = theta_series_density(std::acos(t), rho, 2.0);
      CHECK(std::abs(wrapped_normal_product_density(t, rho) - series) < 1e-9);
    }
  }
}

TEST_CASE("Bessel helpers") {
  for (double k : {1e-6, 0.01, 0.5, 1.0, 5.0, 30.0, 80.0}) {
    CHECK(log_bessel_i0(k) == doctest::Approx(std::log(oracle::bessel_i0_series(k))).epsilon(1e-12));
    CHECK(bessel_ratio_a1(k) ==
          doctest::Approx(oracle::bessel_i1_series(k) / oracle::bessel_i0_series(k)).epsilon(1e-10));
  }
  // Large kappa against the integral form I0(k) = (1/pi) int_0^pi exp(k cos t) dt.
  for (double k : {500.0, 800.0, 5000.0}) {
    const double scaled =
        oracle::integrate([&](double t) { return std::exp(k * (std::cos(t) - 1.0)); }, 0.0, oracle::kPi,
                          1e-14) /
        oracle::kPi;
    CHECK(log_bessel_i0(k) == doctest::Approx(k + std::log(scaled)).epsilon(1e-10));
  }
}

TEST_CASE("zeta closed forms") {
  for (double kappa : {0.5, 1.0, 5.0}) {
    const auto cn = CircularDistribution::circular_normal(Angle(0.0), kappa);
    for (int k = 0; k <= 40; ++k) {
      const double t = -1.0 + k / 20.0;
      CHECK(std::abs(cn.zeta(t) - std::exp(2 * kappa * t)) <= 1e-10 * std::exp(2 * kappa * t));
    }
  }
  const double rho = 0.4;
  const auto wc = CircularDistribution::wrapped_cauchy(Angle(0.0), rho);
  const auto jp = CircularDistribution::jones_pewsey(Angle(0.0), 1.0, 0.5);
  const double tau = std::tanh(0.5);
  for (int k = 0; k <= 20; ++k) {
    const double t = -1.0 + k / 10.0;
    const double r = (1 + rho * rho + 2 * rho * t) / (1 + rho * rho - 2 * rho * t);
    CHECK(wc.zeta(t) == doctest::Approx(r * r).epsilon(1e-10));
    CHECK(jp.zeta(t) == doctest::Approx((1 + tau * t) / (1 - tau * t)).epsilon(1e-10));
    CHECK(CircularDistribution::cardioid(Angle(0.0), 0.3).zeta(t) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS((void)CircularDistribution::cardioid(Angle(0.0), 0.0).zeta(0.2), UndefinedZeta);
  CHECK_THROWS_AS((void)wc.zeta(1.5), InvalidParameter);
}

TEST_CASE("zeta of series families by finite differences") {
  // Central differences of the independent series density in t = cos x.
  const auto check = [](const CircularDistribution& d, double rho, double alpha) {
    const auto f = [&](double t) { return theta_series_density(std::acos(t), rho, alpha); };
    for (int k = 1; k < 20; ++k) {
      const double t = -0.95 + 1.9 * k / 20.0;
      const double h = 1e-5;
      const double num = (f(t + h) - f(t - h));
      const double den = (f(-t + h) - f(-t - h));
      CHECK(d.zeta(t) == doctest::Approx(num / den).epsilon(1e-5));
    }
  };
  check(CircularDistribution::wrapped_normal(Angle(0.0), 0.5), 0.5, 2.0);
  check(CircularDistribution::wrapped_stable(Angle(0.0), 0.5, 1.5), 0.5, 1.5);
}

TEST_CASE("wrapped normal zeta is nondecreasing") {
  for (double rho : {0.2, 0.5, 0.8}) {
    const auto wn = CircularDistribution::wrapped_normal(Angle(0.0), rho);
    double prev = wn.zeta(-1.0);
    for (int k = 1; k <= 400; ++k) {
      const double z = wn.zeta(-1.0 + k / 200.0);
      CHECK(z >= prev - 1e-12 * prev);
      prev = z;
    }
  }
}

TEST_CASE("mixture shape classification") {
  const auto base = CircularDistribution::circular_normal(Angle(0.0), 1.0);
  const double e2 = std::exp(2.0);

  const ShapeReport one = classify_mixture(CircularDistribution::antipodal_mixture(base, 1.0));
  CHECK(one.modality == ShapeReport::Modality::Unimodal);
  REQUIRE(one.modes.size() == 1);
  CHECK(one.modes[0] == Angle(0.0));
  CHECK(one.zeta_max == doctest::Approx(e2));
  CHECK(one.zeta_min == doctest::Approx(1.0 / e2));
  CHECK(one.epsilon_lo == doctest::Approx(1.0 / (1.0 + e2)));
  CHECK(one.epsilon_hi == doctest::Approx(1.0 / (1.0 + 1.0 / e2)));
  CHECK(one.zeta_increasing);

  // 0.1 < 1/(1 + e^2) ~ 0.119: one mode, at the antipode.
  const ShapeReport low = classify_mixture(CircularDistribution::antipodal_mixture(base, 0.1));
  CHECK(low.modality == ShapeReport::Modality::Unimodal);
  REQUIRE(low.modes.size() == 1);
  CHECK(low.modes[0].radians() == doctest::Approx(oracle::kPi));

  const auto half = CircularDistribution::antipodal_mixture(base, 0.5);
  const ShapeReport mid = classify_mixture(half);
  CHECK(mid.modality == ShapeReport::Modality::Bimodal);
  CHECK(mid.modes.size() == 2);
  REQUIRE(mid.antimodes.size() == 2);
  // Antimodes are local minima of the density on a fine grid.
  for (Angle w : mid.antimodes) {
    const double f = half.density(w);
    CHECK(f <= half.density(w.rotated(1e-3)) + 1e-12);
    CHECK(f <= half.density(w.rotated(-1e-3)) + 1e-12);
  }
  // Modality thresholds agree with counting local maxima of the density.
  for (double eps : {0.05, 0.15, 0.3, 0.7, 0.85, 0.95}) {
    const auto mix = CircularDistribution::antipodal_mixture(base, eps);
    int maxima = 0;
    const int grid = 4000;
    for (int k = 0; k < grid; ++k) {
      const double f0 = mix.density(Angle(oracle::kTwoPi * (k - 1) / grid));
      const double f1 = mix.density(Angle(oracle::kTwoPi * k / grid));
      const double f2 = mix.density(Angle(oracle::kTwoPi * (k + 1) / grid));
      if (f1 > f0 && f1 >= f2) ++maxima;
    }
    const ShapeReport r = classify_mixture(mix);
    CAPTURE(eps);
    CHECK(static_cast<int>(r.modes.size()) == maxima);
  }
}

TEST_CASE("unimodality at the location") {
  CHECK(CircularDistribution::circular_normal(Angle(1.0), 2.0).unimodal_at_location());
  CHECK(CircularDistribution::cardioid(Angle(1.0), 0.3).unimodal_at_location());
  CHECK_FALSE(CircularDistribution::cardioid(Angle(1.0), -0.3).unimodal_at_location());
  const auto base = CircularDistribution::circular_normal(Angle(0.0), 1.0);
  CHECK(CircularDistribution::antipodal_mixture(base, 0.95).unimodal_at_location());
  CHECK_FALSE(CircularDistribution::antipodal_mixture(base, 0.5).unimodal_at_location());
  CHECK_FALSE(CircularDistribution::antipodal_mixture(base, 0.1).unimodal_at_location());
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(CircularDistribution::circular_normal(Angle(0.0), 0.0), InvalidParameter);
  CHECK_THROWS_AS(CircularDistribution::wrapped_cauchy(Angle(0.0), 1.0), InvalidParameter);
  CHECK_THROWS_AS(CircularDistribution::wrapped_normal(Angle(0.0), 0.0), InvalidParameter);
  CHECK_THROWS_AS(CircularDistribution::cardioid(Angle(0.0), 0.5), InvalidParameter);
  CHECK_THROWS_AS(CircularDistribution::jones_pewsey(Angle(0.0), 0.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(CircularDistribution::wrapped_stable(Angle(0.0), 0.5, 1.0), InvalidParameter);
  CHECK_THROWS_AS(CircularDistribution::wrapped_stable(Angle(0.0), 0.5, 2.5), InvalidParameter);
  const auto base = CircularDistribution::circular_normal(Angle(0.0), 1.0);
  CHECK_THROWS_AS(CircularDistribution::antipodal_mixture(base, 1.5), InvalidParameter);
  CHECK_THROWS_AS((void)base.sample(0, 1), InvalidParameter);
}

TEST_CASE("samples fit their densities") {
  for (const auto& c : cases(4.0)) {
    CAPTURE(c.label);
    const auto draws = c.dist.sample(10000, 77);
    auto x = oracle::radians(draws);
    std::sort(x.begin(), x.end());
    std::vector<double> cdf;
    if (c.offset_cdf) {
      // Offsets in [-pi, pi) relative to the location, sorted.
      std::vector<double> off;
      for (double t : x) off.push_back(std::remainder(t - 4.0, oracle::kTwoPi));
      std::sort(off.begin(), off.end());
      for (double t : off) cdf.push_back(c.offset_cdf(t));
    } else {
      cdf = oracle::cumulative([&](double t) { return c.offset_density(t - 4.0); }, x);
    }
    CHECK(oracle::kuiper_sorted(cdf) > 1e-3);
  }
  const auto mix = CircularDistribution::antipodal_mixture(
      CircularDistribution::circular_normal(Angle(1.0), 2.0), 0.3);
  auto x = oracle::radians(mix.sample(10000, 78));
  std::sort(x.begin(), x.end());
  const auto cdf = oracle::cumulative(
      [](double t) { return 0.3 * cn_density(t - 1.0, 2.0) + 0.7 * cn_density(t - 1.0 - oracle::kPi, 2.0); },
      x);
  CHECK(oracle::kuiper_sorted(cdf) > 1e-3);
}

TEST_CASE("sampling sanity") {
  const auto cn = CircularDistribution::circular_normal(Angle(0.0), 2.0);
  const auto big = cn.sample(100000, 5);
  CHECK(oracle::circ_dist(oracle::mean_dir(oracle::radians(big)), 0.0) < 0.02);

  const auto mix = CircularDistribution::antipodal_mixture(cn, 1.0);
  CHECK(oracle::kuiper_two_sample(oracle::radians(mix.sample(5000, 6)),
                                  oracle::radians(cn.sample(5000, 7))) > 1e-3);

  CHECK(cn.sample(50, 9) == cn.sample(50, 9));
  CHECK(cn.sample(50, 9) != cn.sample(50, 10));
  const auto copy = cn.with_location(Angle(0.0));
  CHECK(copy.sample(50, 9) == cn.sample(50, 9));
}

TEST_CASE("Fisher sphere") {
  const FisherSphere f{1.0, Angle(2.0), 3.0};
  CHECK(density_sphere(f, 0.0, Angle(0.3)) == 0.0);
  const double mass = oracle::integrate(
      [&](double th) {
        return oracle::integrate_circle([&](double ph) { return density_sphere(f, th, Angle(ph)); }, 16);
      },
      0.0, oracle::kPi, 1e-10);
  CHECK(std::abs(mass - 1.0) < 1e-6);

  // Near-uniform limit: the ratio to sin(theta)/(4 pi) lies within
  // [k e^{-k} / sinh k, k e^{k} / sinh k].
  const FisherSphere flat{0.7, Angle(1.0), 0.01};
  const double k = flat.kappa;
  const double bound = k * std::exp(k) / std::sinh(k) - 1.0;
  CHECK(bound < 0.0101);
  double worst = 0.0;
  for (int i = 1; i < 60; ++i) {
    for (int j = 0; j < 60; ++j) {
      const double th = oracle::kPi * i / 60.0;
      const double ref = std::sin(th) / (4 * oracle::kPi);
      worst = std::max(worst, std::abs(density_sphere(flat, th, Angle(oracle::kTwoPi * j / 60.0)) / ref - 1.0));
    }
  }
  CHECK(worst <= bound + 1e-12);

  // Mean cosine to the mean axis is coth(k) - 1/k.
  const auto pts = sample_sphere(f, 40000, 3);
  const double mx = std::sin(f.nu1) * std::cos(2.0), my = std::sin(f.nu1) * std::sin(2.0),
               mz = std::cos(f.nu1);
  double acc = 0.0, acc2 = 0.0;
  for (const auto& p : pts) {
    CHECK(p.theta >= 0.0);
    CHECK(p.theta <= oracle::kPi);
    const double c = std::sin(p.theta) * std::cos(p.phi.radians()) * mx +
                     std::sin(p.theta) * std::sin(p.phi.radians()) * my + std::cos(p.theta) * mz;
    acc += c;
    acc2 += c * c;
  }
  const double n = static_cast<double>(pts.size());
  const double mean = acc / n;
  const double se = std::sqrt((acc2 / n - mean * mean) / n);
  CHECK(std::abs(mean - (1.0 / std::tanh(3.0) - 1.0 / 3.0)) < 4 * se);
}

TEST_CASE("Mardia-Sutton cylinder") {
  const MardiaSutton indep{Angle(1.0), 2.0, 3.0, Angle(0.5), 0.0, 1.5};
  const auto pts = sample_cylinder(indep, 20000, 4);
  const double n = static_cast<double>(pts.size());
  double mx = 0.0, mc = 0.0;
  std::vector<double> th;
  for (const auto& p : pts) {
    mx += p.x;
    mc += p.theta.cos();
    th.push_back(p.theta.radians());
  }
  mx /= n;
  mc /= n;
  double sxx = 0.0, scc = 0.0, sxc = 0.0;
  for (const auto& p : pts) {
    sxx += (p.x - mx) * (p.x - mx);
    scc += (p.theta.cos() - mc) * (p.theta.cos() - mc);
    sxc += (p.x - mx) * (p.theta.cos() - mc);
  }
  const double corr = sxc / std::sqrt(sxx * scc);
  CHECK(std::abs(corr) < 3.0 / std::sqrt(n));
  CHECK(std::abs(mx - 3.0) < 3.0 * 1.5 / std::sqrt(n));
  // Circular SE of the mean direction: sqrt((1 - A2) / (2 n A1^2)).
  const double a1 = bessel_ratio_a1(2.0);
  const double a2 = 1.0 - 2.0 * a1 / 2.0;
  CHECK(oracle::circ_dist(oracle::mean_dir(th), 1.0) < 3.0 * std::sqrt((1 - a2) / (2 * n * a1 * a1)));
  CHECK_THROWS_AS(sample_cylinder({Angle(0.0), 1.0, 0.0, Angle(0.0), 1.5, 1.0}, 10, 1),
                  InvalidParameter);
}
