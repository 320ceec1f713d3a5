#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dirion/error.hpp"
#include "dirion/pulse.hpp"

using namespace dirion;

TEST_CASE("pulse construction") {
  const PulseParams p = make_pulse(20, 500.0, 3774.6);
  CHECK(p.duration == doctest::Approx(2 * std::numbers::pi * 20 / 500.0).epsilon(1e-15));
  CHECK(p.a0 == doctest::Approx(3774.6 / 500.0).epsilon(1e-15));
  CHECK(p.start() == -0.5 * p.duration);
  CHECK_FALSE(p.intensity_wcm2.has_value());
  const PulseParams q = make_pulse_from_intensity(20, 500.0, 5e23);
  REQUIRE(q.intensity_wcm2.has_value());
  CHECK(q.f0 == doctest::Approx(3774.6).epsilon(2e-5));
  CHECK_THROWS_AS(make_pulse(0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(make_pulse(20, -1.0, 1.0), Error);
  CHECK_THROWS_AS(make_pulse(20, 1.0, -1.0), Error);
}

TEST_CASE("vector potential examples") {
  const int n = 20;
  const PulseParams p = make_pulse(n, 500.0, 100.0);
  CHECK(vector_potential(p, 0.0) == 0.0);
  CHECK(vector_potential(p, p.end()) == 0.0);
  CHECK(vector_potential(p, p.start()) == 0.0);
  CHECK(vector_potential(p, p.end() + 1.0) == 0.0);
  const double c = std::cos(std::numbers::pi / (4 * n));
  CHECK(vector_potential(p, p.duration / (4 * n)) == doctest::Approx(p.a0 * c * c).epsilon(1e-14));
}

TEST_CASE("field is minus the derivative of A") {
  const PulseParams p = make_pulse(7, 3.0, 2.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(p.start() * 0.999, p.end() * 0.999);
  const double h = 1e-6 * p.duration;
  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const double t = u(rng);
    const double fd = -(vector_potential(p, t + h) - vector_potential(p, t - h)) / (2 * h);
    const double f = electric_field(p, t);
    // relative to the field scale; pointwise relative error is meaningless at zeros of F
    worst = std::max(worst, std::abs(fd - f) / p.f0);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("field integrates to zero and peaks near F0") {
  const PulseParams p = make_pulse(20, 2.0, 1.5);
  const int m = 200000;
  const double h = p.duration / m;
  double s = electric_field(p, p.start()) + electric_field(p, p.end());
  double peak = 0.0;
  for (int i = 1; i < m; ++i) {
    const double f = electric_field(p, p.start() + i * h);
    s += f * (i % 2 ? 4.0 : 2.0);
    peak = std::max(peak, std::abs(f));
  }
  CHECK(std::abs(s * h / 3.0) < 1e-10);
  CHECK(peak == doctest::Approx(p.f0).epsilon(0.01));
}

TEST_CASE("continuity at the pulse edges and oddness of A") {
  const PulseParams p = make_pulse(5, 1.3, 0.7);
  for (double eps : {1e-4, 1e-6, 1e-8}) {
    CHECK(std::abs(vector_potential(p, p.end() - eps)) < 10 * p.a0 * eps * eps);
    CHECK(std::abs(electric_field(p, p.end() - eps)) < 10 * p.f0 * eps);
    CHECK(std::abs(electric_field(p, p.start() + eps)) < 10 * p.f0 * eps);
  }
  for (double t = 0.0; t < p.end(); t += 0.37)
    CHECK(vector_potential(p, -t) == doctest::Approx(-vector_potential(p, t)).epsilon(1e-14).scale(1e-300));
}

TEST_CASE("unit conversions") {
  CHECK(intensity_to_field(3.509445e16) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(intensity_to_field(5e22) == doctest::Approx(1193.6).epsilon(1e-4));
  CHECK(intensity_to_field(5e23) == doctest::Approx(3774.6).epsilon(2e-5));
  CHECK(field_to_intensity(intensity_to_field(7.5e20)) == doctest::Approx(7.5e20).epsilon(1e-14));
  CHECK(wavelength_to_omega(45.56335) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(wavelength_to_omega(0.05) == doctest::Approx(911.27).epsilon(1e-5));
  CHECK(wavelength_to_omega(0.15) == doctest::Approx(303.76).epsilon(2e-5));
  CHECK(omega_to_wavelength(wavelength_to_omega(0.1)) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(intensity_to_field(-1.0), Error);
  CHECK_THROWS_AS(wavelength_to_omega(0.0), Error);
}
