#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fraceig/functional.hpp"
#include "oracles.hpp"

using namespace fraceig;

TEST_SUITE("functional") {
  TEST_CASE("parameter validation") {
    CHECK_NOTHROW(FracParams{0.5, 2.0, std::nullopt}.validate());
    CHECK_THROWS_AS(FracParams({0.0, 2.0, std::nullopt}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(FracParams({1.0, 2.0, std::nullopt}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(FracParams({0.5, 0.9, std::nullopt}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(FracParams({0.5, INFINITY, std::nullopt}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(FracParams({0.5, 2.0, 1.2}).validate(), std::invalid_argument);
    const auto fp = FracParams::holder_coupled(0.5, 8.0, 1);
    CHECK(fp.s == doctest::Approx(0.375));
    CHECK(*fp.alpha == 0.5);
    CHECK_THROWS_AS(FracParams::holder_coupled(0.5, 2.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(FracParams::holder_coupled(0.5, 4.0, 2), std::invalid_argument);
  }

  TEST_CASE("energies agree with all-pairs references") {
    std::mt19937_64 rng(11);
    const auto line = build_interval(1.0, 64);
    const auto box = build_box(1.0, 1.0, 16);
    const auto kernel = Kernel::periodic_product(2.0, 1.0, 3);
    for (const auto& d : {line, box})
      for (const FracParams fp : {FracParams{0.3, 2.0, {}}, FracParams{0.8, 3.5, {}}, FracParams{0.5, 1.0, {}}}) {
        const auto u = oracle::random_function(d, rng);
        CAPTURE(d->dim());
        CAPTURE(fp.s);
        CAPTURE(fp.p);
        CHECK(oracle::rel(gagliardo_energy(u, fp), oracle::energy(u, fp)) < 1e-12);
        CHECK(oracle::rel(weighted_energy(u, fp, kernel), oracle::energy(u, fp, &kernel)) < 1e-12);
      }
  }

  TEST_CASE("holder quotient agrees with the all-pairs reference") {
    std::mt19937_64 rng(5);
    for (const auto& d : {build_interval(1.0, 40), build_box(1.0, 0.75, 12)})
      for (double alpha : {0.2, 0.5, 0.9}) {
        const auto u = oracle::random_function(d, rng);
        CHECK(oracle::rel(holder_quotient_sup(u, alpha), oracle::holder(u, alpha)) < 1e-12);
      }
  }

  TEST_CASE("homogeneity and evenness") {
    std::mt19937_64 rng(3);
    const auto d = build_interval(1.0, 32);
    const FracParams fp{0.6, 2.7, {}};
    const auto u = oracle::random_function(d, rng);
    for (double c : {-3.0, 0.5}) {
      CHECK(oracle::rel(gagliardo_energy(c * u, fp), std::pow(std::abs(c), fp.p) * gagliardo_energy(u, fp)) < 1e-12);
      CHECK(oracle::rel(f_n(c * u, fp), std::abs(c) * f_n(u, fp)) < 1e-12);
      CHECK(oracle::rel(holder_quotient_sup(c * u, 0.4), std::abs(c) * holder_quotient_sup(u, 0.4)) < 1e-12);
    }
    CHECK(gagliardo_energy(-u, fp) == doctest::Approx(gagliardo_energy(u, fp)).epsilon(1e-14));
    CHECK(gagliardo_energy(GridFunction::zeros(d), fp) == 0.0);
  }

  TEST_CASE("gradient matches central differences") {
    std::mt19937_64 rng(8);
    for (const auto& d : {build_interval(1.0, 12), build_box(1.0, 1.0, 5)})
      for (double p : {2.0, 3.0}) {
        const auto st = stencil_for(d, 0.6, p);
        const auto kernel = Kernel::periodic_product(2.0, 0.5, 1).sample(*d);
        auto u = oracle::random_function(d, rng);
        std::vector<double> v(u.values().begin(), u.values().end());
        std::vector<double> g(v.size());
        nonlocal_energy_gradient(*st, v, &kernel, g);
        for (std::size_t k = 0; k < v.size(); ++k) {
          const double eps = 1e-6;
          auto plus = v, minus = v;
          plus[k] += eps;
          minus[k] -= eps;
          const double fd = (nonlocal_energy(*st, plus, &kernel) - nonlocal_energy(*st, minus, &kernel)) / (2 * eps);
          CHECK(g[k] == doctest::Approx(fd).epsilon(1e-6));
        }
      }
  }

  TEST_CASE("energy returned with the gradient equals the plain energy") {
    std::mt19937_64 rng(9);
    const auto d = build_interval(1.0, 30);
    const auto st = stencil_for(d, 0.4, 2.5);
    const auto u = oracle::random_function(d, rng);
    std::vector<double> g(u.size());
    CHECK(nonlocal_energy_gradient(*st, u.values(), nullptr, g) == nonlocal_energy(*st, u.values()));
  }

  TEST_CASE("non-finite input is rejected") {
    const auto d = build_interval(1.0, 8);
    auto u = GridFunction::constant(d, 1.0);
    u[2] = std::nan("");
    CHECK_THROWS_AS(gagliardo_energy(u, {0.5, 2.0, {}}), NumericError);
  }

  TEST_CASE("lq norms") {
    const auto d = build_box(1.0, 1.0, 10);
    const auto u = GridFunction::constant(d, -2.0);
    for (double q : {1.0, 2.0, 3.5})
      CHECK(lq_norm(u, q) == doctest::Approx(2.0 * std::pow(d->measure(), 1.0 / q)).epsilon(1e-13));
    CHECK(lq_norm(u, INFINITY) == 2.0);
    CHECK_THROWS_AS(lq_norm(u, 0.5), std::invalid_argument);
  }

  TEST_CASE("K constant: quadrature and closed form") {
    for (int dim : {1, 2, 3})
      for (double p : {1.0, 1.5, 2.0, 3.0, 10.0}) {
        CAPTURE(dim);
        CAPTURE(p);
        CHECK(oracle::rel(k_constant(dim, p), k_constant_closed_form(dim, p)) < 1e-10);
      }
    CHECK(k_constant(1, 2.0) == 1.0);
    CHECK(k_constant(2, 2.0) == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-14));
    CHECK(k_constant(3, 2.0) == doctest::Approx(2.0 * std::numbers::pi / 3.0).epsilon(1e-14));
    CHECK(k_constant(1, 3.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(k_constant(4, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(k_constant(1, 0.5), std::invalid_argument);
  }

  TEST_CASE("local Dirichlet energy") {
    const auto d = build_interval(1.0, 400);
    std::vector<double> v(d->interior_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(std::numbers::pi * d->coordinate(i).x);
    const GridFunction u(d, v);
    CHECK(dirichlet_energy_local(u, 2.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0).epsilon(1e-4));

    const auto box = build_box(1.0, 1.0, 4);
    const auto one = GridFunction::constant(box, 1.0);
    // 12 unit jumps across the boundary on each axis, each |1/h|^2 h^2.
    CHECK(dirichlet_energy_local(one, 2.0) == doctest::Approx(12.0));
  }

  TEST_CASE("energy approaches K times the local energy as s -> 1") {
    const auto d = build_interval(1.0, 64);
    std::vector<double> v(d->interior_count());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double x = d->coordinate(i).x;
      v[i] = x * (1.0 - x) * (1.0 + x);
    }
    const GridFunction u(d, v);
    for (double p : {2.0, 3.0}) {
      const double local = k_constant(1, p) * dirichlet_energy_local(u, p);
      const double e95 = gagliardo_energy(u, {0.95, p, {}});
      const double e99 = gagliardo_energy(u, {0.99, p, {}});
      CAPTURE(p);
      CHECK(std::abs(e99 - local) < std::abs(e95 - local));
      CHECK(oracle::rel(e99, local) < 0.05);
    }
  }
}
