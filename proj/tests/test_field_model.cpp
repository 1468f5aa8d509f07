#include <cmath>
#include <random>

#include <doctest.h>

#include "ivsqrt/field_model.hpp"
#include "oracles.hpp"

using namespace ivsqrt;

namespace {
const FieldConfig kFig1{1.0, 4.0, -5.0};
}

TEST_CASE("detuning values and domain") {
    // sqrt(t0) = 1.25 zeroes the detuning for (4, -5).
    CHECK(detuning(1.5625, kFig1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(detuning(1.0, {1.0, 4.0, 5.0}) == doctest::Approx(9.0));
    // At t = 1e12 (Delta1/Delta0)^2 the sqrt term has shrunk to a relative
    // 1e-6 of the asymptotic detuning.
    const double far = 1e12 * (5.0 / 4.0) * (5.0 / 4.0);
    CHECK(std::fabs(detuning(far, kFig1) - 4.0) <= 1.0000001e-6 * 4.0);
    CHECK_THROWS_AS(detuning(0.0, kFig1), DomainError);
    CHECK_THROWS_AS(detuning(-1.0, kFig1), DomainError);
    CHECK_THROWS_AS(detuning(1.0, FieldConfig{0.0, 4.0, -5.0}), DomainError);
}

TEST_CASE("accumulated phase and its derivative") {
    CHECK(phase(0.0, kFig1) == 0.0);
    CHECK(phase(1.0, kFig1) == doctest::Approx(-6.0));
    const double t = 2.0, h = 1e-6;
    const double fd = (phase(t + h, kFig1) - phase(t - h, kFig1)) / (2.0 * h);
    CHECK(std::fabs(fd - detuning(t, kFig1)) < 1e-8);
    CHECK_THROWS_AS(phase(-0.1, kFig1), DomainError);
}

TEST_CASE("crossing time") {
    CHECK(crossing_time(kFig1).value() == doctest::Approx(1.5625).epsilon(1e-15));
    CHECK_FALSE(crossing_time({1.0, 4.0, 5.0}).has_value());
    CHECK(crossing_time({1.0, -4.0, 5.0}).value() == doctest::Approx(1.5625));

    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> u(0.2, 8.0);
    for (int i = 0; i < 25; ++i) {
        const FieldConfig cfg{u(rng), u(rng), -u(rng)};
        const auto t0 = crossing_time(cfg);
        REQUIRE(t0.has_value());
        CHECK(std::fabs(detuning(*t0, cfg)) < 1e-12);
    }
}

TEST_CASE("local crossing-rate parameter") {
    const auto lz = lz_parameter(kFig1);
    CHECK(lz.magnitude == doctest::Approx(0.09765625).epsilon(1e-15));
    CHECK_FALSE(lz.negative);
    CHECK(lz.slope == doctest::Approx(1.28).epsilon(1e-12));

    // Slope equals the numeric derivative of the detuning at the crossing.
    const double t0 = crossing_time(kFig1).value();
    const double h = 1e-6;
    const double fd = (detuning(t0 + h, kFig1) - detuning(t0 - h, kFig1)) / (2.0 * h);
    CHECK(std::fabs(fd - lz.slope) < 1e-6);

    CHECK(lz_parameter({1e-12, 4.0, -5.0}).magnitude ==
          doctest::Approx(0.0).epsilon(1e-20));
    CHECK(lz_parameter({1.0, -4.0, 5.0}).negative);
    CHECK_THROWS_AS(lz_parameter({1.0, 0.0, -5.0}), DomainError);
}

TEST_CASE("quasi-energies") {
    const auto qe = quasi_energies(kFig1);
    CHECK(qe.R == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    CHECK(qe.lambda1 == doctest::Approx(2.0 + std::sqrt(5.0)).epsilon(1e-15));
    CHECK(qe.lambda2 == doctest::Approx(2.0 - std::sqrt(5.0)).epsilon(1e-15));

    // Adiabatic switch-off limit.
    const auto weak = quasi_energies({1e-4, 4.0, -5.0});
    CHECK(std::fabs(weak.lambda1 - 4.0) < 1e-7);
    CHECK(std::fabs(weak.lambda2) < 1e-7);

    // Independence from Delta1.
    const auto a = quasi_energies({1.0, 4.0, -5.0});
    const auto b = quasi_energies({1.0, 4.0, 17.0});
    CHECK(a.lambda1 == b.lambda1);
    CHECK(a.lambda2 == b.lambda2);

    // Vieta relations for the quasi-energy quadratic.
    std::mt19937 rng(8u);
    std::uniform_real_distribution<double> u(0.1, 8.0);
    for (int i = 0; i < 25; ++i) {
        const FieldConfig cfg{u(rng), u(rng) - 4.0, u(rng)};
        const auto q = quasi_energies(cfg);
        CHECK(std::fabs(q.lambda1 + q.lambda2 - cfg.Delta0) < 1e-12 * (1.0 + std::fabs(cfg.Delta0)));
        CHECK(std::fabs(q.lambda1 * q.lambda2 + cfg.U0 * cfg.U0) <
              1e-12 * (1.0 + cfg.U0 * cfg.U0));
    }
}

TEST_CASE("dimensionless control parameters") {
    const auto dp = dimensionless_params(kFig1);
    CHECK(dp.nu0 == doctest::Approx(std::sqrt(5.0) / 4.0).epsilon(1e-14)); // 0.5590170
    CHECK(dp.xi0 == doctest::Approx(-1.4953487812212205).epsilon(1e-14));
    CHECK(dp.nu == ComplexScalar(0.0, dp.nu0));
    CHECK(dp.xi == ComplexScalar(dp.xi0, -dp.xi0));

    // Field-strength asymptotes of the two parameters.
    const auto weak = dimensionless_params({0.01, 4.0, -5.0});
    const double nu0_small = 2.0 * 25.0 * 1e-4 / 64.0;
    CHECK(std::fabs(weak.nu0 / nu0_small - 1.0) < 0.01);
    const auto strong = dimensionless_params({1000.0, 4.0, -5.0});
    const double xi0_large = 4.0 * -5.0 / (4.0 * std::pow(1000.0, 1.5));
    CHECK(std::fabs(strong.xi0 / xi0_large - 1.0) < 0.01);

    // nu0 is positive for every valid field; xi0 goes negative exactly with
    // a crossing when Delta0 > 0.
    std::mt19937 rng(9u);
    std::uniform_real_distribution<double> u(0.1, 8.0);
    for (int i = 0; i < 25; ++i) {
        const FieldConfig cfg{u(rng), u(rng), (i % 2 ? 1.0 : -1.0) * u(rng)};
        const auto d = dimensionless_params(cfg);
        CHECK(d.nu0 > 0.0);
        CHECK((d.xi0 < 0.0) == (cfg.Delta0 * cfg.Delta1 < 0.0));
    }
}

TEST_CASE("normalization constant") {
    const double c = c1_normalization(kFig1);
    CHECK(std::fabs(c - 0.14811) < 1e-4);
    CHECK(std::fabs(c - 0.148109749898) < 1e-10);

    // No inverse-sqrt component: the exponential factor degenerates to 1.
    const FieldConfig rabi{1.0, 4.0, 0.0};
    const auto qe = quasi_energies(rabi);
    CHECK(c1_normalization(rabi) ==
          doctest::Approx(1.0 / std::sqrt(1.0 + qe.lambda1 * qe.lambda1)).epsilon(1e-14));

    // The two closed forms agree across the full parameter sweep.
    std::mt19937 rng(10u);
    std::uniform_real_distribution<double> d0(0.5, 8.0), d1(-8.0, 8.0), u0(0.1, 10.0);
    int done = 0;
    while (done < 100) {
        const FieldConfig cfg{u0(rng), d0(rng), d1(rng)};
        if (std::fabs(cfg.Delta1) < 1e-3)
            continue;
        ++done;
        const double a = c1_normalization(cfg);
        const double b = c1_normalization_dimensionless(cfg);
        CHECK(std::fabs(a - b) <= 1e-10 * a);
    }

    CHECK_THROWS_AS(c1_normalization({1.0, -4.0, 5.0}), ConventionError);
    CHECK_THROWS_AS(c1_normalization_dimensionless({1.0, 0.0, 5.0}), ConventionError);
}

TEST_CASE("derived bundle") {
    const auto d = derive(kFig1);
    CHECK(d.t0.value() == doctest::Approx(1.5625));
    CHECK(d.R == doctest::Approx(std::sqrt(5.0)));
    CHECK(d.C1 == doctest::Approx(0.148109749898).epsilon(1e-9));
    CHECK_THROWS_AS(derive({1.0, -1.0, 2.0}), ConventionError);
}
