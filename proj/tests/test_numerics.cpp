#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "platoon_shield/errors.hpp"
#include "platoon_shield/numerics.hpp"
#include "platoon_shield/platoon_model.hpp"
#include "platoon_shield/rng.hpp"

using namespace platoon_shield;
using numerics::Matrix;
using numerics::StateSpacePlant;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    double worst = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
    return worst;
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("mat_exp of the zero matrix is the identity") {
    const Matrix zero(4, 4);
    CHECK(max_abs_diff(numerics::mat_exp(zero, 1.0), Matrix::identity(4)) == 0.0);
}

TEST_CASE("mat_exp of a nilpotent matrix terminates exactly") {
    const Matrix a(2, 2, {0.0, 1.0, 0.0, 0.0});
    const Matrix expected(2, 2, {1.0, 1.0, 0.0, 1.0});
    CHECK(max_abs_diff(numerics::mat_exp(a, 1.0), expected) <= 1e-15);
}

TEST_CASE("mat_exp matches a truncated Taylor oracle on random stable systems") {
    Rng rng(101);
    for (int trial = 0; trial < 25; ++trial) {
        const Matrix a = oracles::random_stable(rng, 4);
        const Matrix expected = oracles::taylor_mat_exp(a, 0.01);
        CHECK(max_abs_diff(numerics::mat_exp(a, 0.01), expected) <= 1e-12);
    }
}

TEST_CASE("mat_exp semigroup property e^{A(t1+t2)} = e^{At1} e^{At2}") {
    Rng rng(202);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix a = oracles::random_stable(rng, 4);
        const double t1 = rng.uniform(0.0, 0.25);
        const double t2 = rng.uniform(0.0, 0.25);  // ||A (t1+t2)|| stays <= ~5
        const Matrix lhs = numerics::mat_exp(a, t1 + t2);
        const Matrix rhs = numerics::mat_exp(a, t1) * numerics::mat_exp(a, t2);
        CHECK(max_abs_diff(lhs, rhs) <= 1e-9);
    }
}

TEST_CASE("mat_exp rejects bad input") {
    CHECK_THROWS_AS(numerics::mat_exp(Matrix(2, 3), 1.0), DimensionError);
    Matrix nan(2, 2);
    nan(0, 0) = std::nan("");
    CHECK_THROWS_AS(numerics::mat_exp(nan, 1.0), DomainError);
    CHECK_THROWS_AS(numerics::mat_exp(Matrix::identity(2), std::nan("")), DomainError);
}

TEST_CASE("zoh with zero dynamics integrates the input linearly") {
    const Matrix ac(3, 3);
    const Matrix bc(3, 1, {1.0, -2.0, 0.5});
    const auto [ad, bd] = numerics::zoh_discretize(ac, bc, 0.01);
    CHECK(max_abs_diff(ad, Matrix::identity(3)) == 0.0);
    CHECK(bd(0, 0) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(bd(1, 0) == doctest::Approx(-0.02).epsilon(1e-12));
    CHECK(bd(2, 0) == doctest::Approx(0.005).epsilon(1e-12));
}

TEST_CASE("zoh scalar first-order lag matches the closed form") {
    // da = -a/tau + u/tau with tau = 0.1, Ts = 0.1
    const Matrix ac(1, 1, {-10.0});
    const Matrix bc(1, 1, {10.0});
    const auto [ad, bd] = numerics::zoh_discretize(ac, bc, 0.1);
    CHECK(ad(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(bd(0, 0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("zoh matches the series oracle on the vehicle matrices") {
    const model::VehicleParams params{0.5, 0.1};
    const model::ControllerGains gains{5.002, 305.1862};
    auto [fac, fbc] = model::build_follower(params, gains);
    auto [oracle_ad, oracle_bd] = oracles::series_zoh(fac, fbc, 0.01);
    auto [ad, bd] = numerics::zoh_discretize(fac, fbc, 0.01);
    CHECK(max_abs_diff(ad, oracle_ad) <= 1e-10);
    CHECK(max_abs_diff(bd, oracle_bd) <= 1e-10);

    // The virtual-leader matrix is singular; the augmented form needs no
    // inverse of Ac.
    auto [lac, lbc] = model::build_leader(params);
    auto [lo_ad, lo_bd] = oracles::series_zoh(lac, lbc, 0.01);
    auto [lad, lbd] = numerics::zoh_discretize(lac, lbc, 0.01);
    CHECK(max_abs_diff(lad, lo_ad) <= 1e-10);
    CHECK(max_abs_diff(lbd, lo_bd) <= 1e-10);
}

TEST_CASE("zoh matches the series oracle on random stable systems") {
    Rng rng(303);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix ac = oracles::random_stable(rng, 4);
        Matrix bc(4, 2);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 2; ++c) bc(r, c) = rng.uniform(-3.0, 3.0);
        const auto [oracle_ad, oracle_bd] = oracles::series_zoh(ac, bc, 0.01);
        const auto [ad, bd] = numerics::zoh_discretize(ac, bc, 0.01);
        CHECK(max_abs_diff(ad, oracle_ad) <= 1e-10);
        CHECK(max_abs_diff(bd, oracle_bd) <= 1e-10);
    }
}

TEST_CASE("zoh rejects a non-positive sampling period and bad shapes") {
    CHECK_THROWS_AS(numerics::zoh_discretize(Matrix(2, 2), Matrix(2, 1), 0.0), DomainError);
    CHECK_THROWS_AS(numerics::zoh_discretize(Matrix(2, 2), Matrix(2, 1), -0.1), DomainError);
    CHECK_THROWS_AS(numerics::zoh_discretize(Matrix(2, 3), Matrix(2, 1), 0.1), DimensionError);
    CHECK_THROWS_AS(numerics::zoh_discretize(Matrix(2, 2), Matrix(3, 1), 0.1), DimensionError);
}

TEST_CASE("spectral abscissa of simple matrices") {
    CHECK(numerics::spectral_abscissa(Matrix(2, 2, {-1.0, 0.0, 0.0, -2.0})) == doctest::Approx(-1.0));
    CHECK(numerics::spectral_abscissa(Matrix(2, 2, {0.0, 1.0, -1.0, 0.0})) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("closed-loop matrix is Hurwitz and agrees with the characteristic-polynomial oracle") {
    const model::VehicleParams params{0.5, 0.1};
    const model::ControllerGains gains{5.002, 305.1862};
    const auto [ac, bc] = model::build_follower(params, gains);
    const double abscissa = numerics::spectral_abscissa(ac);
    CHECK(abscissa < 0.0);
    CHECK(abscissa == doctest::Approx(oracles::charpoly_spectral_abscissa(ac)).epsilon(1e-8));
}

TEST_CASE("spectral abscissa is invariant under similarity transforms") {
    Rng rng(404);
    for (int trial = 0; trial < 30; ++trial) {
        const Matrix a = oracles::random_stable(rng, 4);
        const Matrix t = oracles::random_transform(rng, 4);
        const double direct = numerics::spectral_abscissa(a);
        const double transformed = numerics::spectral_abscissa(oracles::similarity(t, a));
        CHECK(std::abs(direct - transformed) <= 1e-8 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("hinf norm of first-order lags") {
    StateSpacePlant plant;
    plant.A = Matrix(1, 1, {-1.0});
    plant.B = Matrix(1, 1, {1.0});
    plant.C = Matrix(1, 1, {1.0});
    plant.D = Matrix(1, 1, {0.0});
    CHECK(numerics::hinf_norm(plant, 1e-6) == doctest::Approx(1.0).epsilon(1e-4));

    plant.C = Matrix(1, 1, {2.0});
    CHECK(numerics::hinf_norm(plant, 1e-6) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("hinf norm with direct feedthrough") {
    // |1/(jw+1) + 0.5| falls from 1.5 at DC to 0.5 at high frequency
    StateSpacePlant plant;
    plant.A = Matrix(1, 1, {-1.0});
    plant.B = Matrix(1, 1, {1.0});
    plant.C = Matrix(1, 1, {1.0});
    plant.D = Matrix(1, 1, {0.5});
    CHECK(numerics::hinf_norm(plant, 1e-6) == doctest::Approx(1.5).epsilon(1e-4));
}

TEST_CASE("hinf norm needs a Hurwitz plant and a positive tolerance") {
    StateSpacePlant plant;
    plant.A = Matrix(1, 1, {1.0});
    plant.B = Matrix(1, 1, {1.0});
    plant.C = Matrix(1, 1, {1.0});
    plant.D = Matrix(1, 1, {0.0});
    CHECK_THROWS_AS(numerics::hinf_norm(plant, 1e-4), DomainError);
    plant.A = Matrix(1, 1, {-1.0});
    CHECK_THROWS_AS(numerics::hinf_norm(plant, 0.0), DomainError);
}

TEST_CASE("hinf bisection agrees with its frequency sweep") {
    StateSpacePlant plant;
    plant.A = Matrix(2, 2, {-0.4, 1.0, -1.0, -0.4});  // resonant pair
    plant.B = Matrix(2, 1, {0.0, 1.0});
    plant.C = Matrix(1, 2, {1.0, 0.0});
    plant.D = Matrix(1, 1, {0.0});
    const double tol = 1e-5;
    const auto detail = numerics::hinf_norm_detail(plant, tol, 4000);
    CHECK(detail.norm >= detail.sweep_peak - tol);
    CHECK(detail.norm == doctest::Approx(detail.sweep_peak).epsilon(1e-3));
    // closed form for this plant: peak of 1/((jw)^2 + 0.8 jw + 1.16)
    CHECK(detail.sweep_peak_freq == doctest::Approx(std::sqrt(1.16 - 0.32)).epsilon(1e-2));
}

TEST_CASE("hinf norm is invariant under state similarity transforms") {
    StateSpacePlant plant;
    plant.A = Matrix(2, 2, {-1.0, 1.0, 0.0, -2.0});
    plant.B = Matrix(2, 1, {1.0, 1.0});
    plant.C = Matrix(1, 2, {1.0, 0.0});
    plant.D = Matrix(1, 1, {0.0});
    const double tol = 1e-5;
    const double direct = numerics::hinf_norm(plant, tol);

    Rng rng(505);
    const Matrix t = oracles::random_transform(rng, 2);
    StateSpacePlant transformed;
    transformed.A = oracles::similarity(t, plant.A);
    transformed.B = t * plant.B;
    transformed.C = numerics::linear_solve(t.transposed(), plant.C.transposed()).transposed();
    transformed.D = plant.D;
    CHECK(numerics::hinf_norm(transformed, tol) == doctest::Approx(direct).epsilon(1e-3));
}

TEST_CASE("matrix shape errors are reported") {
    CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
    CHECK_THROWS_AS(Matrix(2, 2) * Matrix(3, 2), DimensionError);
    CHECK_THROWS_AS(numerics::linear_solve(Matrix(2, 3), Matrix(2, 1)), DimensionError);
    CHECK_THROWS_AS(numerics::linear_solve(Matrix(2, 2), Matrix(2, 1)), NumericError);  // singular
}

}  // TEST_SUITE
