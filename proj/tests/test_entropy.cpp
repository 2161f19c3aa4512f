#include <doctest.h>

#include <Eigen/Dense>

#include "qmemc/entropy.hpp"
#include "qmemc/errors.hpp"

using namespace qmemc;

TEST_CASE("shannon entropy basics") {
    Eigen::VectorXd one(1);
    one << 1.0;
    CHECK(shannon(one) == doctest::Approx(0.0).epsilon(1e-15));

    Eigen::Vector2d fair(0.5, 0.5);
    CHECK(shannon(fair) == doctest::Approx(1.0).epsilon(1e-15));

    Eigen::Vector2d skew(2.0 / 3.0, 1.0 / 3.0);
    CHECK(shannon(skew) == doctest::Approx(0.9182958340544894).epsilon(1e-12));
}

TEST_CASE("shannon rejects unnormalized and negative input") {
    Eigen::Vector2d bad(0.5, 0.4);
    CHECK_THROWS_AS(shannon(bad), NotNormalized);
    Eigen::Vector2d neg(1.5, -0.5);
    CHECK_THROWS_AS(shannon(neg), NotNormalized);
}

TEST_CASE("spectrum entropy clips PSD slack") {
    Eigen::Vector3d s(1.0 + 5e-10, -5e-10, 0.0);
    CHECK(spectrum_entropy(s) == doctest::Approx(0.0).epsilon(1e-8));
    Eigen::Vector2d bad(1.1, -0.1);
    CHECK_THROWS_AS(spectrum_entropy(bad), NotNormalized);
}

TEST_CASE("unconditional min/max entropies") {
    Eigen::VectorXd u4 = Eigen::VectorXd::Constant(4, 0.25);
    auto [mn4, mx4] = h_min_max_unconditional(u4);
    CHECK(mn4 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(mx4 == doctest::Approx(2.0).epsilon(1e-14));

    Eigen::VectorXd pure(1);
    pure << 1.0;
    auto [mn1, mx1] = h_min_max_unconditional(pure);
    CHECK(mn1 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(mx1 == doctest::Approx(0.0).epsilon(1e-14));

    // direct formula evaluation: -log2(0.75) and 2 log2(sqrt .75 + sqrt .25)
    Eigen::Vector2d p(0.75, 0.25);
    auto [mn, mx] = h_min_max_unconditional(p);
    CHECK(mn == doctest::Approx(0.41503749927884376).epsilon(1e-12));
    CHECK(mx == doctest::Approx(0.8999686269529916).epsilon(1e-12));
}
