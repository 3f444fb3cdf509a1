#include "readout/temporal.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace readout;

TEST_CASE("profiles are unit-normalized under the discrete inner product") {
    for (int n : {1, 7, 100}) {
        CHECK(TemporalProfile(ProfileKind::Flat, n).inner(TemporalProfile(ProfileKind::Flat, n)) ==
              Catch::Approx(1.0).margin(1e-14));
        if (n > 1) {
            const TemporalProfile ramp(ProfileKind::Ramp, n);
            CHECK(ramp.inner(ramp) == Catch::Approx(1.0).margin(1e-14));
            const TemporalProfile cramp(ProfileKind::CenteredRamp, n);
            CHECK(cramp.inner(cramp) == Catch::Approx(1.0).margin(1e-14));
        }
    }
    const TemporalProfile cosw(ProfileKind::Cosine, 3000, 300.0);
    CHECK(cosw.inner(cosw) == Catch::Approx(1.0).margin(1e-14));
    const TemporalProfile sinw(ProfileKind::Sine, 3000, 300.0);
    CHECK(sinw.inner(sinw) == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("continuum profile values") {
    const TemporalProfile flat(ProfileKind::Flat, 4);
    CHECK(flat.value(0.3) == 1.0);
    const TemporalProfile cramp(ProfileKind::CenteredRamp, 4);
    CHECK(cramp.value(0.25) == Catch::Approx(std::sqrt(3.0) * 0.5).margin(1e-15));
    CHECK(cramp.value(0.75) == Catch::Approx(-std::sqrt(3.0) * 0.5).margin(1e-15));
    const TemporalProfile ramp(ProfileKind::Ramp, 4);
    CHECK(ramp.value(0.0) == Catch::Approx(std::sqrt(3.0)).margin(1e-15));
    CHECK(ramp.value(1.0) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("flat-ramp overlap carries the midpoint-rule 1/N^2 correction") {
    for (int n : {10, 100, 1000}) {
        const TemporalProfile flat(ProfileKind::Flat, n);
        const TemporalProfile ramp(ProfileKind::Ramp, n);
        // Raw overlap sqrt(3)/2 is exact on the midpoint grid; the ramp's
        // norm rescaling contributes 1/sqrt(1 - 1/(4N^2)).
        const double expected = std::sqrt(3.0) / 2.0 / std::sqrt(1.0 - 1.0 / (4.0 * n * n));
        CHECK(inner(flat, ramp) == Catch::Approx(expected).margin(1e-14));
    }
}

TEST_CASE("centered ramp is exactly orthogonal to flat") {
    for (int n : {2, 9, 1000}) {
        const TemporalProfile flat(ProfileKind::Flat, n);
        const TemporalProfile cramp(ProfileKind::CenteredRamp, n);
        CHECK(std::abs(inner(flat, cramp)) < 1e-14);
    }
}

TEST_CASE("grid mismatch is rejected") {
    const TemporalProfile a(ProfileKind::Flat, 10);
    const TemporalProfile b(ProfileKind::Flat, 11);
    CHECK_THROWS_AS(inner(a, b), std::invalid_argument);
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(TemporalProfile(ProfileKind::Flat, 0), std::invalid_argument);
    CHECK_THROWS_AS(TemporalProfile(ProfileKind::Cosine, 10), std::invalid_argument);
    // Centered ramp vanishes identically on the single-midpoint grid.
    CHECK_THROWS_AS(TemporalProfile(ProfileKind::CenteredRamp, 1), std::invalid_argument);
}

TEST_CASE("orthogonalizing flat and ramp yields the centered ramp") {
    const int n = 1000;
    const TemporalProfile flat(ProfileKind::Flat, n);
    const TemporalProfile ramp(ProfileKind::Ramp, n);
    const OrthogonalBasis ob = orthogonalize({flat, ramp});
    REQUIRE(ob.basis.size() == 2);

    // Residual of the ramp after removing its flat component points along
    // the centered ramp exactly (not just asymptotically).
    const TemporalProfile cramp(ProfileKind::CenteredRamp, n);
    for (int k = 0; k < n; ++k)
        REQUIRE(ob.basis[1][static_cast<std::size_t>(k)] ==
                Catch::Approx(cramp.samples()[static_cast<std::size_t>(k)]).margin(1e-10));

    // Decomposition coefficients approach (sqrt(3)/2, 1/2).
    REQUIRE(ob.coeffs.size() == 2);
    CHECK(ob.coeffs[0][0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(ob.coeffs[1][0] == Catch::Approx(std::sqrt(3.0) / 2.0).margin(1e-5));
    CHECK(ob.coeffs[1][1] == Catch::Approx(0.5).margin(1e-5));
}

TEST_CASE("orthonormalize rejects dependent inputs") {
    const TemporalProfile flat(ProfileKind::Flat, 50);
    CHECK_THROWS_AS(orthonormalize({flat.samples(), flat.samples()}), std::invalid_argument);
}

TEST_CASE("orthonormalized oscillatory set stays pairwise orthonormal") {
    const int n = 2000;
    const double wt = 300.0;
    std::vector<std::vector<double>> raw(4, std::vector<double>(static_cast<std::size_t>(n)));
    for (int k = 0; k < n; ++k) {
        const double u = (k + 0.5) / n;
        raw[0][static_cast<std::size_t>(k)] = std::sqrt(2.0) * std::cos(wt * u);
        raw[1][static_cast<std::size_t>(k)] = std::sqrt(2.0) * std::sin(wt * u);
        raw[2][static_cast<std::size_t>(k)] = std::sqrt(3.0) * (1.0 - 2.0 * u) * raw[0][static_cast<std::size_t>(k)];
        raw[3][static_cast<std::size_t>(k)] = std::sqrt(3.0) * (1.0 - 2.0 * u) * raw[1][static_cast<std::size_t>(k)];
    }
    const auto basis = orthonormalize(raw);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double ip = 0.0;
            for (int k = 0; k < n; ++k)
                ip += basis[i][static_cast<std::size_t>(k)] * basis[j][static_cast<std::size_t>(k)];
            ip /= n;
            CHECK(ip == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-12));
        }
}

TEST_CASE("mode projector has unit 2-norm") {
    for (int n : {3, 64, 999}) {
        const auto c = mode_projector(TemporalProfile(ProfileKind::Ramp, n));
        double s = 0.0;
        for (double x : c) s += x * x;
        CHECK(s == Catch::Approx(1.0).margin(1e-13));
    }
}
