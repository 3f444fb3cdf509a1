#include "readout/oracle.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace readout;

namespace {
const double kRt2 = std::sqrt(2.0);
}

TEST_CASE("sliced-system construction is validated") {
    CHECK_THROWS_AS(build_sliced_transform(Scheme::Single, kRt2, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_sliced_transform(Scheme::Single, -1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(build_sliced_transform(Scheme::Double, kRt2, 10, 0.0), std::invalid_argument);
    const SlicedSystem s = build_sliced_transform(Scheme::Single, kRt2, 5);
    CHECK(s.total_quadratures() == 22);
    const SlicedSystem d = build_sliced_transform(Scheme::Double, kRt2, 5, 10.0);
    CHECK(d.total_quadratures() == 24);
}

TEST_CASE("propagation rejects mismatched column blocks") {
    const SlicedSystem sys = build_sliced_transform(Scheme::Single, kRt2, 4);
    CHECK_THROWS_AS(propagate_columns(sys, Mat::Identity(10, 10)), std::invalid_argument);
}

TEST_CASE("the implied full transform is exactly symplectic at any slice count") {
    {
        const SlicedSystem sys = build_sliced_transform(Scheme::Single, 1.9, 3);
        const int d = sys.total_quadratures();
        const Mat s = propagate_columns(sys, Mat::Identity(d, d));
        const Mat omega = symplectic_form(d / 2);
        CHECK((s * omega * s.transpose() - omega).norm() < 1e-13);
    }
    {
        const SlicedSystem sys = build_sliced_transform(Scheme::Double, 1.1, 4, 1.0);
        const int d = sys.total_quadratures();
        const Mat s = propagate_columns(sys, Mat::Identity(d, d));
        const Mat omega = symplectic_form(d / 2);
        CHECK((s * omega * s.transpose() - omega).norm() < 1e-13);
    }
}

TEST_CASE("single slice with a flat-only projector is the exact flat block") {
    const SlicedSystem sys = build_sliced_transform(Scheme::Single, kRt2, 1);
    const ProjectedMap pm = project(sys, {TemporalProfile(ProfileKind::Flat, 1)});
    REQUIRE(pm.labels == std::vector<ModeLabel>{"L", "M", "A"});
    REQUIRE(pm.reduced.rows() == 6);

    Mat expected = Mat::Identity(6, 6);
    const double k = kRt2;
    expected(0, 5) = k;            // x_L <- p_A
    expected(0, 3) = -k * k / 2;   // x_L <- p_M
    expected(2, 4) = k;            // x_M <- x_A
    expected(2, 1) = k * k / 2;    // x_M <- p_L
    expected(4, 1) = k;            // x_A <- p_L
    expected(5, 3) = -k;           // p_A <- p_M
    CHECK((pm.reduced - expected).cwiseAbs().maxCoeff() < 1e-14);
    for (double l : pm.leakage) CHECK(std::abs(l) < 1e-13);
    CHECK(pm.symplectic_defect() < 1e-13);
}

TEST_CASE("custom projector sets are validated") {
    const SlicedSystem sys = build_sliced_transform(Scheme::Single, kRt2, 50);
    // Flat and uncentered ramp overlap, so they are not a valid projector set.
    CHECK_THROWS_AS(project(sys, {TemporalProfile(ProfileKind::Flat, 50),
                                  TemporalProfile(ProfileKind::Ramp, 50)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(project(sys, {TemporalProfile(ProfileKind::Flat, 49)}),
                    std::invalid_argument);
    const SlicedSystem dbl = build_sliced_transform(Scheme::Double, kRt2, 50, 10.0);
    CHECK_THROWS_AS(project(dbl, {TemporalProfile(ProfileKind::Flat, 50)}),
                    std::invalid_argument);
}

TEST_CASE("canonical single-cell projection converges to the pass matrix") {
    const SlicedSystem sys = build_sliced_transform(Scheme::Single, kRt2, 100);
    const ProjectedMap pm = project(sys);
    REQUIRE(pm.labels == single_cell_modes());
    const Mat analytic = single_cell_pass_matrix(kRt2);
    const double dev = (pm.reduced - analytic).cwiseAbs().maxCoeff();
    CHECK(dev < 5e-5);   // second-order slicing: ~2.9e-5 at N = 100
    CHECK(dev > 1e-6);
    CHECK(pm.symplectic_defect() < 1e-9);
}

TEST_CASE("only the ramp momenta leak, by kappa^4/60 per beam") {
    const SlicedSystem sys = build_sliced_transform(Scheme::Single, kRt2, 200);
    const ProjectedMap pm = project(sys);
    // column order: x_L p_L x_Lt p_Lt x_M p_M x_Mt p_Mt x_A p_A
    const double expected = std::pow(kRt2, 4) / 60.0;  // 1/15
    CHECK(pm.leakage[3] == Catch::Approx(expected).margin(2e-3));
    CHECK(pm.leakage[7] == Catch::Approx(expected).margin(2e-3));
    for (std::size_t j : {0u, 1u, 2u, 4u, 5u, 6u, 8u, 9u})
        CHECK(std::abs(pm.leakage[j]) < 1e-10);
}

TEST_CASE("single-cell convergence is second order in the slice count") {
    const auto rep = convergence_report(Scheme::Single, kRt2, {100, 1000});
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.monotone);
    CHECK(rep.rows[1].deviation_max < rep.rows[0].deviation_max);
    CHECK(rep.fitted_order > 1.9);
    CHECK(rep.fitted_order < 2.1);
    CHECK_THROWS_AS(convergence_report(Scheme::Single, kRt2, {100, 100}), std::invalid_argument);
    CHECK_THROWS_AS(convergence_report(Scheme::Single, kRt2, {}), std::invalid_argument);
}

TEST_CASE("two-cell projection recovers the sideband relations") {
    const double wt = 300.0;
    const SlicedSystem sys = build_sliced_transform(Scheme::Double, kRt2, 10000, wt);
    const ProjectedMap pm = project(sys);
    REQUIRE(pm.labels == two_cell_modes());
    const Mat analytic = two_cell_relations_matrix(kRt2);

    double dmax = 0.0, dsup = 0.0;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
            const double d = std::abs(pm.reduced(i, j) - analytic(i, j));
            dmax = std::max(dmax, d);
            if (std::abs(analytic(i, j)) > 1e-14) dsup = std::max(dsup, d);
        }
    // The nonzero pattern is reproduced far below the counter-rotating floor.
    CHECK(dsup < 5e-3);
    // The floor sits on analytically zero entries and scales with 1/omega_t.
    CHECK(dmax == Catch::Approx(6.66e-3).margin(1e-3));
}

TEST_CASE("the counter-rotating floor drops when the Larmor phase grows") {
    const auto r300 = convergence_report(Scheme::Double, kRt2, {10000}, 300.0);
    const auto r600 = convergence_report(Scheme::Double, kRt2, {20000}, 600.0);
    CHECK(r600.rows[0].deviation_max < 0.35 * r300.rows[0].deviation_max);
    CHECK(r300.rows[0].deviation_support < 5e-3);
    CHECK(r600.rows[0].deviation_support < 5e-3);
}

TEST_CASE("two-cell support deviation shrinks with finer slicing") {
    const double wt = 300.0;
    const auto coarse = project(build_sliced_transform(Scheme::Double, kRt2, 5000, wt));
    const auto fine = project(build_sliced_transform(Scheme::Double, kRt2, 10000, wt));
    const Mat analytic = two_cell_relations_matrix(kRt2);
    auto support_dev = [&](const ProjectedMap& pm) {
        double d = 0.0;
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j)
                if (std::abs(analytic(i, j)) > 1e-14)
                    d = std::max(d, std::abs(pm.reduced(i, j) - analytic(i, j)));
        return d;
    };
    CHECK(support_dev(fine) < support_dev(coarse));
}
