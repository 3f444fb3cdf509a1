#include "readout/gaussian.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace readout;

TEST_CASE("vacuum state has identity covariance and is physical") {
    const auto st = GaussianState::vacuum({"a", "b"});
    REQUIRE(st.n_modes() == 2);
    REQUIRE(st.mean().norm() == 0.0);
    REQUIRE((st.cov() - Mat::Identity(4, 4)).norm() == 0.0);
    REQUIRE(st.physicality() >= -1e-10);
}

TEST_CASE("coherent amplitude maps to sqrt(2) quadrature means") {
    const Eigen::Vector2d m1 = coherent_mean({1.0, 0.0});
    CHECK(m1(0) == Catch::Approx(std::sqrt(2.0)).margin(1e-15));
    CHECK(m1(1) == 0.0);
    const Eigen::Vector2d m2 = coherent_mean({0.0, 1.0});
    CHECK(m2(0) == 0.0);
    CHECK(m2(1) == Catch::Approx(std::sqrt(2.0)).margin(1e-15));
}

TEST_CASE("symplectic form squares to minus identity") {
    const Mat omega = symplectic_form(3);
    CHECK((omega * omega + Mat::Identity(6, 6)).norm() < 1e-15);
    CHECK((omega + omega.transpose()).norm() == 0.0);
}

TEST_CASE("non-symplectic matrices are rejected") {
    Mat s = 2.0 * Mat::Identity(2, 2);
    CHECK_THROWS_AS(SymplecticTransform(s, {"a"}), std::invalid_argument);
}

TEST_CASE("balanced beam splitter is an involution") {
    const Mat bs = beam_splitter("a", "b").matrix();
    CHECK((bs * bs - Mat::Identity(4, 4)).norm() < 1e-15);
}

TEST_CASE("wave plate has period four") {
    const Mat w = wave_plate("a").matrix();
    CHECK((w * w + Mat::Identity(2, 2)).norm() < 1e-15);
    CHECK((w * w * w * w - Mat::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("squeezer reaches the prescribed variance pair") {
    // e^{2r} = sqrt(3): covariance diag(1/sqrt(3), sqrt(3)).
    const double r = std::log(3.0) / 4.0;
    auto st = GaussianState::vacuum({"a"});
    st = apply_unitary(st, squeezer("a", r, Axis::X));
    CHECK(st.cov()(0, 0) == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-12));
    CHECK(st.cov()(1, 1) == Catch::Approx(std::sqrt(3.0)).margin(1e-12));
    CHECK(st.cov()(0, 1) == Catch::Approx(0.0).margin(1e-15));

    auto sp = GaussianState::vacuum({"a"});
    sp = apply_unitary(sp, squeezer("a", r, Axis::P));
    CHECK(sp.cov()(1, 1) == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-12));
}

TEST_CASE("losses compose multiplicatively in transmission") {
    auto make_probe = [] {
        auto st = GaussianState::vacuum({"a", "b"});
        st = apply_unitary(st, squeezer("a", 0.3, Axis::X));
        st.mean() << 0.4, -1.1, 0.2, 0.0;
        return st;
    };
    const double a1 = 0.2, a2 = 0.3;
    auto two_step = make_probe();
    two_step = apply_channel(two_step, loss_channel(a1, {"a", "b"}));
    two_step = apply_channel(two_step, loss_channel(a2, {"a", "b"}));
    auto one_step = make_probe();
    const double combined = 1.0 - (1.0 - a1) * (1.0 - a2);
    one_step = apply_channel(one_step, loss_channel(combined, {"a", "b"}));
    CHECK((two_step.cov() - one_step.cov()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((two_step.mean() - one_step.mean()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("loss parameter is range checked") {
    CHECK_THROWS_AS(loss_channel(-0.1, {"a"}), std::invalid_argument);
    CHECK_THROWS_AS(loss_channel(1.1, {"a"}), std::invalid_argument);
}

TEST_CASE("quantum-limited amplifier adds (G-1) units of noise") {
    auto st = GaussianState::vacuum({"a"});
    st.mean() << 1.0, 0.0;
    st = apply_channel(st, amplifier_channel(2.0, {"a"}));
    CHECK((st.cov() - 3.0 * Mat::Identity(2, 2)).norm() < 1e-12);
    CHECK(st.mean()(0) == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
    const AddedNoise n = added_noise(st, "a");
    CHECK(n.x == Catch::Approx(1.0).margin(1e-12));
    CHECK(n.p == Catch::Approx(1.0).margin(1e-12));
    CHECK(n.symmetric() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("deamplification is rejected") {
    CHECK_THROWS_AS(amplifier_channel(0.9, {"a"}), std::invalid_argument);
}

TEST_CASE("channels violating complete positivity are rejected") {
    const Mat x = Mat::Identity(2, 2);
    const Mat y = -0.5 * Mat::Identity(2, 2);
    CHECK_THROWS_AS(GaussianChannel(x, y, {"a"}), std::invalid_argument);
    CHECK(loss_channel(0.3, {"a"}).cp_defect() >= -1e-10);
    CHECK(amplifier_channel(2.5, {"a"}).cp_defect() >= -1e-10);
}

TEST_CASE("operators embed by label, identity elsewhere") {
    auto st = GaussianState::vacuum({"L", "M"});
    st = apply_unitary(st, squeezer("M", 0.7, Axis::X));
    CHECK((st.cov().topLeftCorner<2, 2>() - Mat::Identity(2, 2)).norm() < 1e-15);
    CHECK(st.mode_cov("M")(0, 0) == Catch::Approx(std::exp(-1.4)).margin(1e-12));
}

TEST_CASE("reduce keeps the requested marginal, rename relabels") {
    auto st = GaussianState::vacuum({"L", "M", "A"});
    st = apply_unitary(st, squeezer("A", 0.5, Axis::P));
    st.mean()(2 * st.mode_index("A")) = 2.0;
    auto red = st.reduce({"A", "L"});
    REQUIRE(red.n_modes() == 2);
    CHECK(red.labels()[0] == "A");
    CHECK(red.mode_cov("A")(1, 1) == Catch::Approx(std::exp(-1.0)).margin(1e-12));
    CHECK(red.mode_mean("A")(0) == 2.0);
    red.rename("A", "out");
    CHECK_NOTHROW(red.mode_index("out"));
    CHECK_THROWS_AS(red.mode_index("A"), std::invalid_argument);
}

TEST_CASE("fidelity of vacuum against displaced coherent targets") {
    const auto st = GaussianState::vacuum({"a"});
    CHECK(fidelity_coherent(st, "a", {0.0, 0.0}) == Catch::Approx(1.0).margin(1e-14));
    // |<alpha|0>|^2 = exp(-|alpha|^2)
    CHECK(fidelity_coherent(st, "a", coherent_mean({1.0, 0.0})) ==
          Catch::Approx(std::exp(-1.0)).margin(1e-14));
    CHECK(fidelity_coherent(st, "a", coherent_mean({0.0, -2.0})) ==
          Catch::Approx(std::exp(-4.0)).margin(1e-14));
}

TEST_CASE("fidelity is invariant under a joint phase rotation") {
    auto st = GaussianState::vacuum({"a"});
    st = apply_unitary(st, squeezer("a", 0.4, Axis::X));
    st.mean() << 0.3, -0.8;
    const Eigen::Vector2d target(1.0, 0.5);
    const double f0 = fidelity_coherent(st, "a", target);

    const double phi = 0.77;
    Mat rot(2, 2);
    rot << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
    const auto rotated = apply_unitary(st, SymplecticTransform(rot, {"a"}));
    const Eigen::Vector2d rt = rot * target;
    CHECK(fidelity_coherent(rotated, "a", rt) == Catch::Approx(f0).margin(1e-12));
}

TEST_CASE("state constructor validates shapes and labels") {
    CHECK_THROWS_AS(GaussianState({"a", "a"}, Vec::Zero(4), Mat::Identity(4, 4)),
                    std::invalid_argument);
    CHECK_THROWS_AS(GaussianState({"a"}, Vec::Zero(4), Mat::Identity(4, 4)),
                    std::invalid_argument);
    Mat asym = Mat::Identity(2, 2);
    asym(0, 1) = 0.5;
    CHECK_THROWS_AS(GaussianState({"a"}, Vec::Zero(2), asym), std::invalid_argument);
}
