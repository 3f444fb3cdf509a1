#pragma once

// Atomic-memory readout protocols.
//
// A quantum state stored in an atomic spin-wave mode is mapped onto an
// outgoing light beam by a double-pass Faraday interaction.  The beam is
// decomposed into orthonormal temporal modes: a flat mode and a linear-ramp
// ("tilde") mode per arm.  Single-cell register, interleaved quadratures:
//
//   L  flat forward arm      Lt  ramp forward arm
//   M  flat return arm       Mt  ramp return arm
//   A  atomic mode (holds the state to be retrieved)
//
// The pass matrix keeps every tracked row exactly symplectic; couplings into
// untracked higher-order temporal modes appear only as column leakage of the
// ramp-mode momenta (checked against the sliced propagator in oracle.hpp).

#include "gaussian.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace readout {

inline const std::vector<ModeLabel>& single_cell_modes() {
    static const std::vector<ModeLabel> m{"L", "Lt", "M", "Mt", "A"};
    return m;
}

// Microscopic knobs behind the dimensionless coupling.
struct PhysicalParams {
    double a;        // single-photon/single-atom coupling (interaction units)
    double n_photons;  // photon number of the strong classical component
    double pulse_t;  // pulse duration
    double jx;       // macroscopic spin projection along x
    double omega;    // Larmor frequency (rad / time)

    double omega_t() const { return omega * pulse_t; }
};

inline double kappa_from_physical(const PhysicalParams& p) {
    if (p.a < 0.0 || !(p.n_photons > 0.0) || !(p.pulse_t > 0.0) || !(p.jx > 0.0) || p.omega < 0.0)
        throw std::invalid_argument("physical parameters out of range");
    return p.a * std::sqrt(p.n_photons * p.jx / 2.0);
}

// 10x10 symplectic action of one double pass with coupling kappa.
inline Mat single_cell_pass_matrix(double kappa) {
    const double k = kappa;
    const double k2 = k * k;
    const double rt3 = std::sqrt(3.0);
    enum { L = 0, Lt = 1, M = 2, Mt = 3, A = 4 };
    auto x = [](int m) { return 2 * m; };
    auto p = [](int m) { return 2 * m + 1; };
    Mat s = Mat::Identity(10, 10);
    s(x(L), p(A)) = k;
    s(x(L), p(M)) = -k2 / 2.0;
    s(x(L), p(Mt)) = -k2 / (2.0 * rt3);
    s(x(M), x(A)) = k;
    s(x(M), p(L)) = k2 / 2.0;
    s(x(M), p(Lt)) = k2 / (2.0 * rt3);
    s(x(Lt), p(M)) = k2 / (2.0 * rt3);
    s(x(Mt), p(L)) = -k2 / (2.0 * rt3);
    s(x(A), p(L)) = k;
    s(p(A), p(M)) = -k;
    return s;
}

inline SymplecticTransform single_cell_pass(double kappa) {
    return SymplecticTransform(single_cell_pass_matrix(kappa), single_cell_modes());
}

// Ideal readout rotates the stored mean: (x, p) -> (p, -x).
inline Eigen::Matrix2d nominal_rotation() {
    Eigen::Matrix2d r;
    r << 0, 1,
        -1, 0;
    return r;
}

// Recombination stage after a pass: quarter-wave plate on the return beam
// (M, and Mt when present), then the balanced beam splitter on (L, M).
// Afterwards L carries the readout port and M the phase-conjugate aux port.
inline GaussianState recombine(GaussianState st) {
    st = apply_unitary(st, wave_plate("M"));
    const auto& ls = st.labels();
    if (std::find(ls.begin(), ls.end(), ModeLabel("Mt")) != ls.end())
        st = apply_unitary(st, wave_plate("Mt"));
    return apply_unitary(st, beam_splitter("L", "M"));
}

// Input squeezing of the four light modes.  Flat modes L, M share one
// squeezer setting; ramp modes Lt, Mt share another.
struct BeamSqueezing {
    double r_flat = 0.0;
    Axis axis_flat = Axis::X;
    double r_tilde = 0.0;
    Axis axis_tilde = Axis::P;
};

struct SingleCellSpec {
    double kappa = std::sqrt(2.0);
    double loss = 0.0;  // power fraction lost at cell entry and again at exit
    std::optional<BeamSqueezing> squeezing;
    std::optional<double> amp_gain;  // phase-insensitive gain applied to the readout beam
    // Replace the ramp-mode inputs by the strong-squeezing limit: p variance
    // exactly zero, x variance left at vacuum.  Only the p quadratures reach
    // the readout beam, so the x side is irrelevant.
    bool ideal_tilde_modes = false;
};

struct ReadoutResult {
    GaussianState output;  // readout beam, mode "out"
    GaussianState aux;     // phase-conjugate recombination port, mode "aux"
    GaussianState memory;  // atomic mode after the pass, mode "A"
    double gain;           // amplitude gain from stored mean to output mean
    double nbar;           // input-referred added photons per quadrature, symmetrized
    double fidelity;       // overlap with the ideally rotated coherent target

    // Jacobian of the output mean w.r.t. the stored mean; at unit gain a
    // signed permutation.
    Eigen::Matrix2d gain_matrix() const { return gain * nominal_rotation(); }
};

// Full single-cell pipeline: prepare the stored mean, squeeze the light
// inputs, entry loss, double pass, exit loss, recombine, optional amplifier.
// The entry wall is a no-op on vacuum inputs but degrades squeezed ones;
// modeling it is what makes the squeezed-input optima come out right.
inline ReadoutResult run_single_cell(const SingleCellSpec& spec,
                                     const Eigen::Vector2d& stored_mean) {
    GaussianState st = GaussianState::vacuum(single_cell_modes());
    st.mean().segment<2>(2 * st.mode_index("A")) = stored_mean;

    if (spec.squeezing) {
        const auto& sq = *spec.squeezing;
        for (const char* m : {"L", "M"})
            st = apply_unitary(st, squeezer(m, sq.r_flat, sq.axis_flat));
        for (const char* m : {"Lt", "Mt"})
            st = apply_unitary(st, squeezer(m, sq.r_tilde, sq.axis_tilde));
    }
    if (spec.ideal_tilde_modes) {
        for (const char* m : {"Lt", "Mt"}) {
            const int i = 2 * st.mode_index(m);
            st.cov()(i, i) = 1.0;
            st.cov()(i + 1, i + 1) = 0.0;
        }
    }

    const std::vector<ModeLabel> light{"L", "Lt", "M", "Mt"};
    if (spec.loss > 0.0) st = apply_channel(st, loss_channel(spec.loss, light));
    st = apply_unitary(st, single_cell_pass(spec.kappa));
    if (spec.loss > 0.0) st = apply_channel(st, loss_channel(spec.loss, light));

    st = recombine(std::move(st));

    const double g_amp = spec.amp_gain.value_or(1.0);
    if (spec.amp_gain) st = apply_channel(st, amplifier_channel(g_amp, {"L"}));

    ReadoutResult r{st.reduce({"L"}), st.reduce({"M"}), st.reduce({"A"}),
                    0.0, 0.0, 0.0};
    r.output.rename("L", "out");
    r.aux.rename("M", "aux");

    r.gain = std::sqrt((1.0 - spec.loss) * spec.kappa * spec.kappa / 2.0 * g_amp);
    const Eigen::Matrix2d c = r.output.mode_cov("out");
    r.nbar = 0.25 * (c(0, 0) + c(1, 1)) / (r.gain * r.gain) - 0.5;
    const Eigen::Vector2d target = nominal_rotation() * stored_mean;
    r.fidelity = fidelity_coherent(r.output, "out", target);
    return r;
}

inline ReadoutResult run_single_cell(const SingleCellSpec& spec,
                                     std::complex<double> alpha = {0.0, 0.0}) {
    return run_single_cell(spec, Eigen::Vector2d(coherent_mean(alpha)));
}

// The readout is a 1 -> 2 cloner: the beam and the post-pass atomic state are
// two copies of the stored input.  Added noise variances of the copies, each
// referred to its own gain (beam: result gain; atoms: unit gain).
struct CloningVariances {
    double v_out;
    double v_mem;
    double product() const { return v_out * v_mem; }
};

inline CloningVariances cloning_check(const ReadoutResult& r) {
    const Eigen::Matrix2d c = r.memory.mode_cov("A");
    return {r.nbar, 0.25 * (c(0, 0) + c(1, 1)) - 0.5};
}

// Best fidelity of a measure-and-prepare strategy on a coherent input.
inline double classical_benchmark() { return 0.5; }

// Two cells with opposite Larmor rotation, passed in sequence.  The first
// coupling is boosted so that after both lossy passes the retrieved mean
// comes out at unit gain.
struct TwoCellSpec {
    double kappa1;
    double kappa2;
    double loss;

    // Unit overall gain requires kappa1 * (1 - loss) == kappa2.
    bool ratio_ok(double tol = 1e-9) const {
        return std::abs(kappa1 * (1.0 - loss) - kappa2) <= tol * std::max(1.0, std::abs(kappa2));
    }
};

inline TwoCellSpec two_cell_spec_unit_gain(double loss) {
    if (!(loss >= 0.0 && loss < 1.0)) throw std::invalid_argument("loss must lie in [0, 1)");
    const double c = 1.0 - loss;
    return {std::sqrt(2.0 / (c * c * c)), std::sqrt(2.0 / c), loss};
}

struct TwoCellResult {
    double nbar;
    double fidelity;
};

// Noise bookkeeping for the sequential two-cell readout.  Components:
// [0] readout quadrature of the beam, [1..4] flat/ramp light momenta feeding
// it, [5] first-pass atomic quadrature, [6] second-pass atomic quadrature.
// Loss acts on the five light components after each pass and between passes.
inline TwoCellResult run_two_cell(const TwoCellSpec& spec) {
    using M7 = Eigen::Matrix<double, 7, 7>;
    const double rt2 = std::sqrt(2.0), rt3 = std::sqrt(3.0);
    const double k1 = spec.kappa1, k2 = spec.kappa2, a = spec.loss;

    M7 s1 = M7::Identity();
    s1(0, 1) = -k1 * k1 / 4.0;
    s1(0, 2) = k1 * k1 / 4.0;
    s1(0, 3) = k1 * k1 / (4.0 * rt3);
    s1(0, 4) = -k1 * k1 / (4.0 * rt3);
    s1(0, 5) = k1 / rt2;
    s1(5, 1) = -k1 / rt2;
    s1(5, 2) = k1 / rt2;

    M7 s2 = M7::Identity();
    s2(0, 1) = -k2 * k2 / 4.0;
    s2(0, 2) = -k2 * k2 / 4.0;
    s2(0, 3) = -k2 * k2 / (4.0 * rt3);
    s2(0, 4) = -k2 * k2 / (4.0 * rt3);
    s2(0, 6) = k2 / rt2;
    s2(6, 1) = -k2 / rt2;
    s2(6, 2) = -k2 / rt2;

    M7 sa = M7::Identity();
    M7 g = M7::Zero();
    for (int i = 0; i < 5; ++i) {
        sa(i, i) = std::sqrt(1.0 - a);
        g(i, i) = a;
    }

    M7 gamma = M7::Identity();
    M7 g1 = sa * s1 * gamma * s1.transpose() * sa.transpose() + g;
    M7 g2 = sa * s2 * (sa * g1 * sa.transpose() + g) * s2.transpose() * sa.transpose() + g;

    TwoCellResult r{};
    r.nbar = 0.25 * (g2(0, 0) + g2(1, 1) + 2.0 * g2(0, 1)) - 0.5;
    r.fidelity = 1.0 / (1.0 + r.nbar);
    return r;
}

// Temporal-mode register of the two-cell scheme: cosine/sine carriers of the
// flat and ramp envelopes per arm, plus the two atomic combinations
// Ap = (A1 + A2)/sqrt(2) and Am = (A1 - A2)/sqrt(2).
inline const std::vector<ModeLabel>& two_cell_modes() {
    static const std::vector<ModeLabel> m{"LC", "LS", "LCt", "LSt", "MC",
                                          "MS", "MCt", "MSt", "Ap", "Am"};
    return m;
}

// 20x20 symplectic action of one double pass through both cells, written in
// the atomic rotating frames.  The cosine sector couples to Ap like the
// single cell; the sine sector couples to Am with conjugate phases.
inline Mat two_cell_relations_matrix(double kappa) {
    const double k = kappa;
    const double k2 = k * k;
    const double rt3 = std::sqrt(3.0);
    enum { LC = 0, LS = 1, LCt = 2, LSt = 3, MC = 4, MS = 5, MCt = 6, MSt = 7, Ap = 8, Am = 9 };
    auto x = [](int m) { return 2 * m; };
    auto p = [](int m) { return 2 * m + 1; };
    Mat s = Mat::Identity(20, 20);

    s(x(LC), p(Ap)) = k;
    s(x(LC), p(MC)) = -k2 / 2.0;
    s(x(LC), p(MCt)) = -k2 / (2.0 * rt3);
    s(x(MC), x(Ap)) = k;
    s(x(MC), p(LC)) = k2 / 2.0;
    s(x(MC), p(LCt)) = k2 / (2.0 * rt3);
    s(x(LCt), p(MC)) = k2 / (2.0 * rt3);
    s(x(MCt), p(LC)) = -k2 / (2.0 * rt3);
    s(x(Ap), p(LC)) = k;
    s(p(Ap), p(MC)) = -k;

    s(x(LS), x(Am)) = -k;
    s(x(LS), p(MS)) = -k2 / 2.0;
    s(x(LS), p(MSt)) = -k2 / (2.0 * rt3);
    s(x(MS), p(Am)) = k;
    s(x(MS), p(LS)) = k2 / 2.0;
    s(x(MS), p(LSt)) = k2 / (2.0 * rt3);
    s(x(LSt), p(MS)) = k2 / (2.0 * rt3);
    s(x(MSt), p(LS)) = -k2 / (2.0 * rt3);
    s(x(Am), p(MS)) = k;
    s(p(Am), p(LS)) = k;
    return s;
}

}  // namespace readout
