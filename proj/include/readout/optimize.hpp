#pragma once

// Closed-form optimal parameters, noise, and fidelity for the lossy and
// squeezed readout variants, plus a numeric optimizer that recovers the same
// optima from the channel pipelines without using any closed form.

#include "protocols.hpp"

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace readout {

enum class Branch { NoAmp, Amp };

struct Optimum {
    double loss = 0.0;
    double kappa_sq = 0.0;
    std::optional<double> kappa2_sq;  // second-cell coupling (two-cell scheme)
    double amp_gain = 1.0;
    std::optional<double> squeeze_v;  // physical variance of the squeezed flat x quadratures
    double nbar = 0.0;
    double fidelity = 0.0;
    Branch branch = Branch::NoAmp;
};

namespace detail {
inline void check_loss(double a) {
    if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("loss must lie in [0, 1)");
}
}  // namespace detail

// Loss level beyond which amplifying the readout beam starts to pay off.
inline constexpr double kAmplifierBranchLoss = 2.0 / 3.0;

// Forced-branch variant; both branches agree at the crossover loss.
inline Optimum single_cell_lossy(double a, Branch branch) {
    detail::check_loss(a);
    const double c = 1.0 - a;
    Optimum o;
    o.loss = a;
    o.branch = branch;
    if (branch == Branch::NoAmp) {
        o.kappa_sq = 2.0 / c;
        o.amp_gain = 1.0;
        o.nbar = 1.0 / (3.0 * c);
        o.fidelity = 3.0 * c / (4.0 - 3.0 * a);
    } else {
        o.kappa_sq = 2.0 * std::sqrt(3.0 / c);
        o.amp_gain = 2.0 / (o.kappa_sq * c);
        o.nbar = 2.0 / std::sqrt(3.0 * c) - 1.0;
        o.fidelity = 0.5 * std::sqrt(3.0 * c);
    }
    return o;
}

inline Optimum single_cell_lossy(double a) {
    return single_cell_lossy(a, a <= kAmplifierBranchLoss ? Branch::NoAmp : Branch::Amp);
}

inline Optimum two_cell_lossy(double a) {
    detail::check_loss(a);
    const double c = 1.0 - a;
    const double c3 = c * c * c;
    Optimum o;
    o.loss = a;
    o.kappa_sq = 2.0 / c3;
    o.kappa2_sq = 2.0 / c;
    o.amp_gain = 1.0;
    o.nbar = (1.0 - a + 0.5 * a * a) / (3.0 * c3);
    o.fidelity = 3.0 * c3 / (4.0 - 10.0 * a + 9.5 * a * a - 3.0 * a * a * a);
    o.branch = Branch::NoAmp;
    return o;
}

// Lossless fidelity with the same squeezing r (x axis) on all four light
// modes; the anti-squeezed ramp momenta make large r counterproductive.
inline double uniform_squeeze(double r) {
    return 12.0 / (12.0 + 3.0 * std::exp(-2.0 * r) + std::exp(2.0 * r));
}

inline Optimum uniform_squeeze_optimum() {
    Optimum o;
    o.loss = 0.0;
    o.kappa_sq = 2.0;
    o.amp_gain = 1.0;
    const double r = std::log(3.0) / 4.0;  // e^{2r} = sqrt(3)
    o.squeeze_v = 0.5 * std::exp(-2.0 * r);
    o.fidelity = 6.0 / (6.0 + std::sqrt(3.0));
    o.nbar = 1.0 / o.fidelity - 1.0;
    o.branch = Branch::NoAmp;
    return o;
}

// Loss level where the selectively squeezed scheme switches to the
// amplified branch.
inline double selective_threshold() { return 0.5 * (3.0 - std::sqrt(7.0 / 3.0)); }

// Optimal selective squeezing: flat x quadratures squeezed to variance V,
// ramp momenta squeezed arbitrarily strongly (zero variance in the closed
// forms; the pipelines model them via ideal_tilde_modes).
inline Optimum selective_squeeze_lossy(double a, Branch branch) {
    detail::check_loss(a);
    const double c = 1.0 - a;
    Optimum o;
    o.loss = a;
    o.branch = branch;
    if (branch == Branch::NoAmp) {
        o.kappa_sq = 2.0 / c;
        o.squeeze_v = a / (2.0 * c);
        o.amp_gain = 1.0;
        o.nbar = a * c + a / (3.0 * c);
    } else {
        o.kappa_sq = 2.0 * std::sqrt(3.0 * (2.0 - a) / c);
        o.squeeze_v = 0.25 * std::abs(o.kappa_sq - 2.0);
        o.amp_gain = 2.0 / (o.kappa_sq * c);
        o.nbar = 2.0 * a * std::sqrt((2.0 - a) / (3.0 * c)) - a;
    }
    o.fidelity = 1.0 / (1.0 + o.nbar);
    return o;
}

inline Optimum selective_squeeze_lossy(double a) {
    return selective_squeeze_lossy(a, a <= selective_threshold() ? Branch::NoAmp : Branch::Amp);
}

// ---- numeric side -------------------------------------------------------

struct ScalarOptimum {
    double x;
    double fx;
};

// Golden-section maximization on [lo, hi]; assumes unimodality (kinks fine).
template <class F>
ScalarOptimum golden_max(F&& f, double lo, double hi, double xtol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

namespace detail {

// Scan the grid, then refine around the best point.  A boundary maximum is
// legitimate (refined against its single neighbor); a grid on which the
// objective is nowhere finite is a bracket failure and reports the scan.
template <class F>
ScalarOptimum scan_then_golden(F&& f, const std::vector<double>& grid, double xtol) {
    if (grid.size() < 2) throw std::invalid_argument("bracket grid needs at least 2 points");
    std::vector<double> fs(grid.size());
    std::size_t best = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        fs[i] = f(grid[i]);
        if (std::isfinite(fs[i]) && (best == grid.size() || fs[i] > fs[best])) best = i;
    }
    if (best == grid.size()) {
        std::ostringstream msg;
        msg << "bracket failure: objective not finite on the scanned grid;";
        for (std::size_t i = 0; i < grid.size(); ++i) msg << " f(" << grid[i] << ")=" << fs[i];
        throw std::runtime_error(msg.str());
    }
    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[best + 1 < grid.size() ? best + 1 : best];
    return golden_max(f, lo, hi, xtol);
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
    return g;
}

inline std::vector<double> lin_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return g;
}

// Unit-gain pipeline noise: run the protocol without the output stage, then
// normalize the mean transfer to 1 with a quantum-limited amplifier (raw
// gain < 1) or a vacuum attenuator (raw gain > 1).
inline double unit_gain_nbar(const SingleCellSpec& spec) {
    SingleCellSpec s = spec;
    s.amp_gain.reset();
    const ReadoutResult r = run_single_cell(s);
    const Eigen::Matrix2d c = r.output.mode_cov("out");
    const double v_pre = 0.25 * (c(0, 0) + c(1, 1));  // physical variance
    const double cs = (1.0 - spec.loss) * spec.kappa * spec.kappa / 2.0;
    const double g = 1.0 / cs;
    return g >= 1.0 ? (v_pre + 0.5) / cs - 1.0 : (v_pre - 0.5) / cs;
}

inline double single_objective(double a, double kappa_sq) {
    SingleCellSpec s;
    s.kappa = std::sqrt(kappa_sq);
    s.loss = a;
    return 1.0 / (1.0 + unit_gain_nbar(s));
}

inline double uniform_objective(double r) {
    SingleCellSpec s;
    s.squeezing = BeamSqueezing{r, Axis::X, r, Axis::X};
    return 1.0 / (1.0 + unit_gain_nbar(s));
}

inline double selective_objective(double a, double kappa_sq, double v) {
    SingleCellSpec s;
    s.kappa = std::sqrt(kappa_sq);
    s.loss = a;
    s.squeezing = BeamSqueezing{-0.5 * std::log(2.0 * v), Axis::X, 0.0, Axis::P};
    s.ideal_tilde_modes = true;
    return 1.0 / (1.0 + unit_gain_nbar(s));
}

}  // namespace detail

enum class OptimizerScheme { SingleCell, UniformSqueeze, SelectiveSqueeze };

enum class FreeParam { KappaSq, AmpGain, SqueezeV, SqueezeR };

// Maximize the pipeline fidelity over the scheme's free parameters by
// grid-bracketed golden-section search (nested when two parameters are
// free).  The amplifier gain is never searched: unit mean transfer pins it
// to G = 2/(kappa^2 (1-A)), so listing AmpGain among the frees is accepted
// and ignored.  Parameter tolerance 1e-10.
inline Optimum numeric_optimize(OptimizerScheme scheme, double a,
                                std::vector<FreeParam> frees = {}) {
    detail::check_loss(a);
    constexpr double kXtol = 1e-10;
    const auto has = [&frees](FreeParam p) {
        for (FreeParam q : frees) {
            if (q == p) return true;
        }
        return frees.empty();
    };
    const double c = 1.0 - a;

    Optimum o;
    o.loss = a;
    switch (scheme) {
        case OptimizerScheme::SingleCell: {
            if (!has(FreeParam::KappaSq))
                throw std::invalid_argument("single-cell search needs kappa_sq free");
            auto f = [a](double ksq) { return detail::single_objective(a, ksq); };
            const ScalarOptimum s = detail::scan_then_golden(f, detail::log_grid(0.05, 400.0, 160), kXtol);
            o.kappa_sq = s.x;
            o.fidelity = s.fx;
            break;
        }
        case OptimizerScheme::UniformSqueeze: {
            if (a != 0.0)
                throw std::invalid_argument("uniform squeezing is a lossless variant; loss must be 0");
            if (!has(FreeParam::SqueezeR))
                throw std::invalid_argument("uniform search needs the squeezing parameter free");
            const ScalarOptimum s =
                detail::scan_then_golden(detail::uniform_objective, detail::lin_grid(0.0, 2.0, 200), kXtol);
            o.kappa_sq = 2.0;
            o.squeeze_v = 0.5 * std::exp(-2.0 * s.x);
            o.fidelity = s.fx;
            break;
        }
        case OptimizerScheme::SelectiveSqueeze: {
            if (!has(FreeParam::KappaSq) || !has(FreeParam::SqueezeV))
                throw std::invalid_argument("selective search needs kappa_sq and squeeze_v free");
            const auto best_v = [a, kXtol](double ksq) {
                auto g = [a, ksq](double logv) {
                    return detail::selective_objective(a, ksq, std::exp(logv));
                };
                return detail::scan_then_golden(g, detail::lin_grid(std::log(1e-7), std::log(20.0), 120),
                                                kXtol);
            };
            auto f = [&best_v](double ksq) { return best_v(ksq).fx; };
            const ScalarOptimum s = detail::scan_then_golden(f, detail::log_grid(0.05, 400.0, 120), kXtol);
            o.kappa_sq = s.x;
            o.squeeze_v = std::exp(best_v(s.x).x);
            o.fidelity = s.fx;
            break;
        }
    }
    o.nbar = 1.0 / o.fidelity - 1.0;
    const double g = 2.0 / (o.kappa_sq * c);
    o.amp_gain = g;
    o.branch = g > 1.0 + 1e-9 ? Branch::Amp : Branch::NoAmp;
    return o;
}

}  // namespace readout
