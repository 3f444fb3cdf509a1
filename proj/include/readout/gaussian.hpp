#pragma once

// Gaussian states and maps on a register of labeled bosonic modes.
//
// Conventions (fixed across the library):
//   * quadrature ordering is interleaved: (x1, p1, x2, p2, ...)
//   * vacuum covariance is the identity; physical covariances are cov/2
//   * a coherent amplitude alpha has mean (sqrt(2) Re a, sqrt(2) Im a)
//   * symplectic form Omega = blockdiag([[0, 1], [-1, 0]], ...)

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace readout {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using ModeLabel = std::string;

inline constexpr double kSymplecticTol = 1e-12;
inline constexpr double kCpTol = 1e-10;

inline Mat symplectic_form(int n_modes) {
    Mat omega = Mat::Zero(2 * n_modes, 2 * n_modes);
    for (int i = 0; i < n_modes; ++i) {
        omega(2 * i, 2 * i + 1) = 1.0;
        omega(2 * i + 1, 2 * i) = -1.0;
    }
    return omega;
}

inline Eigen::Vector2d coherent_mean(std::complex<double> alpha) {
    return {std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag()};
}

class GaussianState {
  public:
    GaussianState(std::vector<ModeLabel> labels, Vec mean, Mat cov)
        : labels_(std::move(labels)), mean_(std::move(mean)), cov_(std::move(cov)) {
        const int d = 2 * static_cast<int>(labels_.size());
        if (labels_.empty()) throw std::invalid_argument("state needs at least one mode");
        if (mean_.size() != d || cov_.rows() != d || cov_.cols() != d)
            throw std::invalid_argument("mean/cov dimensions do not match mode count");
        const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
        if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw std::invalid_argument("covariance must be symmetric");
        for (std::size_t i = 0; i < labels_.size(); ++i)
            for (std::size_t j = i + 1; j < labels_.size(); ++j)
                if (labels_[i] == labels_[j])
                    throw std::invalid_argument("duplicate mode label: " + labels_[i]);
    }

    static GaussianState vacuum(std::vector<ModeLabel> labels) {
        const int d = 2 * static_cast<int>(labels.size());
        return GaussianState(std::move(labels), Vec::Zero(d), Mat::Identity(d, d));
    }

    int n_modes() const { return static_cast<int>(labels_.size()); }
    const std::vector<ModeLabel>& labels() const { return labels_; }
    const Vec& mean() const { return mean_; }
    const Mat& cov() const { return cov_; }
    Vec& mean() { return mean_; }
    Mat& cov() { return cov_; }

    int mode_index(const ModeLabel& label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) throw std::invalid_argument("unknown mode label: " + label);
        return static_cast<int>(it - labels_.begin());
    }

    Eigen::Vector2d mode_mean(const ModeLabel& label) const {
        const int i = 2 * mode_index(label);
        return mean_.segment<2>(i);
    }

    Eigen::Matrix2d mode_cov(const ModeLabel& label) const {
        const int i = 2 * mode_index(label);
        return cov_.block<2, 2>(i, i);
    }

    // Marginal state of a subset of modes, in the order given.
    GaussianState reduce(const std::vector<ModeLabel>& subset) const {
        std::vector<int> q;
        for (const auto& l : subset) {
            const int i = 2 * mode_index(l);
            q.push_back(i);
            q.push_back(i + 1);
        }
        const int d = static_cast<int>(q.size());
        Vec m(d);
        Mat c(d, d);
        for (int a = 0; a < d; ++a) {
            m(a) = mean_(q[a]);
            for (int b = 0; b < d; ++b) c(a, b) = cov_(q[a], q[b]);
        }
        return GaussianState(subset, std::move(m), std::move(c));
    }

    void rename(const ModeLabel& from, const ModeLabel& to) {
        labels_[static_cast<std::size_t>(mode_index(from))] = to;
    }

    // Smallest eigenvalue of cov + i*Omega; >= -tol for a physical state.
    double physicality() const {
        Eigen::MatrixXcd h = cov_.cast<std::complex<double>>();
        h += std::complex<double>(0.0, 1.0) * symplectic_form(n_modes()).cast<std::complex<double>>();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        return es.eigenvalues().minCoeff();
    }

  private:
    std::vector<ModeLabel> labels_;
    Vec mean_;
    Mat cov_;
};

// Linear symplectic map S acting on the listed target modes; S Omega S^T = Omega.
class SymplecticTransform {
  public:
    SymplecticTransform(Mat s, std::vector<ModeLabel> targets, double tol = kSymplecticTol)
        : s_(std::move(s)), targets_(std::move(targets)) {
        const int d = 2 * static_cast<int>(targets_.size());
        if (s_.rows() != d || s_.cols() != d)
            throw std::invalid_argument("transform dimension does not match target modes");
        const Mat omega = symplectic_form(static_cast<int>(targets_.size()));
        // Scale-aware floor keeps large-coupling matrices from tripping on rounding.
        const double scale = s_.cwiseAbs().rowwise().sum().maxCoeff() *
                             s_.cwiseAbs().colwise().sum().maxCoeff();
        const double eff = std::max(tol, 32.0 * std::numeric_limits<double>::epsilon() * scale);
        const double dev = (s_ * omega * s_.transpose() - omega).norm();
        if (dev > eff)
            throw std::invalid_argument("non-symplectic matrix (deviation " + std::to_string(dev) + ")");
    }

    const Mat& matrix() const { return s_; }
    const std::vector<ModeLabel>& targets() const { return targets_; }

  private:
    Mat s_;
    std::vector<ModeLabel> targets_;
};

// Deterministic Gaussian CP map cov -> X cov X^T + Y on the listed target modes.
// Complete positivity: Y + i*Omega - i*X Omega X^T >= -kCpTol.
class GaussianChannel {
  public:
    GaussianChannel(Mat x, Mat y, std::vector<ModeLabel> targets)
        : x_(std::move(x)), y_(std::move(y)), targets_(std::move(targets)) {
        const int d = 2 * static_cast<int>(targets_.size());
        if (x_.rows() != d || x_.cols() != d || y_.rows() != d || y_.cols() != d)
            throw std::invalid_argument("channel dimension does not match target modes");
        if ((y_ - y_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("channel noise matrix must be symmetric");
        if (cp_defect() < -kCpTol)
            throw std::invalid_argument("channel violates complete positivity");
    }

    // Smallest eigenvalue of Y + i Omega - i X Omega X^T (>= -kCpTol when CP).
    double cp_defect() const {
        const Mat omega = symplectic_form(static_cast<int>(targets_.size()));
        Eigen::MatrixXcd h = y_.cast<std::complex<double>>();
        const std::complex<double> im(0.0, 1.0);
        h += im * omega.cast<std::complex<double>>();
        h -= im * (x_ * omega * x_.transpose()).cast<std::complex<double>>();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        return es.eigenvalues().minCoeff();
    }

    const Mat& x() const { return x_; }
    const Mat& y() const { return y_; }
    const std::vector<ModeLabel>& targets() const { return targets_; }

  private:
    Mat x_;
    Mat y_;
    std::vector<ModeLabel> targets_;
};

namespace detail {

// Embed a 2m x 2m block acting on `targets` into the full register (identity elsewhere).
inline Mat embed(const GaussianState& state, const Mat& block,
                 const std::vector<ModeLabel>& targets) {
    const int d = 2 * state.n_modes();
    Mat full = Mat::Identity(d, d);
    std::vector<int> q;
    for (const auto& l : targets) {
        const int i = 2 * state.mode_index(l);
        q.push_back(i);
        q.push_back(i + 1);
    }
    for (std::size_t a = 0; a < q.size(); ++a) {
        full.row(q[a]).setZero();
        for (std::size_t b = 0; b < q.size(); ++b) full(q[a], q[b]) = block(a, b);
    }
    return full;
}

inline Mat embed_additive(const GaussianState& state, const Mat& block,
                          const std::vector<ModeLabel>& targets) {
    const int d = 2 * state.n_modes();
    Mat full = Mat::Zero(d, d);
    std::vector<int> q;
    for (const auto& l : targets) {
        const int i = 2 * state.mode_index(l);
        q.push_back(i);
        q.push_back(i + 1);
    }
    for (std::size_t a = 0; a < q.size(); ++a)
        for (std::size_t b = 0; b < q.size(); ++b) full(q[a], q[b]) = block(a, b);
    return full;
}

}  // namespace detail

inline GaussianState apply_unitary(const GaussianState& state, const SymplecticTransform& u) {
    const Mat s = detail::embed(state, u.matrix(), u.targets());
    Mat c = s * state.cov() * s.transpose();
    c = 0.5 * (c + c.transpose());  // congruence is symmetric; stop roundoff drift
    return GaussianState(state.labels(), s * state.mean(), std::move(c));
}

inline GaussianState apply_channel(const GaussianState& state, const GaussianChannel& ch) {
    const Mat x = detail::embed(state, ch.x(), ch.targets());
    const Mat y = detail::embed_additive(state, ch.y(), ch.targets());
    Mat c = x * state.cov() * x.transpose() + y;
    c = 0.5 * (c + c.transpose());
    return GaussianState(state.labels(), x * state.mean(), std::move(c));
}

// Beam attenuation by power fraction A in [0, 1] on each listed mode.
inline GaussianChannel loss_channel(double a, std::vector<ModeLabel> targets) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("loss fraction must lie in [0, 1]");
    const int d = 2 * static_cast<int>(targets.size());
    return GaussianChannel(std::sqrt(1.0 - a) * Mat::Identity(d, d), a * Mat::Identity(d, d),
                           std::move(targets));
}

// Phase-insensitive amplifier with power gain G >= 1 (quantum limited).
inline GaussianChannel amplifier_channel(double g, std::vector<ModeLabel> targets) {
    if (!(g >= 1.0)) throw std::invalid_argument("amplifier gain must be >= 1");
    const int d = 2 * static_cast<int>(targets.size());
    return GaussianChannel(std::sqrt(g) * Mat::Identity(d, d), (g - 1.0) * Mat::Identity(d, d),
                           std::move(targets));
}

// Balanced beam splitter: out_a = (a + b)/sqrt(2), out_b = (a - b)/sqrt(2).
inline SymplecticTransform beam_splitter(ModeLabel a, ModeLabel b) {
    Mat s(4, 4);
    const double r = 1.0 / std::sqrt(2.0);
    s << r, 0, r, 0,
         0, r, 0, r,
         r, 0, -r, 0,
         0, r, 0, -r;
    return SymplecticTransform(std::move(s), {std::move(a), std::move(b)});
}

// Quadrature exchange x -> p, p -> -x (quarter-wave rotation of the mode).
inline SymplecticTransform wave_plate(ModeLabel target) {
    Mat s(2, 2);
    s << 0, 1,
        -1, 0;
    return SymplecticTransform(std::move(s), {std::move(target)});
}

enum class Axis { X, P };

// Single-mode squeezer: with axis X, x -> exp(-r) x and p -> exp(+r) p.
inline SymplecticTransform squeezer(ModeLabel target, double r, Axis axis = Axis::X) {
    Mat s = Mat::Zero(2, 2);
    const double e = std::exp(axis == Axis::X ? -r : r);
    s(0, 0) = e;
    s(1, 1) = 1.0 / e;
    return SymplecticTransform(std::move(s), {std::move(target)});
}

// Thermal-equivalent added noise of a readout mode, per quadrature, in photons.
// Meaningful for unit-gain readout of a vacuum-covariance input (asserted by caller).
struct AddedNoise {
    double x;
    double p;
    double symmetric() const { return 0.5 * (x + p); }
};

inline AddedNoise added_noise(const GaussianState& state, const ModeLabel& mode) {
    const Eigen::Matrix2d c = state.mode_cov(mode);
    const AddedNoise n{0.5 * c(0, 0) - 0.5, 0.5 * c(1, 1) - 0.5};
    if (n.x < -kCpTol || n.p < -kCpTol)
        throw std::runtime_error("negative added noise: mode is not a unit-gain readout output");
    return n;
}

// Overlap fidelity of the mode's Gaussian state with a pure coherent target:
// F = exp(-delta^T (V1+V2)^{-1} delta / 2) / sqrt(det(V1+V2)), V = cov/2.
inline double fidelity_coherent(const GaussianState& state, const ModeLabel& mode,
                                const Eigen::Vector2d& target_mean) {
    const Eigen::Matrix2d vsum = 0.5 * Eigen::Matrix2d::Identity() + 0.5 * state.mode_cov(mode);
    const double det = vsum.determinant();
    if (det <= 0.0) throw std::runtime_error("degenerate covariance in fidelity");
    const Eigen::Vector2d delta = target_mean - state.mode_mean(mode);
    return std::exp(-0.5 * delta.dot(vsum.inverse() * delta)) / std::sqrt(det);
}

}  // namespace readout
