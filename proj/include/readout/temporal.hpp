#pragma once

// Temporal mode profiles on the unit interval u = t/T, sampled on the
// midpoint grid u_k = (k - 1/2)/N.  Samples are rescaled so the discrete
// norm (1/N) sum f_k^2 is exactly 1; the rescaling is O(1/N^2) for the
// oscillatory profiles and for the centered ramp, zero for flat.
//
// The midpoint rule matches the slice discretization used by the sliced
// propagator, so projections onto these profiles commute with slicing.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace readout {

enum class ProfileKind {
    Flat,          // f(u) = 1
    Ramp,          // f(u) = sqrt(3) (1 - u)
    CenteredRamp,  // f(u) = sqrt(3) (1 - 2u), odd about u = 1/2
    Cosine,        // f(u) = sqrt(2) cos(w u), w = angular extent
    Sine,          // f(u) = sqrt(2) sin(w u)
};

class TemporalProfile {
  public:
    TemporalProfile(ProfileKind kind, int n_slices, double angular_extent = 0.0)
        : kind_(kind), w_(angular_extent) {
        if (n_slices < 1) throw std::invalid_argument("profile needs at least one slice");
        if ((kind == ProfileKind::Cosine || kind == ProfileKind::Sine) && !(w_ > 0.0))
            throw std::invalid_argument("oscillatory profile needs a positive angular extent");
        samples_.resize(static_cast<std::size_t>(n_slices));
        double norm_sq = 0.0;
        for (int k = 0; k < n_slices; ++k) {
            const double f = value((k + 0.5) / n_slices);
            samples_[static_cast<std::size_t>(k)] = f;
            norm_sq += f * f;
        }
        norm_sq /= n_slices;
        if (!(norm_sq > 0.0)) throw std::invalid_argument("profile vanishes on the grid");
        const double s = 1.0 / std::sqrt(norm_sq);
        for (auto& f : samples_) f *= s;
    }

    // Continuum (unrescaled) profile value.
    double value(double u) const {
        switch (kind_) {
            case ProfileKind::Flat: return 1.0;
            case ProfileKind::Ramp: return std::sqrt(3.0) * (1.0 - u);
            case ProfileKind::CenteredRamp: return std::sqrt(3.0) * (1.0 - 2.0 * u);
            case ProfileKind::Cosine: return std::sqrt(2.0) * std::cos(w_ * u);
            case ProfileKind::Sine: return std::sqrt(2.0) * std::sin(w_ * u);
        }
        throw std::logic_error("unreachable");
    }

    ProfileKind kind() const { return kind_; }
    int n_slices() const { return static_cast<int>(samples_.size()); }
    double angular_extent() const { return w_; }
    const std::vector<double>& samples() const { return samples_; }

    // Discrete inner product (1/N) sum f_k g_k.
    double inner(const TemporalProfile& other) const {
        if (other.n_slices() != n_slices())
            throw std::invalid_argument("profiles live on different grids");
        double s = 0.0;
        for (std::size_t k = 0; k < samples_.size(); ++k) s += samples_[k] * other.samples_[k];
        return s / n_slices();
    }

  private:
    ProfileKind kind_;
    double w_;
    std::vector<double> samples_;
};

inline double inner(const TemporalProfile& f, const TemporalProfile& g) { return f.inner(g); }

// Gram-Schmidt on raw sample vectors under the discrete inner product,
// preserving order.  Throws when an input is linearly dependent on its
// predecessors (residual norm^2 below 1e-12).
inline std::vector<std::vector<double>> orthonormalize(std::vector<std::vector<double>> raw) {
    std::vector<std::vector<double>> basis;
    for (auto& v : raw) {
        const int n = static_cast<int>(v.size());
        for (const auto& b : basis) {
            double proj = 0.0;
            for (int k = 0; k < n; ++k) proj += v[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k)];
            proj /= n;
            for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] -= proj * b[static_cast<std::size_t>(k)];
        }
        double norm_sq = 0.0;
        for (double x : v) norm_sq += x * x;
        norm_sq /= n;
        if (!(norm_sq > 1e-12))
            throw std::invalid_argument("profiles are linearly dependent on this grid");
        const double s = 1.0 / std::sqrt(norm_sq);
        for (auto& x : v) x *= s;
        basis.push_back(std::move(v));
    }
    return basis;
}

// Orthonormal basis spanning the input profiles, plus the coefficients of
// each input in that basis: f_i = sum_j coeffs[i][j] * basis[j].
struct OrthogonalBasis {
    std::vector<std::vector<double>> basis;
    std::vector<std::vector<double>> coeffs;
};

inline OrthogonalBasis orthogonalize(const std::vector<TemporalProfile>& fs) {
    if (fs.empty()) throw std::invalid_argument("nothing to orthogonalize");
    const int n = fs.front().n_slices();
    std::vector<std::vector<double>> raw;
    for (const auto& f : fs) {
        if (f.n_slices() != n) throw std::invalid_argument("profiles live on different grids");
        raw.push_back(f.samples());
    }
    OrthogonalBasis out;
    out.basis = orthonormalize(std::move(raw));
    for (std::size_t i = 0; i < fs.size(); ++i) {
        std::vector<double> c;
        for (std::size_t j = 0; j <= i; ++j) {
            double proj = 0.0;
            for (int k = 0; k < n; ++k)
                proj += fs[i].samples()[static_cast<std::size_t>(k)] *
                        out.basis[j][static_cast<std::size_t>(k)];
            c.push_back(proj / n);
        }
        out.coeffs.push_back(std::move(c));
    }
    return out;
}

// Unit-2-norm coefficient vector c_k = f_k / sqrt(N); projecting independent
// vacuum slice quadratures with these weights yields a canonical mode
// quadrature (sum c_k^2 = 1).
inline std::vector<double> mode_projector(const TemporalProfile& f) {
    std::vector<double> c = f.samples();
    const double s = 1.0 / std::sqrt(static_cast<double>(f.n_slices()));
    for (auto& x : c) x *= s;
    return c;
}

}  // namespace readout
