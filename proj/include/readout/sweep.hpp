#pragma once

// Loss-sweep curves for the three readout schemes, evaluated from the
// closed-form optima.  Serialization is hand-built with a fixed %.12g
// format so repeated runs are byte-identical.

#include "optimize.hpp"

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace readout {

enum class SweepScheme { Single, Double, SingleSqueezed };

inline std::string to_string(SweepScheme s) {
    switch (s) {
        case SweepScheme::Single: return "single";
        case SweepScheme::Double: return "double";
        case SweepScheme::SingleSqueezed: return "single-squeezed";
    }
    throw std::logic_error("unreachable");
}

inline SweepScheme sweep_scheme_from_string(const std::string& s) {
    if (s == "single") return SweepScheme::Single;
    if (s == "double") return SweepScheme::Double;
    if (s == "single-squeezed") return SweepScheme::SingleSqueezed;
    throw std::invalid_argument("unknown scheme: " + s);
}

struct CurveRow {
    double a;
    double kappa_sq;
    std::optional<double> kappa2_sq;  // Double only
    double gain;
    std::optional<double> squeeze_v;  // SingleSqueezed only
    double nbar;
    double fidelity;
    double classical_bound;
};

inline std::vector<CurveRow> fidelity_curve(SweepScheme scheme, double a_min, double a_max,
                                            int steps) {
    if (!(a_min >= 0.0)) throw std::invalid_argument("a-min must be nonnegative");
    if (!(a_max <= 0.999)) throw std::invalid_argument("a-max must be at most 0.999");
    if (!(a_min < a_max)) throw std::invalid_argument("a-min must be below a-max");
    if (steps < 2) throw std::invalid_argument("need at least 2 steps");

    std::vector<CurveRow> rows;
    rows.reserve(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        const double a = a_min + (a_max - a_min) * i / (steps - 1);
        CurveRow row{};
        row.a = a;
        row.classical_bound = classical_benchmark();
        switch (scheme) {
            case SweepScheme::Single: {
                const Optimum o = single_cell_lossy(a);
                row.kappa_sq = o.kappa_sq;
                row.gain = o.amp_gain;
                row.nbar = o.nbar;
                row.fidelity = o.fidelity;
                break;
            }
            case SweepScheme::Double: {
                const Optimum o = two_cell_lossy(a);
                row.kappa_sq = o.kappa_sq;
                row.kappa2_sq = o.kappa2_sq;
                row.gain = o.amp_gain;
                row.nbar = o.nbar;
                row.fidelity = o.fidelity;
                break;
            }
            case SweepScheme::SingleSqueezed: {
                const Optimum o = selective_squeeze_lossy(a);
                row.kappa_sq = o.kappa_sq;
                row.gain = o.amp_gain;
                row.squeeze_v = o.squeeze_v;
                row.nbar = o.nbar;
                row.fidelity = o.fidelity;
                break;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

// 12 significant digits; shortest %g spelling keeps output byte-stable.
inline std::string format_sig12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string curve_csv(const std::vector<CurveRow>& rows) {
    std::string out = "A,kappa_sq,gain,squeeze_V,nbar,fidelity,classical_bound\n";
    for (const auto& r : rows) {
        out += format_sig12(r.a);
        out += ',';
        out += format_sig12(r.kappa_sq);
        out += ',';
        out += format_sig12(r.gain);
        out += ',';
        if (r.squeeze_v) out += format_sig12(*r.squeeze_v);
        out += ',';
        out += format_sig12(r.nbar);
        out += ',';
        out += format_sig12(r.fidelity);
        out += ',';
        out += format_sig12(r.classical_bound);
        out += '\n';
    }
    return out;
}

inline std::string curve_json(SweepScheme scheme, double a_min, double a_max, int steps,
                              const std::vector<CurveRow>& rows) {
    std::string out = "{\n";
    out += "  \"scheme\": \"" + to_string(scheme) + "\",\n";
    out += "  \"a_min\": " + format_sig12(a_min) + ",\n";
    out += "  \"a_max\": " + format_sig12(a_max) + ",\n";
    out += "  \"steps\": " + std::to_string(steps) + ",\n";
    out += "  \"classical_bound\": " + format_sig12(classical_benchmark()) + ",\n";
    out += "  \"rows\": [\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out += "    {\"A\": " + format_sig12(r.a);
        out += ", \"kappa_sq\": " + format_sig12(r.kappa_sq);
        if (r.kappa2_sq) out += ", \"kappa2_sq\": " + format_sig12(*r.kappa2_sq);
        out += ", \"gain\": " + format_sig12(r.gain);
        if (r.squeeze_v) out += ", \"squeeze_V\": " + format_sig12(*r.squeeze_v);
        out += ", \"nbar\": " + format_sig12(r.nbar);
        out += ", \"fidelity\": " + format_sig12(r.fidelity);
        out += "}";
        out += (i + 1 < rows.size()) ? ",\n" : "\n";
    }
    out += "  ]\n}\n";
    return out;
}

}  // namespace readout
