#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bdrelay/rates.hpp"

namespace bdrelay {

inline constexpr double kLn2 = 0.6931471805599453;

/// Closed-form low-SNR sum rates on an all-equal-gain network, one entry per
/// protocol bound family. The chain outer bound has distinct lower/upper
/// bounding forms, hence two variants.
enum class LowSnrForm {
    DfMabc,
    MabcOut,
    DfTdbc,
    TdbcOut,
    DfMhmr,
    MhmrOutLower,
    MhmrOutUpper,
};

inline double low_snr_sumrate(LowSnrForm form, int m, double h_sq, double P) {
    if (m < 1) throw std::invalid_argument("low_snr_sumrate: need m >= 1");
    if (!(h_sq > 0.0) || !(P > 0.0))
        throw std::invalid_argument("low_snr_sumrate: gain and power must be positive");
    const double base = P * h_sq / kLn2;
    switch (form) {
        case LowSnrForm::DfMabc: return base * (2.0 * m) / (2.0 * m + 1.0);
        case LowSnrForm::MabcOut: return 2.0 * m * base;
        case LowSnrForm::DfTdbc: return base;
        case LowSnrForm::TdbcOut: return 2.0 * m * base;
        case LowSnrForm::DfMhmr: return base;
        case LowSnrForm::MhmrOutLower: return 2.0 * base * (m + 1.0) / (m + 2.0);
        case LowSnrForm::MhmrOutUpper: return 2.0 * base;
    }
    throw std::invalid_argument("low_snr_sumrate: unknown form");
}

/// Protocols with a low-SNR multiplicative-gap sandwich (DF only; the AF
/// chains lack the gain monotonicity the bounds rely on).
enum class DfProtocol { Mabc, Tdbc, Mhmr };

/// Lower and upper bounds on the low-SNR ratio of achievable to outer-bound
/// sum rate, given the extreme squared gains of the network.
inline std::pair<double, double> low_snr_gap_bounds(DfProtocol proto, int m, double h_min_sq,
                                                    double h_max_sq) {
    if (m < 1) throw std::invalid_argument("low_snr_gap_bounds: need m >= 1");
    if (!(h_min_sq > 0.0) || !(h_max_sq >= h_min_sq))
        throw std::invalid_argument("low_snr_gap_bounds: need 0 < h_min_sq <= h_max_sq");
    const double down = h_min_sq / h_max_sq;
    const double up = h_max_sq / h_min_sq;
    switch (proto) {
        case DfProtocol::Mabc:
            return {down / (2.0 * m + 1.0), up / (2.0 * m + 1.0)};
        case DfProtocol::Tdbc:
            return {down / (2.0 * m), up / (2.0 * m)};
        case DfProtocol::Mhmr:
            return {0.5 * down, 0.5 * up * (m + 2.0) / (m + 1.0)};
    }
    throw std::invalid_argument("low_snr_gap_bounds: unknown protocol");
}

/// Relaying scheme + protocol pairs with a known high-SNR multiplicative gap.
enum class HighSnrScheme { AfMabc, DfMabc, AfTdbc, DfTdbc, AfMhmr, DfMhmr };

inline double high_snr_gap(HighSnrScheme scheme, int m) {
    if (m < 1) throw std::invalid_argument("high_snr_gap: need m >= 1");
    switch (scheme) {
        case HighSnrScheme::AfMabc: return 0.5;
        case HighSnrScheme::DfMabc: return 1.0 / 3.0;
        case HighSnrScheme::AfTdbc: return 1.0 / 3.0;
        case HighSnrScheme::DfTdbc: return 0.5;
        case HighSnrScheme::AfMhmr: return 2.0 / (m + 2.0);
        case HighSnrScheme::DfMhmr: return 1.0;
    }
    throw std::invalid_argument("high_snr_gap: unknown scheme");
}

/// Finite-difference estimate of the coefficient of log2(P) in a sum-rate
/// curve; the span must cover at least two decades for a stable slope.
inline double numeric_prelog(const std::function<double(double)>& sum_rate, double P_lo,
                             double P_hi) {
    if (!(P_lo > 0.0) || !(P_hi / P_lo >= 1e2))
        throw std::invalid_argument("numeric_prelog: need P_hi / P_lo >= 1e2");
    const double r_lo = sum_rate(P_lo);
    const double r_hi = sum_rate(P_hi);
    if (!std::isfinite(r_lo) || !std::isfinite(r_hi))
        throw std::domain_error("numeric_prelog: evaluator returned a non-finite rate");
    return (r_hi - r_lo) / (std::log2(P_hi) - std::log2(P_lo));
}

enum class Regime { LowSnr, HighSnr };

/// Bound families whose asymptotically optimal schedules are tabulated.
enum class DeltaScheme {
    DfMabc,
    MabcOut,
    DfTdbc,
    TdbcOut,
    DfMhmr,
    MhmrOut,       // high-SNR form
    MhmrOutLower,  // low-SNR form, uniform durations
    MhmrOutUpper,  // low-SNR form, per-phase weights
};

/// Schedule family delta(alpha) = base + alpha * direction; alpha in [0,1]
/// parameterizes rows whose optimum is a whole segment.
struct ScheduleFamily {
    bool parameterized = false;
    std::vector<double> base;
    std::vector<double> direction;

    PhaseSchedule at(double alpha = 0.5) const {
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::invalid_argument("ScheduleFamily: alpha must lie in [0,1]");
        std::vector<double> d(base);
        if (parameterized)
            for (size_t i = 0; i < d.size(); ++i) d[i] += alpha * direction[i];
        return PhaseSchedule(std::move(d));
    }
};

/// Asymptotically sum-rate-optimal phase durations per bound family.
inline ScheduleFamily asymptotic_delta(DeltaScheme scheme, int m, Regime regime) {
    if (m < 1) throw std::invalid_argument("asymptotic_delta: need m >= 1");
    const int t_chain = m + 2;
    ScheduleFamily f;

    auto fixed = [&](std::vector<double> v) {
        f.parameterized = false;
        f.base = std::move(v);
        f.direction.assign(f.base.size(), 0.0);
    };
    auto endpoint_segment = [&](int t) {
        // delta_1 = alpha, delta_t = 1 - alpha, middle phases idle.
        f.parameterized = true;
        f.base.assign(t, 0.0);
        f.direction.assign(t, 0.0);
        f.base[t - 1] = 1.0;
        f.direction[0] = 1.0;
        f.direction[t - 1] = -1.0;
    };

    if (regime == Regime::LowSnr) {
        switch (scheme) {
            case DeltaScheme::DfMabc:
                fixed({2.0 * m / (2.0 * m + 1.0), 1.0 / (2.0 * m + 1.0)});
                return f;
            case DeltaScheme::MabcOut: fixed({0.0, 1.0}); return f;
            case DeltaScheme::DfTdbc:
                // delta_1 = alpha, delta_2 = 1 - alpha, delta_3 = 0
                f.parameterized = true;
                f.base = {0.0, 1.0, 0.0};
                f.direction = {1.0, -1.0, 0.0};
                return f;
            case DeltaScheme::TdbcOut: fixed({0.0, 0.0, 1.0}); return f;
            case DeltaScheme::DfMhmr: endpoint_segment(t_chain); return f;
            case DeltaScheme::MhmrOutLower:
                fixed(std::vector<double>(t_chain, 1.0 / t_chain));
                return f;
            case DeltaScheme::MhmrOutUpper: {
                std::vector<double> d(t_chain, 0.0);
                for (int i = 2; i <= m + 1; ++i)
                    d[i - 1] = ((m + 2.0 - i) / (i - 1.0) - (m + 1.0 - i) / i) / (m + 1.0);
                d[t_chain - 1] = 1.0 / (m + 1.0);
                fixed(std::move(d));
                return f;
            }
            default: break;
        }
        throw std::invalid_argument("asymptotic_delta: no low-SNR schedule for this scheme");
    }

    switch (scheme) {
        case DeltaScheme::DfMabc: fixed({2.0 / 3.0, 1.0 / 3.0}); return f;
        case DeltaScheme::MabcOut:
            f.parameterized = true;
            f.base = {0.0, 1.0};
            f.direction = {1.0, -1.0};
            return f;
        case DeltaScheme::DfTdbc:
            f.parameterized = true;
            f.base = {0.0, 1.0, 0.0};
            f.direction = {1.0, -1.0, 0.0};
            return f;
        case DeltaScheme::TdbcOut: fixed({0.0, 0.0, 1.0}); return f;
        case DeltaScheme::DfMhmr: endpoint_segment(t_chain); return f;
        case DeltaScheme::MhmrOut: endpoint_segment(t_chain); return f;
        default: break;
    }
    throw std::invalid_argument("asymptotic_delta: no high-SNR schedule for this scheme");
}

/// Raw gap summary for one protocol; low-SNR bounds are absent for AF
/// schemes. Values are reported unclamped, with a flag when the upper
/// bounding form exceeds 1 through bounding slack.
struct GapReport {
    std::string protocol;
    int m = 0;
    std::optional<double> g_l_lower;
    std::optional<double> g_l_upper;
    double g_h = 0.0;
    double h_min_sq = 0.0;
    double h_max_sq = 0.0;
    bool g_l_upper_exceeds_one = false;
};

inline GapReport make_gap_report(HighSnrScheme scheme, int m, double h_min_sq, double h_max_sq) {
    GapReport rep;
    rep.m = m;
    rep.h_min_sq = h_min_sq;
    rep.h_max_sq = h_max_sq;
    rep.g_h = high_snr_gap(scheme, m);
    switch (scheme) {
        case HighSnrScheme::DfMabc: rep.protocol = "df_mabc"; break;
        case HighSnrScheme::DfTdbc: rep.protocol = "df_tdbc"; break;
        case HighSnrScheme::DfMhmr: rep.protocol = "df_mhmr"; break;
        case HighSnrScheme::AfMabc: rep.protocol = "af_mabc"; break;
        case HighSnrScheme::AfTdbc: rep.protocol = "af_tdbc"; break;
        case HighSnrScheme::AfMhmr: rep.protocol = "af_mhmr"; break;
    }
    const bool df = scheme == HighSnrScheme::DfMabc || scheme == HighSnrScheme::DfTdbc ||
                    scheme == HighSnrScheme::DfMhmr;
    if (df) {
        const DfProtocol p = scheme == HighSnrScheme::DfMabc  ? DfProtocol::Mabc
                             : scheme == HighSnrScheme::DfTdbc ? DfProtocol::Tdbc
                                                               : DfProtocol::Mhmr;
        auto [lo, hi] = low_snr_gap_bounds(p, m, h_min_sq, h_max_sq);
        rep.g_l_lower = lo;
        rep.g_l_upper = hi;
        rep.g_l_upper_exceeds_one = hi > 1.0;
    }
    return rep;
}

inline nlohmann::json gap_report_to_json(const GapReport& rep) {
    nlohmann::json j{{"protocol", rep.protocol},
                     {"m", rep.m},
                     {"g_h", rep.g_h},
                     {"h_min_sq", rep.h_min_sq},
                     {"h_max_sq", rep.h_max_sq},
                     {"g_l_upper_exceeds_one", rep.g_l_upper_exceeds_one}};
    j["g_l_lower"] = rep.g_l_lower ? nlohmann::json(*rep.g_l_lower) : nlohmann::json(nullptr);
    j["g_l_upper"] = rep.g_l_upper ? nlohmann::json(*rep.g_l_upper) : nlohmann::json(nullptr);
    return j;
}

}  // namespace bdrelay
