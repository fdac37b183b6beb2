#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bdrelay/channel.hpp"
#include "bdrelay/rates.hpp"

namespace bdrelay {

/// Effective squared gains seen through the amplify-and-forward chain and
/// the per-relay scaling powers. Index i in [1, m] maps to vector slot i-1.
struct AfEffectiveGains {
    std::vector<double> h_a_sq;    // a-stream gain accumulated up to relay i
    std::vector<double> h_b_sq;    // b-stream gain accumulated down to relay i
    std::vector<double> p_tilde;   // transmit scaling power of relay i
};

/// Two-phase protocol, symbol-wise AF relays, Delta = 1/2 per phase. Relays
/// combine coherently at each terminal; the other terminal's forwarded
/// component is self-interference and cancels.
inline RatePair af_mabc_rates(const GainMatrix& g, double P) {
    if (!(P > 0.0)) throw std::invalid_argument("af_mabc_rates: power must be positive");
    const int m = g.relay_count();
    const int a = g.terminal_a(), b = g.terminal_b();

    double num = 0.0, noise_a = 0.0, noise_b = 0.0;
    for (int r = 1; r <= m; ++r) {
        const double pt = (P / m) / (0.5 * P * (g(r, b) + g(r, a)) + 1.0);
        num += std::sqrt(g(b, r) * g(a, r) * pt);
        noise_a += g(b, r) * pt;  // forwarded noise arriving at b
        noise_b += g(a, r) * pt;  // forwarded noise arriving at a
    }
    const double coherent = 0.5 * P * num * num;
    RatePair out;
    out.a = 0.5 * capacity(coherent / (noise_a + 1.0));
    out.b = 0.5 * capacity(coherent / (noise_b + 1.0));
    return out;
}

/// Three-phase protocol, AF relays, Delta = 1/3 per phase; the direct link
/// adds to the relayed path inside the capacity term.
inline RatePair af_tdbc_rates(const GainMatrix& g, double P) {
    if (!(P > 0.0)) throw std::invalid_argument("af_tdbc_rates: power must be positive");
    const int m = g.relay_count();
    const int a = g.terminal_a(), b = g.terminal_b();

    double num = 0.0, noise_a = 0.0, noise_b = 0.0;
    for (int r = 1; r <= m; ++r) {
        const double pt = (P / m) / (P * (g(r, b) + g(r, a)) + 2.0);
        num += std::sqrt(g(b, r) * g(a, r) * pt);
        noise_a += g(b, r) * pt;
        noise_b += g(a, r) * pt;
    }
    const double coherent = P * num * num;
    const double direct = g(a, b) * P;
    RatePair out;
    out.a = capacity(direct + coherent / (2.0 * noise_a + 1.0)) / 3.0;
    out.b = capacity(direct + coherent / (2.0 * noise_b + 1.0)) / 3.0;
    return out;
}

/// Effective gains of the (m, m+2) AF chain. The per-direction recurrences
/// are mutually coupled through the relay scaling powers (each relay
/// normalizes against the power of both passing streams), so the steady
/// state is a fixed point rather than a single sweep. Damped Jacobi
/// iteration from zero cross-gains converges to it and treats the two
/// directions symmetrically, which keeps the a<->b mirror exact.
inline AfEffectiveGains af_mhmr_effective_gains(const GainMatrix& g, double P) {
    if (!(P > 0.0)) throw std::invalid_argument("af_mhmr_effective_gains: power must be positive");
    const int m = g.relay_count();
    if (m < 1) throw std::invalid_argument("af_mhmr_effective_gains: need at least one relay");

    std::vector<double> A(m + 1, 0.0), B(m + 1, 0.0);  // 1-based
    A[1] = g(g.terminal_a(), 1);
    B[m] = g(g.terminal_b(), m);

    auto step_a = [&](int i, const std::vector<double>& Ao, const std::vector<double>& Bo) {
        const double raw = g(i - 1, i);
        return P * P * raw * Ao[i - 1] /
               (2.0 * P * raw + P * (Ao[i - 1] + Bo[i - 1]) + 2.0);
    };
    auto step_b = [&](int i, const std::vector<double>& Ao, const std::vector<double>& Bo) {
        const double raw = g(i + 1, i);
        return P * P * raw * Bo[i + 1] /
               (2.0 * P * raw + P * (Ao[i + 1] + Bo[i + 1]) + 2.0);
    };

    for (int iter = 0; iter < 10000; ++iter) {
        std::vector<double> An(A), Bn(B);
        for (int i = 2; i <= m; ++i) An[i] = 0.5 * (A[i] + step_a(i, A, B));
        for (int i = m - 1; i >= 1; --i) Bn[i] = 0.5 * (B[i] + step_b(i, A, B));
        double change = 0.0, scale = 1.0;
        for (int i = 1; i <= m; ++i) {
            change = std::max({change, std::abs(An[i] - A[i]), std::abs(Bn[i] - B[i])});
            scale = std::max({scale, An[i], Bn[i]});
        }
        A.swap(An);
        B.swap(Bn);
        if (change <= 1e-14 * scale) break;
    }

    AfEffectiveGains eg;
    eg.h_a_sq.resize(m);
    eg.h_b_sq.resize(m);
    eg.p_tilde.resize(m);
    for (int i = 1; i <= m; ++i) {
        eg.h_a_sq[i - 1] = A[i];
        eg.h_b_sq[i - 1] = B[i];
        eg.p_tilde[i - 1] = P / (P * (A[i] + B[i]) + 2.0);
    }
    return eg;
}

/// Rates of the (m, m+2) AF chain protocol at uniform phase durations
/// 1/(m+2). Each terminal hears every relay's forwarded stream plus the
/// direct link and sums the per-relay SNR contributions.
inline RatePair af_mhmr_rates(const GainMatrix& g, double P) {
    if (!(P > 0.0)) throw std::invalid_argument("af_mhmr_rates: power must be positive");
    const int m = g.relay_count();
    const int a = g.terminal_a(), b = g.terminal_b();
    const AfEffectiveGains eg = af_mhmr_effective_gains(g, P);

    double snr_a = g(a, b) * P, snr_b = g(a, b) * P;
    for (int i = 1; i <= m; ++i) {
        const double pt = eg.p_tilde[i - 1];
        const double gb = g(i, b), ga = g(i, a);
        snr_a += gb * eg.h_a_sq[i - 1] * pt * P / (2.0 * gb * pt + 1.0);
        snr_b += ga * eg.h_b_sq[i - 1] * pt * P / (2.0 * ga * pt + 1.0);
    }
    const double pre = 1.0 / (m + 2);
    return RatePair{pre * capacity(snr_a), pre * capacity(snr_b)};
}

}  // namespace bdrelay
