#pragma once

#include <string>
#include <vector>

#include "bdrelay/channel.hpp"
#include "bdrelay/df_regions.hpp"
#include "bdrelay/errors.hpp"
#include "bdrelay/rates.hpp"

namespace bdrelay {

/// Default ceiling for 2^m cut-subset scans.
inline constexpr int kCutEnumerationCap = 12;

namespace detail {

inline void check_cut_cap(int m, int cap) {
    if (m > cap)
        throw EnumerationLimitError(
            "outer bound: 2^m cut scan exceeds cap; supply explicit cut lists");
}

template <class Fn>
inline void for_each_subset(int m, Fn&& fn) {
    const unsigned long total = 1UL << m;
    std::vector<int> in, out;
    for (unsigned long mask = 0; mask < total; ++mask) {
        in.clear();
        out.clear();
        for (int r = 1; r <= m; ++r) {
            if (mask & (1UL << (r - 1))) in.push_back(r);
            else out.push_back(r);
        }
        fn(in, out);  // S_R and its complement
    }
}

}  // namespace detail

/// Cut-set bound for the two-phase protocol: each relay cut S_R yields one
/// bound per stream, listening power P/2 per terminal in phase 1 and full
/// power on the relay side in phase 2. The region is the intersection over
/// all cuts at a common schedule.
inline RateConstraintSet outer_mabc(const GainMatrix& g, double P, int cap = kCutEnumerationCap) {
    if (!(P > 0.0)) throw std::invalid_argument("outer_mabc: power must be positive");
    const int m = g.relay_count();
    detail::check_cut_cap(m, cap);
    const int a = g.terminal_a(), b = g.terminal_b();

    RateConstraintSet cs(2);
    detail::for_each_subset(m, [&](const std::vector<int>& in, const std::vector<int>& out) {
        double listen_a = 0.0, listen_b = 0.0;
        for (int r : out) {
            listen_a += 0.5 * P * g(a, r);
            listen_b += 0.5 * P * g(b, r);
        }
        double fwd_b = 0.0, fwd_a = 0.0;
        for (int r : in) {
            fwd_b += P * g(r, b);
            fwd_a += P * g(r, a);
        }
        cs.add(RateTarget::A, {capacity(listen_a), capacity(fwd_b)});
        cs.add(RateTarget::B, {capacity(listen_b), capacity(fwd_a)});
    });
    return cs;
}

/// Cut-set bound for the three-phase protocol; the direct terminal link
/// enters the transmit-side phase of each stream.
inline RateConstraintSet outer_tdbc(const GainMatrix& g, double P, int cap = kCutEnumerationCap) {
    if (!(P > 0.0)) throw std::invalid_argument("outer_tdbc: power must be positive");
    const int m = g.relay_count();
    detail::check_cut_cap(m, cap);
    const int a = g.terminal_a(), b = g.terminal_b();

    RateConstraintSet cs(3);
    detail::for_each_subset(m, [&](const std::vector<int>& in, const std::vector<int>& out) {
        double listen_a = P * g(a, b), listen_b = P * g(a, b);
        for (int r : out) {
            listen_a += P * g(a, r);
            listen_b += P * g(b, r);
        }
        double fwd_b = 0.0, fwd_a = 0.0;
        for (int r : in) {
            fwd_b += P * g(r, b);
            fwd_a += P * g(r, a);
        }
        cs.add(RateTarget::A, {capacity(listen_a), 0.0, capacity(fwd_b)});
        cs.add(RateTarget::B, {0.0, capacity(listen_b), capacity(fwd_a)});
    });
    return cs;
}

/// Cut-set bound for the chain protocol with t = m+2 phases. For a cut S_R,
/// every node on the source side transmits in its own phase toward all
/// receivers across the cut, and the bound sums those per-phase capacities.
inline RateConstraintSet outer_mhmr(const GainMatrix& g, double P, const RelayOrder& order,
                                    int cap = kCutEnumerationCap) {
    if (!(P > 0.0)) throw std::invalid_argument("outer_mhmr: power must be positive");
    const int m = g.relay_count();
    detail::check_cut_cap(m, cap);
    order.validate(m);
    const int t = m + 2;

    auto node = [&](int pos) {
        if (pos == 0) return g.terminal_a();
        if (pos == m + 1) return g.terminal_b();
        return order.order[pos - 1];
    };

    // Subsets range over chain positions 1..m; node ids follow the order.
    RateConstraintSet cs(t);
    detail::for_each_subset(m, [&](const std::vector<int>& in, const std::vector<int>& out) {
        std::vector<double> ca(t, 0.0);
        {
            std::vector<int> tx_pos(in);
            tx_pos.insert(tx_pos.begin(), 0);  // terminal a
            for (int i : tx_pos) {
                double s = 0.0;
                for (int j : out) s += P * g(node(i), node(j));
                s += P * g(node(i), node(m + 1));
                ca[(m + 2 - i) - 1] += capacity(s);
            }
        }
        cs.add(RateTarget::A, std::move(ca));

        std::vector<double> cb(t, 0.0);
        {
            std::vector<int> tx_pos(in);
            tx_pos.push_back(m + 1);  // terminal b
            for (int i : tx_pos) {
                double s = 0.0;
                for (int j : out) s += P * g(node(i), node(j));
                s += P * g(node(i), node(0));
                cb[(m + 2 - i) - 1] += capacity(s);
            }
        }
        cs.add(RateTarget::B, std::move(cb));
    });
    return cs;
}

/// Cut-set bound for the (m,t) multi-relay-per-hop protocol, specialized to
/// independent Gaussian inputs: per cut and hop, the hop's source-side
/// members transmit with full power toward the receiver-side nodes outside
/// the hop plus the destination terminal; conditioning on the hop's
/// receiver-side members removes their contribution.
inline RateConstraintSet outer_mhmr_general(const GainMatrix& g, double P,
                                            const HopPartition& part, int t,
                                            int cap = kCutEnumerationCap) {
    if (!(P > 0.0)) throw std::invalid_argument("outer_mhmr_general: power must be positive");
    const int m = g.relay_count();
    if (!(t > 3 && t <= m + 2))
        throw std::invalid_argument("outer_mhmr_general: need 3 < t <= m+2");
    if (part.phase_count() != t)
        throw std::invalid_argument("outer_mhmr_general: partition/phase count mismatch");
    part.validate(m);
    detail::check_cut_cap(m, cap);

    auto hop_nodes = [&](int h) -> std::vector<int> {
        if (h == 0) return {g.terminal_a()};
        if (h == t - 1) return {g.terminal_b()};
        return part.hops[h - 1];
    };

    RateConstraintSet cs(t);
    detail::for_each_subset(m, [&](const std::vector<int>& in, const std::vector<int>& out) {
        auto in_cut = [&](int r) {
            return std::find(in.begin(), in.end(), r) != in.end();
        };

        auto build = [&](int src_terminal, int dst_terminal) {
            std::vector<double> coeff(t, 0.0);
            for (int h = 0; h <= t - 1; ++h) {
                const auto members = hop_nodes(h);
                std::vector<int> tx;
                for (int u : members)
                    if (u == src_terminal || (u >= 1 && u <= m && in_cut(u))) tx.push_back(u);
                if (tx.empty()) continue;
                std::vector<int> rx;
                for (int v : out)
                    if (std::find(members.begin(), members.end(), v) == members.end())
                        rx.push_back(v);
                rx.push_back(dst_terminal);
                double s = 0.0;
                for (int u : tx)
                    for (int v : rx) s += P * g(u, v);
                coeff[(t - h) - 1] += capacity(s);
            }
            return coeff;
        };

        cs.add(RateTarget::A, build(g.terminal_a(), g.terminal_b()));
        cs.add(RateTarget::B, build(g.terminal_b(), g.terminal_a()));
    });
    return cs;
}

}  // namespace bdrelay
