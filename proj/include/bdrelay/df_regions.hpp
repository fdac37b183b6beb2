#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bdrelay/channel.hpp"
#include "bdrelay/errors.hpp"
#include "bdrelay/rates.hpp"

namespace bdrelay {

/// Relays able to decode the a-stream (A) and the b-stream (B).
/// Indices are relay node ids in [1, m].
struct DecodeSets {
    std::set<int> A;
    std::set<int> B;

    std::string id() const {
        std::ostringstream os;
        os << "A=";
        for (int r : A) os << (r == *A.begin() ? "" : "+") << r;
        os << "|B=";
        for (int r : B) os << (r == *B.begin() ? "" : "+") << r;
        return os.str();
    }
};

/// Chain order for the one-relay-per-hop protocol: position p in [1, m]
/// holds the relay node transmitting in phase m+2-p.
struct RelayOrder {
    std::vector<int> order;

    static RelayOrder identity(int m) {
        RelayOrder o;
        o.order.resize(m);
        std::iota(o.order.begin(), o.order.end(), 1);
        return o;
    }

    void validate(int m) const {
        if (static_cast<int>(order.size()) != m)
            throw std::invalid_argument("RelayOrder: wrong length");
        std::vector<char> seen(m + 1, 0);
        for (int r : order) {
            if (r < 1 || r > m || seen[r]) throw std::invalid_argument("RelayOrder: not a permutation");
            seen[r] = 1;
        }
    }

    std::string id() const {
        std::ostringstream os;
        os << "order=";
        for (size_t i = 0; i < order.size(); ++i) os << (i ? ">" : "") << order[i];
        return os.str();
    }
};

/// Relay subsets per intermediate hop for the (m,t) protocol; hop 0 is
/// terminal a and hop t-1 is terminal b implicitly.
struct HopPartition {
    std::vector<std::vector<int>> hops;  // R_1 .. R_{t-2}

    int phase_count() const { return static_cast<int>(hops.size()) + 2; }

    void validate(int m) const {
        std::vector<char> seen(m + 1, 0);
        for (const auto& hop : hops) {
            if (hop.empty()) throw std::invalid_argument("HopPartition: empty hop subset");
            for (int r : hop) {
                if (r < 1 || r > m || seen[r])
                    throw std::invalid_argument("HopPartition: subsets must be disjoint relays in [1,m]");
                seen[r] = 1;
            }
        }
    }

    std::string id() const {
        std::ostringstream os;
        os << "hops=";
        for (const auto& hop : hops) {
            os << "[";
            for (size_t i = 0; i < hop.size(); ++i) os << (i ? "+" : "") << hop[i];
            os << "]";
        }
        return os.str();
    }
};

/// Total phase-2/3 power given to each relay role subset. Defaults follow
/// the proportional rule P_X = |X| / |A u B| * P.
struct SubsetPowers {
    double both = 0.0;    // relays decoding both streams
    double a_only = 0.0;  // relays decoding only the a-stream
    double b_only = 0.0;  // relays decoding only the b-stream
};

namespace detail {

inline SubsetPowers proportional_powers(const DecodeSets& ds, double P) {
    std::set<int> u;
    u.insert(ds.A.begin(), ds.A.end());
    u.insert(ds.B.begin(), ds.B.end());
    if (u.empty()) return {};
    std::vector<int> both;
    std::set_intersection(ds.A.begin(), ds.A.end(), ds.B.begin(), ds.B.end(),
                          std::back_inserter(both));
    const double unit = P / static_cast<double>(u.size());
    SubsetPowers sp;
    sp.both = unit * static_cast<double>(both.size());
    sp.a_only = unit * static_cast<double>(ds.A.size() - both.size());
    sp.b_only = unit * static_cast<double>(ds.B.size() - both.size());
    return sp;
}

inline void check_decode_sets(const DecodeSets& ds, int m) {
    for (int r : ds.A)
        if (r < 1 || r > m) throw std::invalid_argument("DecodeSets: relay index out of range");
    for (int r : ds.B)
        if (r < 1 || r > m) throw std::invalid_argument("DecodeSets: relay index out of range");
}

}  // namespace detail

/// Two-phase protocol with a multiple-access uplink and a network-coded
/// broadcast downlink. Relays in A^B forward the XOR, relays decoding a
/// single stream forward it as-is; the two terminals split the uplink power
/// evenly. Constraints, per stream: the uplink decoding bottleneck (with the
/// other stream cancelled at relays knowing both, or treated as noise
/// otherwise), the downlink bound, and a multiple-access sum bound at the
/// relays decoding both.
inline RateConstraintSet build_mabc_df(const GainMatrix& g, double P, const DecodeSets& ds,
                                       std::optional<SubsetPowers> powers = std::nullopt) {
    if (!(P > 0.0)) throw std::invalid_argument("build_mabc_df: power must be positive");
    const int m = g.relay_count();
    detail::check_decode_sets(ds, m);
    const int a = g.terminal_a(), b = g.terminal_b();
    const SubsetPowers sp = powers ? *powers : detail::proportional_powers(ds, P);

    std::vector<int> both, a_only, b_only;
    std::set_intersection(ds.A.begin(), ds.A.end(), ds.B.begin(), ds.B.end(),
                          std::back_inserter(both));
    std::set_difference(ds.A.begin(), ds.A.end(), ds.B.begin(), ds.B.end(),
                        std::back_inserter(a_only));
    std::set_difference(ds.B.begin(), ds.B.end(), ds.A.begin(), ds.A.end(),
                        std::back_inserter(b_only));

    RateConstraintSet cs(2);
    const double inf = std::numeric_limits<double>::infinity();

    auto uplink_min = [&](int from, int other, const std::vector<int>& clean,
                          const std::vector<int>& interfered) {
        double c1 = inf;
        for (int r : clean) c1 = std::min(c1, capacity(0.5 * P * g(from, r)));
        for (int r : interfered)
            c1 = std::min(c1, capacity(P * g(from, r) / (P * g(other, r) + 2.0)));
        return c1;
    };

    auto downlink = [&](int to, const std::vector<int>& coop, double coop_power,
                        const std::vector<int>& solo, double solo_power) {
        double s = 0.0;
        for (int r : coop) s += g(r, to) * coop_power;
        for (int r : solo) s += g(r, to) * solo_power;
        return capacity(s);
    };

    // a-stream
    const double up_a = uplink_min(a, b, both, a_only);
    if (std::isfinite(up_a)) cs.add(RateTarget::A, {up_a, 0.0});
    cs.add(RateTarget::A, {0.0, downlink(b, both, sp.both, a_only, sp.a_only)});

    // b-stream
    const double up_b = uplink_min(b, a, both, b_only);
    if (std::isfinite(up_b)) cs.add(RateTarget::B, {up_b, 0.0});
    cs.add(RateTarget::B, {0.0, downlink(a, both, sp.both, b_only, sp.b_only)});

    // multiple-access sum bound at relays decoding both streams
    double sum_c = inf;
    for (int r : both) sum_c = std::min(sum_c, capacity(0.5 * P * (g(a, r) + g(b, r))));
    if (std::isfinite(sum_c)) cs.add(RateTarget::Sum, {sum_c, 0.0});

    return cs;
}

/// Three-phase protocol: the terminals transmit in turn (each overheard by
/// the other through the direct link), relays broadcast in phase 3. The
/// direct-link term rides on the transmitting terminal's own phase.
inline RateConstraintSet build_tdbc_df(const GainMatrix& g, double P, const DecodeSets& ds,
                                       std::optional<SubsetPowers> powers = std::nullopt) {
    if (!(P > 0.0)) throw std::invalid_argument("build_tdbc_df: power must be positive");
    const int m = g.relay_count();
    detail::check_decode_sets(ds, m);
    const int a = g.terminal_a(), b = g.terminal_b();
    const SubsetPowers sp = powers ? *powers : detail::proportional_powers(ds, P);

    std::vector<int> both, a_only, b_only;
    std::set_intersection(ds.A.begin(), ds.A.end(), ds.B.begin(), ds.B.end(),
                          std::back_inserter(both));
    std::set_difference(ds.A.begin(), ds.A.end(), ds.B.begin(), ds.B.end(),
                        std::back_inserter(a_only));
    std::set_difference(ds.B.begin(), ds.B.end(), ds.A.begin(), ds.A.end(),
                        std::back_inserter(b_only));

    RateConstraintSet cs(3);
    const double inf = std::numeric_limits<double>::infinity();
    const double direct = capacity(P * g(a, b));

    auto relay_sum = [&](int to, const std::vector<int>& solo, double solo_power) {
        double s = 0.0;
        for (int r : both) s += g(r, to) * sp.both;
        for (int r : solo) s += g(r, to) * solo_power;
        return capacity(s);
    };

    // a-stream: relay decoding bound on phase 1, then direct + broadcast
    double up_a = inf;
    for (int r : ds.A) up_a = std::min(up_a, capacity(P * g(a, r)));
    if (std::isfinite(up_a)) cs.add(RateTarget::A, {up_a, 0.0, 0.0});
    cs.add(RateTarget::A, {direct, 0.0, relay_sum(b, a_only, sp.a_only)});

    // b-stream: same structure on phase 2
    double up_b = inf;
    for (int r : ds.B) up_b = std::min(up_b, capacity(P * g(b, r)));
    if (std::isfinite(up_b)) cs.add(RateTarget::B, {0.0, up_b, 0.0});
    cs.add(RateTarget::B, {0.0, direct, relay_sum(a, b_only, sp.b_only)});

    return cs;
}

/// Chain protocol with one relay per hop and t = m+2 phases. Each stream
/// must be decodable at every node along its path from the energy that node
/// accumulates across the phases in which upstream nodes transmit.
inline RateConstraintSet build_mhmr_df_full(const GainMatrix& g, double P,
                                            const RelayOrder& order) {
    if (!(P > 0.0)) throw std::invalid_argument("build_mhmr_df_full: power must be positive");
    const int m = g.relay_count();
    order.validate(m);
    const int t = m + 2;

    // Chain position -> node id. Position 0 is a, position m+1 is b.
    auto node = [&](int pos) {
        if (pos == 0) return g.terminal_a();
        if (pos == m + 1) return g.terminal_b();
        return order.order[pos - 1];
    };

    RateConstraintSet cs(t);
    for (int k = 1; k <= m + 1; ++k) {
        // a-stream into chain position k: upstream node i-1 transmits in
        // phase m+3-i.
        std::vector<double> ca(t, 0.0);
        for (int i = 1; i <= k; ++i)
            ca[(m + 3 - i) - 1] += capacity(P * g(node(i - 1), node(k)));
        cs.add(RateTarget::A, std::move(ca));

        // b-stream into position m+1-k: node m+2-i transmits in phase i.
        std::vector<double> cb(t, 0.0);
        for (int i = 1; i <= k; ++i)
            cb[i - 1] += capacity(P * g(node(m + 2 - i), node(m + 1 - k)));
        cs.add(RateTarget::B, std::move(cb));
    }
    return cs;
}

/// Multi-relay-per-hop chain protocol with 3 < t < m+2 phases. Relays within
/// a hop cooperate coherently, so a receiving node collects the whole hop's
/// power inside a single capacity term.
inline RateConstraintSet build_mhmr_df_general(const GainMatrix& g, double P,
                                               const HopPartition& part, int t) {
    if (!(P > 0.0)) throw std::invalid_argument("build_mhmr_df_general: power must be positive");
    const int m = g.relay_count();
    if (!(t > 3 && t <= m + 2))
        throw std::invalid_argument("build_mhmr_df_general: need 3 < t <= m+2");
    if (part.phase_count() != t)
        throw std::invalid_argument("build_mhmr_df_general: partition/phase count mismatch");
    part.validate(m);

    // Hop index -> member nodes. Hop 0 = {a}, hop t-1 = {b}.
    auto hop_nodes = [&](int h) -> std::vector<int> {
        if (h == 0) return {g.terminal_a()};
        if (h == t - 1) return {g.terminal_b()};
        return part.hops[h - 1];
    };

    RateConstraintSet cs(t);
    for (int k = 1; k <= t - 1; ++k) {
        for (int rx : hop_nodes(k)) {
            // a-stream: hop i-1 transmits in phase t+1-i toward receiver rx.
            std::vector<double> ca(t, 0.0);
            for (int i = 1; i <= k; ++i) {
                double s = 0.0;
                for (int tx : hop_nodes(i - 1)) s += g(tx, rx) * P;
                ca[(t + 1 - i) - 1] += capacity(s);
            }
            cs.add(RateTarget::A, std::move(ca));
        }
        for (int rx : hop_nodes(t - 1 - k)) {
            // b-stream: hop t-i transmits in phase i toward receiver rx.
            std::vector<double> cb(t, 0.0);
            for (int i = 1; i <= k; ++i) {
                double s = 0.0;
                for (int tx : hop_nodes(t - i)) s += g(tx, rx) * P;
                cb[i - 1] += capacity(s);
            }
            cs.add(RateTarget::B, std::move(cb));
        }
    }
    return cs;
}

/// All 4^m assignments of relays to {idle, a-only, b-only, both}.
inline std::vector<DecodeSets> enumerate_decode_sets(int m, int cap = 8) {
    if (m < 0) throw std::invalid_argument("enumerate_decode_sets: negative relay count");
    if (m > cap)
        throw EnumerationLimitError(
            "enumerate_decode_sets: 4^m scan exceeds cap; supply explicit decode sets");
    std::vector<DecodeSets> out;
    const size_t total = static_cast<size_t>(1) << (2 * m);
    out.reserve(total);
    for (size_t code = 0; code < total; ++code) {
        DecodeSets ds;
        size_t c = code;
        for (int r = 1; r <= m; ++r, c >>= 2) {
            switch (c & 3) {
                case 1: ds.A.insert(r); break;
                case 2: ds.B.insert(r); break;
                case 3: ds.A.insert(r); ds.B.insert(r); break;
                default: break;
            }
        }
        out.push_back(std::move(ds));
    }
    return out;
}

}  // namespace bdrelay
