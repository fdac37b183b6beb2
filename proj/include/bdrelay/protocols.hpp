#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "bdrelay/af_regions.hpp"
#include "bdrelay/boundary.hpp"
#include "bdrelay/df_regions.hpp"
#include "bdrelay/lp.hpp"
#include "bdrelay/outer_bounds.hpp"

namespace bdrelay {

/// Every evaluable protocol/bound family.
enum class Protocol {
    DfMabc,
    DfTdbc,
    DfMhmr,
    AfMabc,
    AfTdbc,
    AfMhmr,
    OutMabc,
    OutTdbc,
    OutMhmr,
};

inline const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::DfMabc: return "df_mabc";
        case Protocol::DfTdbc: return "df_tdbc";
        case Protocol::DfMhmr: return "df_mhmr";
        case Protocol::AfMabc: return "af_mabc";
        case Protocol::AfTdbc: return "af_tdbc";
        case Protocol::AfMhmr: return "af_mhmr";
        case Protocol::OutMabc: return "out_mabc";
        case Protocol::OutTdbc: return "out_tdbc";
        case Protocol::OutMhmr: return "out_mhmr";
    }
    return "?";
}

inline std::optional<Protocol> parse_protocol(const std::string& name) {
    static const std::pair<const char*, Protocol> table[] = {
        {"df_mabc", Protocol::DfMabc}, {"df_tdbc", Protocol::DfTdbc},
        {"df_mhmr", Protocol::DfMhmr}, {"af_mabc", Protocol::AfMabc},
        {"af_tdbc", Protocol::AfTdbc}, {"af_mhmr", Protocol::AfMhmr},
        {"out_mabc", Protocol::OutMabc}, {"out_tdbc", Protocol::OutTdbc},
        {"out_mhmr", Protocol::OutMhmr},
    };
    for (const auto& [n, p] : table)
        if (name == n) return p;
    return std::nullopt;
}

inline std::vector<Protocol> all_protocols() {
    return {Protocol::DfMabc, Protocol::DfTdbc, Protocol::DfMhmr,
            Protocol::AfMabc, Protocol::AfTdbc, Protocol::AfMhmr,
            Protocol::OutMabc, Protocol::OutTdbc, Protocol::OutMhmr};
}

inline bool is_af(Protocol p) {
    return p == Protocol::AfMabc || p == Protocol::AfTdbc || p == Protocol::AfMhmr;
}

inline int protocol_phase_count(Protocol p, int m) {
    switch (p) {
        case Protocol::DfMabc:
        case Protocol::AfMabc:
        case Protocol::OutMabc: return 2;
        case Protocol::DfTdbc:
        case Protocol::AfTdbc:
        case Protocol::OutTdbc: return 3;
        default: return m + 2;
    }
}

/// Knobs of a protocol evaluation.
struct EvalOptions {
    int decode_set_cap = 8;        // 4^m enumeration ceiling
    int cut_cap = kCutEnumerationCap;
    bool power_grid = false;       // scan relay power splits beyond proportional
    int power_grid_points = 21;    // grid levels per free power ratio
    bool exhaustive_order = false; // scan all chain orders (m <= 6)
    std::optional<RelayOrder> order;  // chain order when not exhaustive
    // Explicit decode-set list replacing the 4^m scan (also the way past the cap).
    std::optional<std::vector<DecodeSets>> decode_sets;
    // Hop partition switching the multi-hop families to their (m,t) forms.
    std::optional<HopPartition> partition;
};

/// Phase count including the (m,t) override carried by the options.
inline int protocol_phase_count(Protocol p, int m, const EvalOptions& opt) {
    if ((p == Protocol::DfMhmr || p == Protocol::OutMhmr) && opt.partition)
        return opt.partition->phase_count();
    return protocol_phase_count(p, m);
}

namespace detail {

/// Power splits to try for the relay broadcast phase: the proportional
/// default, plus (optionally) a grid over how the budget divides among the
/// nonempty role subsets.
inline std::vector<std::optional<SubsetPowers>> power_candidates(const DecodeSets& ds, double P,
                                                                 const EvalOptions& opt) {
    std::vector<std::optional<SubsetPowers>> out;
    out.push_back(std::nullopt);  // proportional split
    if (!opt.power_grid) return out;

    std::vector<int> both;
    std::set_intersection(ds.A.begin(), ds.A.end(), ds.B.begin(), ds.B.end(),
                          std::back_inserter(both));
    const bool has_both = !both.empty();
    const bool has_a = ds.A.size() > both.size();
    const bool has_b = ds.B.size() > both.size();
    const int present = int(has_both) + int(has_a) + int(has_b);
    if (present <= 1) return out;  // a lone subset always takes the full budget

    const int n = std::max(2, opt.power_grid_points);
    auto make = [&](double f_both, double f_a, double f_b) {
        SubsetPowers sp;
        sp.both = f_both * P;
        sp.a_only = f_a * P;
        sp.b_only = f_b * P;
        out.push_back(sp);
    };
    if (present == 2) {
        for (int i = 0; i < n; ++i) {
            const double f = static_cast<double>(i) / (n - 1);
            if (has_both && has_a) make(f, 1.0 - f, 0.0);
            else if (has_both && has_b) make(f, 0.0, 1.0 - f);
            else make(0.0, f, 1.0 - f);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; i + j < n; ++j) {
                const double fb = static_cast<double>(i) / (n - 1);
                const double fa = static_cast<double>(j) / (n - 1);
                make(fb, fa, 1.0 - fb - fa);
            }
        }
    }
    return out;
}

inline std::string power_suffix(const std::optional<SubsetPowers>& sp) {
    if (!sp) return "";
    char buf[80];
    std::snprintf(buf, sizeof(buf), "|P=%.3g/%.3g/%.3g", sp->both, sp->a_only, sp->b_only);
    return buf;
}

inline std::vector<RelayOrder> candidate_orders(int m, const EvalOptions& opt) {
    if (!opt.exhaustive_order) {
        return {opt.order ? *opt.order : RelayOrder::identity(m)};
    }
    if (m > 6)
        throw EnumerationLimitError("exhaustive relay-order scan limited to m <= 6");
    std::vector<RelayOrder> out;
    RelayOrder o = RelayOrder::identity(m);
    do {
        out.push_back(o);
    } while (std::next_permutation(o.order.begin(), o.order.end()));
    return out;
}

}  // namespace detail

/// All candidate constraint sets for one protocol on one network. AF
/// protocols have closed-form rate points instead and are not representable
/// here.
inline std::vector<LabeledConstraintSet> protocol_constraint_sets(Protocol proto,
                                                                  const GainMatrix& g, double P,
                                                                  const EvalOptions& opt = {}) {
    const int m = g.relay_count();
    std::vector<LabeledConstraintSet> out;
    switch (proto) {
        case Protocol::DfMabc:
        case Protocol::DfTdbc: {
            const std::vector<DecodeSets> sets =
                opt.decode_sets ? *opt.decode_sets : enumerate_decode_sets(m, opt.decode_set_cap);
            for (const auto& ds : sets) {
                for (const auto& sp : detail::power_candidates(ds, P, opt)) {
                    auto cs = proto == Protocol::DfMabc ? build_mabc_df(g, P, ds, sp)
                                                        : build_tdbc_df(g, P, ds, sp);
                    out.push_back({ds.id() + detail::power_suffix(sp), std::move(cs)});
                }
            }
            return out;
        }
        case Protocol::DfMhmr: {
            if (opt.partition) {
                out.push_back({opt.partition->id(),
                               build_mhmr_df_general(g, P, *opt.partition,
                                                     opt.partition->phase_count())});
                return out;
            }
            for (const auto& ord : detail::candidate_orders(m, opt))
                out.push_back({ord.id(), build_mhmr_df_full(g, P, ord)});
            return out;
        }
        case Protocol::OutMabc:
            out.push_back({"cutset", outer_mabc(g, P, opt.cut_cap)});
            return out;
        case Protocol::OutTdbc:
            out.push_back({"cutset", outer_tdbc(g, P, opt.cut_cap)});
            return out;
        case Protocol::OutMhmr: {
            if (opt.partition) {
                out.push_back({"cutset|" + opt.partition->id(),
                               outer_mhmr_general(g, P, *opt.partition,
                                                  opt.partition->phase_count(), opt.cut_cap)});
                return out;
            }
            const RelayOrder ord = opt.order ? *opt.order : RelayOrder::identity(m);
            out.push_back({"cutset|" + ord.id(), outer_mhmr(g, P, ord, opt.cut_cap)});
            return out;
        }
        default:
            throw std::invalid_argument("protocol_constraint_sets: AF protocols are closed-form");
    }
}

/// Best point of a protocol at one weight.
struct ProtocolPoint {
    RatePair rates;
    PhaseSchedule schedule;
    double objective = 0.0;
    std::string config_id;
};

inline RatePair af_rates(Protocol proto, const GainMatrix& g, double P) {
    switch (proto) {
        case Protocol::AfMabc: return af_mabc_rates(g, P);
        case Protocol::AfTdbc: return af_tdbc_rates(g, P);
        case Protocol::AfMhmr: return af_mhmr_rates(g, P);
        default: throw std::invalid_argument("af_rates: not an AF protocol");
    }
}

inline ProtocolPoint best_weighted(Protocol proto, const GainMatrix& g, double P, double lambda,
                                   const EvalOptions& opt = {}) {
    ProtocolPoint best;
    if (is_af(proto)) {
        best.rates = af_rates(proto, g, P);
        best.schedule = PhaseSchedule::uniform(protocol_phase_count(proto, g.relay_count()));
        best.objective = lambda * best.rates.a + (1.0 - lambda) * best.rates.b;
        best.config_id = "af";
        return best;
    }
    bool have = false;
    for (const auto& lcs : protocol_constraint_sets(proto, g, P, opt)) {
        LpSolution sol = max_weighted(lcs.cs, lambda);
        const bool better = !have || sol.objective > best.objective + 1e-12 ||
                            (sol.objective > best.objective - 1e-12 &&
                             (sol.rates.a > best.rates.a + 1e-12 ||
                              (sol.rates.a > best.rates.a - 1e-12 &&
                               sol.rates.b > best.rates.b + 1e-12)));
        if (better) {
            best = ProtocolPoint{sol.rates, sol.schedule, sol.objective, lcs.id};
            have = true;
        }
    }
    return best;
}

/// Largest achievable R_a + R_b of a protocol (the schedule, decode
/// configuration, and rate split are all optimized for the DF/outer
/// families; AF points are fixed).
inline ProtocolPoint best_sum_rate(Protocol proto, const GainMatrix& g, double P,
                                   const EvalOptions& opt = {}) {
    ProtocolPoint p = best_weighted(proto, g, P, 0.5, opt);
    p.objective = p.rates.a + p.rates.b;
    return p;
}

/// Sum-rate track that the asymptotic gap tables describe. For DF, AF, and
/// the chain outer bound this is the ordinary optimized sum rate. For the
/// two- and three-phase outer bounds it follows the bounding construction
/// behind those tables: each direction keeps only the all-relays cut with
/// its own best schedule, and the two directions add. (The frontier of the
/// actual cut-set region is tighter there -- its sum rate grows like one
/// log P, not the tables' two -- because the extreme cuts cap each rate by
/// min(delta_1, delta_2) log P at any common schedule.)
inline double asymptotic_sum_rate(Protocol proto, const GainMatrix& g, double P,
                                  const EvalOptions& opt = {}) {
    const int m = g.relay_count();
    switch (proto) {
        case Protocol::OutMabc:
        case Protocol::OutTdbc: {
            double fwd_b = 0.0, fwd_a = 0.0;
            for (int r = 1; r <= m; ++r) {
                fwd_b += P * g(r, g.terminal_b());
                fwd_a += P * g(r, g.terminal_a());
            }
            return capacity(fwd_b) + capacity(fwd_a);
        }
        default:
            return best_sum_rate(proto, g, P, opt).objective;
    }
}

/// Frontier of a protocol across a weight sweep.
inline RegionBoundary protocol_boundary(Protocol proto, const GainMatrix& g, double P,
                                        const std::vector<double>& lambdas,
                                        const EvalOptions& opt = {}, bool convex_hull = false) {
    if (is_af(proto)) {
        const RatePair r = af_rates(proto, g, P);
        RegionBoundary b;
        BoundaryPoint pt;
        pt.lambda = 0.5;
        pt.rates = r;
        pt.schedule = PhaseSchedule::uniform(protocol_phase_count(proto, g.relay_count()));
        pt.config_id = "af";
        pt.objective = 0.5 * (r.a + r.b);
        b.points.push_back(std::move(pt));
        return b;
    }
    return trace_boundary(make_provider(protocol_constraint_sets(proto, g, P, opt)), lambdas,
                          convex_hull);
}

}  // namespace bdrelay
