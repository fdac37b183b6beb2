#pragma once

#include <cstdio>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bdrelay/detail/parallel.hpp"
#include "bdrelay/lp.hpp"
#include "bdrelay/rates.hpp"

namespace bdrelay {

/// One traced frontier point with its provenance.
struct BoundaryPoint {
    double lambda = 0.0;
    RatePair rates;
    PhaseSchedule schedule;
    std::string config_id;
    double objective = 0.0;
};

/// Pareto frontier of a region union: points sorted by R_a ascending with
/// R_b nonincreasing.
struct RegionBoundary {
    std::vector<BoundaryPoint> points;
};

/// A constraint set together with the identifier of the configuration
/// (decode sets, relay order, hop partition, power split) that produced it.
struct LabeledConstraintSet {
    std::string id;
    RateConstraintSet cs;
};

/// Lazily enumerable family of candidate configurations for one protocol.
struct ConstraintSetProvider {
    size_t count = 0;
    std::function<LabeledConstraintSet(size_t)> at;
};

inline ConstraintSetProvider make_provider(std::vector<LabeledConstraintSet> sets) {
    auto shared = std::make_shared<std::vector<LabeledConstraintSet>>(std::move(sets));
    ConstraintSetProvider p;
    p.count = shared->size();
    p.at = [shared](size_t i) { return (*shared)[i]; };
    return p;
}

inline std::vector<double> lambda_sweep(int steps = 101) {
    if (steps < 2) return {0.5};
    std::vector<double> l(steps);
    for (int i = 0; i < steps; ++i) l[i] = static_cast<double>(i) / (steps - 1);
    return l;
}

namespace detail {

/// Keeps the Pareto-maximal staircase: R_a ascending, R_b nonincreasing,
/// dominated and duplicate points dropped.
inline std::vector<BoundaryPoint> pareto_filter(std::vector<BoundaryPoint> pts) {
    std::stable_sort(pts.begin(), pts.end(), [](const BoundaryPoint& x, const BoundaryPoint& y) {
        if (x.rates.a != y.rates.a) return x.rates.a < y.rates.a;
        return x.rates.b > y.rates.b;
    });
    std::vector<BoundaryPoint> kept;
    double max_b = -1.0;
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        if (it->rates.b > max_b + 1e-15) {
            kept.push_back(*it);
            max_b = it->rates.b;
        }
    }
    std::reverse(kept.begin(), kept.end());
    return kept;
}

/// Upper concave envelope of a Pareto staircase (time-sharing closure).
inline std::vector<BoundaryPoint> concave_envelope(const std::vector<BoundaryPoint>& pts) {
    if (pts.size() <= 2) return pts;
    std::vector<BoundaryPoint> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& q = hull[hull.size() - 2];
            const auto& r = hull[hull.size() - 1];
            const double cross = (r.rates.a - q.rates.a) * (p.rates.b - q.rates.b) -
                                 (r.rates.b - q.rates.b) * (p.rates.a - q.rates.a);
            if (cross >= -1e-15) hull.pop_back();  // r is under or on chord q-p
            else break;
        }
        hull.push_back(p);
    }
    return hull;
}

}  // namespace detail

/// Per-weight winners of the union of all configurations: for each lambda,
/// every configuration is optimized and the best kept (ties resolved toward
/// the lexicographically larger rate pair, then the earlier configuration).
/// One point per weight, in sweep order.
inline std::vector<BoundaryPoint> sweep_winners(const ConstraintSetProvider& provider,
                                                const std::vector<double>& lambdas) {
    if (provider.count == 0 || lambdas.empty())
        throw std::invalid_argument("sweep_winners: need at least one config and one weight");

    std::vector<BoundaryPoint> winners(lambdas.size());
    detail::parallel_for(lambdas.size(), [&](size_t li) {
        const double lambda = lambdas[li];
        BoundaryPoint best;
        bool have = false;
        for (size_t ci = 0; ci < provider.count; ++ci) {
            LabeledConstraintSet lcs = provider.at(ci);
            LpSolution sol = max_weighted(lcs.cs, lambda);
            const bool better =
                !have || sol.objective > best.objective + 1e-12 ||
                (sol.objective > best.objective - 1e-12 &&
                 (sol.rates.a > best.rates.a + 1e-12 ||
                  (sol.rates.a > best.rates.a - 1e-12 && sol.rates.b > best.rates.b + 1e-12)));
            if (better) {
                best = BoundaryPoint{lambda, sol.rates, sol.schedule, lcs.id, sol.objective};
                have = true;
            }
        }
        winners[li] = std::move(best);
    });
    return winners;
}

/// Traces the weighted-sum frontier of the union of all configurations:
/// for each weight the best configuration wins, then the union of winners is
/// reduced to its Pareto staircase. With `convex_hull` the time-sharing
/// closure (upper concave envelope) is returned instead; by default regions
/// are reported per fixed schedule without hulling.
inline RegionBoundary trace_boundary(const ConstraintSetProvider& provider,
                                     const std::vector<double>& lambdas,
                                     bool convex_hull = false) {
    RegionBoundary out;
    out.points = detail::pareto_filter(sweep_winners(provider, lambdas));
    if (convex_hull) out.points = detail::concave_envelope(out.points);
    return out;
}

inline RegionBoundary trace_boundary(const std::vector<LabeledConstraintSet>& configs,
                                     const std::vector<double>& lambdas,
                                     bool convex_hull = false) {
    return trace_boundary(make_provider(configs), lambdas, convex_hull);
}

/// Builder-based form: `builder` maps a configuration (anything with an
/// `id()`) to its constraint set.
template <class Builder, class Config>
RegionBoundary trace_boundary(Builder&& builder, const std::vector<Config>& configs,
                              const std::vector<double>& lambdas, bool convex_hull = false) {
    std::vector<LabeledConstraintSet> sets;
    sets.reserve(configs.size());
    for (const auto& cfg : configs) sets.push_back({cfg.id(), builder(cfg)});
    return trace_boundary(make_provider(std::move(sets)), lambdas, convex_hull);
}

/// CSV export: lambda, R_a, R_b, delta_1..delta_t, config_id.
inline void write_points_csv(const std::vector<BoundaryPoint>& points, int phase_count,
                             std::ostream& os) {
    os << "lambda,R_a,R_b";
    for (int l = 1; l <= phase_count; ++l) os << ",delta_" << l;
    os << ",config_id\n";
    char buf[64];
    auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        os << buf << sep;
    };
    for (const auto& p : points) {
        put(p.lambda, ',');
        put(p.rates.a, ',');
        put(p.rates.b, ',');
        for (int l = 0; l < phase_count; ++l)
            put(l < p.schedule.phase_count() ? p.schedule.delta[l] : 0.0, ',');
        os << p.config_id << "\n";
    }
}

inline void write_boundary_csv(const RegionBoundary& boundary, int phase_count,
                               std::ostream& os) {
    write_points_csv(boundary.points, phase_count, os);
}

}  // namespace bdrelay
