#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdrelay {

/// One rate pair: a->b and b->a, bits per channel use.
struct RatePair {
    double a = 0.0;
    double b = 0.0;

    double sum() const { return a + b; }
};

/// Relative phase durations of a protocol; they live on the simplex.
struct PhaseSchedule {
    std::vector<double> delta;

    PhaseSchedule() = default;
    explicit PhaseSchedule(std::vector<double> d) : delta(std::move(d)) {}

    int phase_count() const { return static_cast<int>(delta.size()); }

    double sum() const { return std::accumulate(delta.begin(), delta.end(), 0.0); }

    bool on_simplex(double tol = 1e-9) const {
        for (double d : delta)
            if (!(d >= -tol) || !std::isfinite(d)) return false;
        return std::abs(sum() - 1.0) <= tol;
    }

    static PhaseSchedule uniform(int t) {
        return PhaseSchedule(std::vector<double>(t, 1.0 / t));
    }
};

/// Which rate a linear constraint bounds.
enum class RateTarget { A, B, Sum };

/// target <= sum_l delta[l] * coeff[l]
struct RateConstraint {
    RateTarget target;
    std::vector<double> coeff;  // bits per channel use, one entry per phase
};

/// A protocol region in canonical form: linear bounds on (R_a, R_b, R_a+R_b)
/// whose right-hand sides are linear in the phase durations.
struct RateConstraintSet {
    int phase_count = 0;
    std::vector<RateConstraint> constraints;

    explicit RateConstraintSet(int t = 0) : phase_count(t) {
        if (t < 0) throw std::invalid_argument("RateConstraintSet: negative phase count");
    }

    void add(RateTarget target, std::vector<double> coeff) {
        if (static_cast<int>(coeff.size()) != phase_count)
            throw std::invalid_argument("RateConstraintSet: coefficient vector size mismatch");
        for (double c : coeff)
            if (!(c >= 0.0) || !std::isfinite(c))
                throw std::invalid_argument("RateConstraintSet: coefficients must be >= 0");
        constraints.push_back(RateConstraint{target, std::move(coeff)});
    }

    bool bounds_rate_a() const {
        for (const auto& c : constraints)
            if (c.target == RateTarget::A || c.target == RateTarget::Sum) return true;
        return false;
    }

    bool bounds_rate_b() const {
        for (const auto& c : constraints)
            if (c.target == RateTarget::B || c.target == RateTarget::Sum) return true;
        return false;
    }

    /// Largest feasible value of a single target at a fixed schedule
    /// (min over the matching rows; +inf when no row matches).
    double cap_at(RateTarget target, const PhaseSchedule& sched) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : constraints) {
            if (c.target != target) continue;
            double rhs = 0.0;
            for (int l = 0; l < phase_count; ++l) rhs += sched.delta[l] * c.coeff[l];
            best = std::min(best, rhs);
        }
        return best;
    }

    /// True when the pair satisfies every constraint at the schedule.
    bool feasible(const RatePair& r, const PhaseSchedule& sched, double tol = 1e-9) const {
        if (r.a < -tol || r.b < -tol) return false;
        if (r.a > cap_at(RateTarget::A, sched) + tol) return false;
        if (r.b > cap_at(RateTarget::B, sched) + tol) return false;
        return r.a + r.b <= cap_at(RateTarget::Sum, sched) + tol;
    }
};

inline const char* to_string(RateTarget t) {
    switch (t) {
        case RateTarget::A: return "R_a";
        case RateTarget::B: return "R_b";
        case RateTarget::Sum: return "R_a+R_b";
    }
    return "?";
}

}  // namespace bdrelay
