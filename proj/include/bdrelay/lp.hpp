#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "bdrelay/errors.hpp"
#include "bdrelay/rates.hpp"

namespace bdrelay {

namespace detail {

/// Dense two-phase primal simplex for
///     maximize c.x   subject to   A x <= b,  x >= 0.
/// Rows with negative b get an artificial variable and a feasibility phase.
/// Pivoting is Dantzig with lowest-index tie-breaks, falling back to Bland's
/// rule after a fixed iteration budget so degenerate instances terminate.
class Simplex {
public:
    enum class Status { Optimal, Unbounded, Infeasible };

    struct Result {
        Status status = Status::Optimal;
        double objective = 0.0;
        std::vector<double> x;
    };

    static Result solve(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                        const std::vector<double>& c) {
        Simplex s(A, b, c);
        return s.run();
    }

private:
    static constexpr double kCostTol = 1e-9;

    int rows_, n_, n_art_, cols_;
    std::vector<std::vector<double>> T_;  // rows_ x (cols_ + 1), last column is RHS
    std::vector<int> basis_;
    std::vector<char> art_col_;  // marks artificial columns
    const std::vector<double>& c_;

    Simplex(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
            const std::vector<double>& c)
        : rows_(static_cast<int>(A.size())), n_(static_cast<int>(c.size())), c_(c) {
        n_art_ = 0;
        for (double bi : b)
            if (bi < 0.0) ++n_art_;
        cols_ = n_ + rows_ + n_art_;
        T_.assign(rows_, std::vector<double>(cols_ + 1, 0.0));
        basis_.assign(rows_, -1);
        art_col_.assign(cols_, 0);

        int next_art = n_ + rows_;
        for (int i = 0; i < rows_; ++i) {
            const double sign = b[i] < 0.0 ? -1.0 : 1.0;
            for (int j = 0; j < n_; ++j) T_[i][j] = sign * A[i][j];
            T_[i][n_ + i] = sign;  // slack
            T_[i][cols_] = sign * b[i];
            if (sign < 0.0) {
                T_[i][next_art] = 1.0;
                art_col_[next_art] = 1;
                basis_[i] = next_art++;
            } else {
                basis_[i] = n_ + i;
            }
        }
    }

    Result run() {
        if (n_art_ > 0) {
            std::vector<double> phase1(cols_, 0.0);
            for (int j = 0; j < cols_; ++j)
                if (art_col_[j]) phase1[j] = -1.0;
            double z = optimize(phase1, /*forbid_artificial=*/false);
            double scale = 1.0;
            for (int i = 0; i < rows_; ++i) scale = std::max(scale, std::abs(T_[i][cols_]));
            if (z < -1e-8 * scale) return Result{Status::Infeasible, 0.0, {}};
            expel_basic_artificials();
        }
        std::vector<double> full(cols_, 0.0);
        for (int j = 0; j < n_; ++j) full[j] = c_[j];
        double z = optimize(full, /*forbid_artificial=*/true);
        if (!std::isfinite(z)) return Result{Status::Unbounded, z, {}};

        Result res;
        res.x.assign(n_, 0.0);
        for (int i = 0; i < rows_; ++i)
            if (basis_[i] < n_) res.x[basis_[i]] = T_[i][cols_];
        res.objective = 0.0;
        for (int j = 0; j < n_; ++j) res.objective += c_[j] * res.x[j];
        res.status = Status::Optimal;
        return res;
    }

    // Recompute reduced costs and the objective from the current tableau,
    // purging the drift that incremental updates accumulate.
    void price(const std::vector<double>& cost, std::vector<double>& red, double& z) const {
        red = cost;
        z = 0.0;
        for (int i = 0; i < rows_; ++i) {
            const double cb = cost[basis_[i]];
            if (cb == 0.0) continue;
            z += cb * T_[i][cols_];
            for (int j = 0; j < cols_; ++j) red[j] -= cb * T_[i][j];
        }
    }

    // Returns the objective value, or +inf when unbounded.
    double optimize(const std::vector<double>& cost, bool forbid_artificial) {
        std::vector<double> red;
        double z = 0.0;
        price(cost, red, z);

        std::vector<char> banned(cols_, 0);
        const long bland_after = 200 + 20L * (rows_ + cols_);
        const long max_iter = 2000 + 400L * (rows_ + cols_);
        for (long iter = 0;; ++iter) {
            if (iter > max_iter)
                throw std::runtime_error("simplex: iteration limit exceeded");
            if (iter > 0 && iter % 256 == 0) price(cost, red, z);
            const bool bland = iter > bland_after;

            int pc = -1;
            if (bland) {
                for (int j = 0; j < cols_; ++j) {
                    if (banned[j] || (forbid_artificial && art_col_[j])) continue;
                    if (red[j] > kCostTol) { pc = j; break; }
                }
            } else {
                double best = kCostTol;
                for (int j = 0; j < cols_; ++j) {
                    if (banned[j] || (forbid_artificial && art_col_[j])) continue;
                    if (red[j] > best) { best = red[j]; pc = j; }
                }
            }
            if (pc < 0) return z;

            // Ratio test. Entries far below the column's own scale are not
            // pivot candidates: dividing by such an element wrecks the
            // tableau. Ties prefer the largest pivot element for stability,
            // or the lowest basis index once Bland's rule is active.
            double colmax = 0.0;
            for (int i = 0; i < rows_; ++i) colmax = std::max(colmax, T_[i][pc]);
            const double eligible = std::max(1e-9, 1e-7 * colmax);
            int pr = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < rows_; ++i) {
                if (T_[i][pc] <= eligible) continue;
                const double ratio = T_[i][cols_] / T_[i][pc];
                if (ratio < best_ratio - 1e-12) {
                    best_ratio = ratio;
                    pr = i;
                } else if (ratio < best_ratio + 1e-12 && pr >= 0) {
                    const bool take = bland ? basis_[i] < basis_[pr] : T_[i][pc] > T_[pr][pc];
                    if (take) { best_ratio = std::min(best_ratio, ratio); pr = i; }
                }
            }
            if (pr < 0) {
                // No usable pivot entry. With a dust-level reduced cost this
                // is round-off, not a real ray: drop the column and go on.
                // A genuinely unbounded direction carries a solid cost.
                if (red[pc] < 1e-6 * std::max(1.0, std::abs(z))) {
                    banned[pc] = 1;
                    continue;
                }
                return std::numeric_limits<double>::infinity();
            }

            pivot(pr, pc, red, z);
        }
    }

    void pivot(int pr, int pc, std::vector<double>& red, double& z) {
        const double piv = T_[pr][pc];
        for (int j = 0; j <= cols_; ++j) T_[pr][j] /= piv;
        T_[pr][pc] = 1.0;
        for (int i = 0; i < rows_; ++i) {
            if (i == pr) continue;
            const double f = T_[i][pc];
            if (f == 0.0) continue;
            for (int j = 0; j <= cols_; ++j) T_[i][j] -= f * T_[pr][j];
            T_[i][pc] = 0.0;
        }
        const double rf = red[pc];
        z += rf * T_[pr][cols_];
        for (int j = 0; j < cols_; ++j) red[j] -= rf * T_[pr][j];
        red[pc] = 0.0;
        basis_[pr] = pc;
    }

    // After phase 1, pivot degenerate artificials out of the basis when a
    // structural or slack column is available (taking the largest element
    // for stability); all-zero rows stay put and the artificial (at value
    // zero) is simply never allowed back in.
    void expel_basic_artificials() {
        for (int i = 0; i < rows_; ++i) {
            if (basis_[i] < n_ + rows_) continue;
            int pc = -1;
            double best = 1e-9;
            for (int j = 0; j < n_ + rows_; ++j) {
                if (std::abs(T_[i][j]) > best) { best = std::abs(T_[i][j]); pc = j; }
            }
            if (pc < 0) continue;
            std::vector<double> dummy(cols_, 0.0);
            double dz = 0.0;
            pivot(i, pc, dummy, dz);
        }
    }
};

}  // namespace detail

/// Result of a weighted-rate maximization.
struct LpSolution {
    RatePair rates;
    PhaseSchedule schedule;
    double objective = 0.0;
};

/// Maximizes lambda * R_a + (1 - lambda) * R_b over the rate pair and the
/// phase-duration simplex. Ties in the objective are broken toward the
/// lexicographically largest (R_a, R_b) so repeated runs return one vertex.
///
/// A rate with positive weight must be bounded by at least one constraint
/// (directly or through a sum bound), otherwise UnboundedRegionError is
/// thrown. A zero-weight unbounded rate is reported as 0.
inline LpSolution max_weighted(const RateConstraintSet& cs, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("max_weighted: lambda must lie in [0,1]");
    if (cs.phase_count < 1)
        throw std::invalid_argument("max_weighted: need at least one phase");
    const double wa = lambda, wb = 1.0 - lambda;
    const bool has_a = cs.bounds_rate_a();
    const bool has_b = cs.bounds_rate_b();
    if (wa > 0.0 && !has_a)
        throw UnboundedRegionError("max_weighted: R_a has positive weight but no bound");
    if (wb > 0.0 && !has_b)
        throw UnboundedRegionError("max_weighted: R_b has positive weight but no bound");

    const int t = cs.phase_count;
    const int n = 2 + t;  // R_a, R_b, delta_1..delta_t
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    A.reserve(cs.constraints.size() + 3);
    for (const auto& con : cs.constraints) {
        std::vector<double> row(n, 0.0);
        if (con.target == RateTarget::A || con.target == RateTarget::Sum) row[0] = 1.0;
        if (con.target == RateTarget::B || con.target == RateTarget::Sum) row[1] = 1.0;
        for (int l = 0; l < t; ++l) row[2 + l] = -con.coeff[l];
        A.push_back(std::move(row));
        b.push_back(0.0);
    }
    {
        std::vector<double> row(n, 0.0);
        for (int l = 0; l < t; ++l) row[2 + l] = 1.0;
        A.push_back(std::move(row));
        b.push_back(1.0);
    }

    auto solve_for = [&](const std::vector<double>& c) {
        auto res = detail::Simplex::solve(A, b, c);
        if (res.status == detail::Simplex::Status::Unbounded)
            throw UnboundedRegionError("max_weighted: unbounded objective");
        return res;  // Infeasible only through round-off; callers fall back
    };

    std::vector<double> c(n, 0.0);
    c[0] = wa;
    c[1] = wb;
    auto base = solve_for(c);
    if (base.status == detail::Simplex::Status::Infeasible)
        throw std::runtime_error("max_weighted: base problem infeasible");

    // Tie-break toward the lexicographically largest (R_a, R_b): pin the
    // optimum (with a scale-aware slack), push R_a, then R_b. Rates the
    // constraint set leaves unbounded are skipped and stay at zero. On large
    // degenerate instances the pinned re-solve can fail numerically; the
    // refinement is then abandoned in favor of the plain optimum.
    auto pin = [&](const std::vector<double>& obj, double value) {
        std::vector<double> row(n, 0.0);
        for (int j = 0; j < n; ++j) row[j] = -obj[j];
        A.push_back(std::move(row));
        b.push_back(-(value - std::max(1e-11, 1e-10 * std::abs(value))));
    };

    auto refined = base;
    pin(c, base.objective);
    auto improve = [&](int which) {
        std::vector<double> cr(n, 0.0);
        cr[which] = 1.0;
        auto res = solve_for(cr);
        if (res.status != detail::Simplex::Status::Optimal) return false;
        refined = res;
        pin(cr, res.objective);
        return true;
    };
    if (has_a) {
        if (improve(0) && has_b) improve(1);
    } else if (has_b) {
        improve(1);
    }

    // Snap sub-1e-9 dust (refinement slack, pivot round-off) to exact zero;
    // rounding down never violates a constraint.
    auto snap = [](double v) { return v < 1e-9 ? 0.0 : v; };
    LpSolution sol;
    sol.rates.a = snap(refined.x[0]);
    sol.rates.b = snap(refined.x[1]);
    std::vector<double> delta(t);
    double dsum = 0.0;
    for (int l = 0; l < t; ++l) {
        delta[l] = snap(refined.x[2 + l]);
        dsum += delta[l];
    }
    // Unused time is harmless; park it in the first phase so the schedule
    // stays on the simplex without disturbing feasibility.
    if (dsum < 1.0) delta[0] += 1.0 - dsum;
    sol.schedule = PhaseSchedule(std::move(delta));
    sol.objective = wa * sol.rates.a + wb * sol.rates.b;
    return sol;
}

/// Exhaustive simplex-lattice evaluation of the same objective: enumerates
/// schedules with entries in multiples of `step`, computes the per-target
/// caps at each, and keeps the best weighted value. Always a lower bound on
/// the LP optimum; the gap vanishes as the step does.
inline double grid_oracle(const RateConstraintSet& cs, double lambda, double step) {
    if (!(step > 0.0 && step <= 0.1))
        throw std::invalid_argument("grid_oracle: step must lie in (0, 0.1]");
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("grid_oracle: lambda must lie in [0,1]");
    const double wa = lambda, wb = 1.0 - lambda;
    const bool has_a = cs.bounds_rate_a();
    const bool has_b = cs.bounds_rate_b();
    if (wa > 0.0 && !has_a)
        throw UnboundedRegionError("grid_oracle: R_a has positive weight but no bound");
    if (wb > 0.0 && !has_b)
        throw UnboundedRegionError("grid_oracle: R_b has positive weight but no bound");

    const int t = cs.phase_count;
    const long long N = std::max<long long>(1, std::llround(1.0 / step));

    // Caps are evaluated incrementally: cap[c] accumulates coeff.delta.
    const size_t nc = cs.constraints.size();
    std::vector<double> acc(nc, 0.0);
    double best = -std::numeric_limits<double>::infinity();

    auto eval_point = [&]() {
        double ca = std::numeric_limits<double>::infinity();
        double cb = std::numeric_limits<double>::infinity();
        double csum = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < nc; ++i) {
            switch (cs.constraints[i].target) {
                case RateTarget::A: ca = std::min(ca, acc[i]); break;
                case RateTarget::B: cb = std::min(cb, acc[i]); break;
                case RateTarget::Sum: csum = std::min(csum, acc[i]); break;
            }
        }
        if (!has_a) ca = 0.0;  // zero-weight unbounded rate pinned to 0
        if (!has_b) cb = 0.0;
        // Pareto corners of {0<=Ra<=ca, 0<=Rb<=cb, Ra+Rb<=csum}.
        const double ra1 = std::min(ca, csum);
        const double rb1 = std::min(cb, std::max(0.0, csum - ra1));
        const double rb2 = std::min(cb, csum);
        const double ra2 = std::min(ca, std::max(0.0, csum - rb2));
        best = std::max({best, wa * ra1 + wb * rb1, wa * ra2 + wb * rb2});
    };

    // Depth-first walk over compositions of N into t parts. Levels restore
    // the accumulator from a saved copy rather than subtracting, so a lattice
    // point evaluates to the same floating-point caps at every step size
    // (refined lattices then contain the coarse values exactly).
    auto walk = [&](auto&& self, int phase, long long remaining) -> void {
        if (phase == t - 1) {
            const std::vector<double> saved(acc);
            const double d = static_cast<double>(remaining) / static_cast<double>(N);
            for (size_t i = 0; i < nc; ++i) acc[i] += d * cs.constraints[i].coeff[phase];
            eval_point();
            acc = saved;
            return;
        }
        const std::vector<double> saved(acc);
        for (long long k = 0; k <= remaining; ++k) {
            const double d = static_cast<double>(k) / static_cast<double>(N);
            for (size_t i = 0; i < nc; ++i) acc[i] = saved[i] + d * cs.constraints[i].coeff[phase];
            self(self, phase + 1, remaining - k);
        }
        acc = saved;
    };
    if (t == 1) {
        for (size_t i = 0; i < nc; ++i) acc[i] = cs.constraints[i].coeff[0];
        eval_point();
    } else {
        walk(walk, 0, N);
    }
    return best;
}

}  // namespace bdrelay
