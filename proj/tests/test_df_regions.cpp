#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "bdrelay/df_regions.hpp"
#include "bdrelay/lp.hpp"
#include "bdrelay/protocols.hpp"

using namespace bdrelay;

namespace {

// Straight-line re-evaluation of each protocol's bounds, kept independent of
// the builders on purpose.
double c2(double x) { return std::log2(1.0 + x); }

bool has_constraint(const RateConstraintSet& cs, RateTarget t, const std::vector<double>& coeff,
                    double tol = 1e-12) {
    for (const auto& c : cs.constraints) {
        if (c.target != t) continue;
        bool match = true;
        for (size_t i = 0; i < coeff.size(); ++i)
            if (std::abs(c.coeff[i] - coeff[i]) > tol) { match = false; break; }
        if (match) return true;
    }
    return false;
}

int count_target(const RateConstraintSet& cs, RateTarget t) {
    int n = 0;
    for (const auto& c : cs.constraints) n += (c.target == t);
    return n;
}

GainMatrix random_gains(std::mt19937& rng, int m, double lo = 0.1, double hi = 4.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    GainMatrix g(m);
    for (int i = 0; i < m + 2; ++i)
        for (int j = i + 1; j < m + 2; ++j) g.set(i, j, u(rng));
    return g;
}

}  // namespace

TEST_CASE("two-phase builder on the bundled example, both relays decode both", "[df]") {
    const GainMatrix g = example_network_gains();
    DecodeSets ds{{1, 2}, {1, 2}};
    const RateConstraintSet cs = build_mabc_df(g, 1.0, ds);
    REQUIRE(cs.phase_count == 2);

    // Independent evaluation, values frozen from the closed forms:
    // uplink min C(0.32), downlink C(2.08), sum bound C(1.04).
    CHECK(has_constraint(cs, RateTarget::A, {0.4005379295837288, 0.0}));
    CHECK(has_constraint(cs, RateTarget::A, {0.0, 1.6229303509201767}));
    CHECK(has_constraint(cs, RateTarget::B, {0.4005379295837288, 0.0}));
    CHECK(has_constraint(cs, RateTarget::B, {0.0, 1.6229303509201767}));
    CHECK(has_constraint(cs, RateTarget::Sum, {1.0285691521967708, 0.0}));
    CHECK(cs.constraints.size() == 5);

    const PhaseSchedule half({0.5, 0.5});
    CHECK(cs.cap_at(RateTarget::A, half) == Catch::Approx(0.5 * c2(0.32)).epsilon(1e-14));
    CHECK(cs.cap_at(RateTarget::Sum, half) == Catch::Approx(0.5 * c2(1.04)).epsilon(1e-14));
}

TEST_CASE("two-phase builder handles one-sided and empty decode sets", "[df]") {
    const GainMatrix g = example_network_gains();

    // Nobody decodes anything: both rates pinned to zero.
    const RateConstraintSet none = build_mabc_df(g, 1.0, DecodeSets{{}, {}});
    const PhaseSchedule half({0.5, 0.5});
    CHECK(none.cap_at(RateTarget::A, half) == 0.0);
    CHECK(none.cap_at(RateTarget::B, half) == 0.0);

    // Disjoint sets: interference-limited uplink terms, no sum bound.
    DecodeSets split{{1}, {2}};
    const RateConstraintSet cs = build_mabc_df(g, 1.0, split);
    CHECK(count_target(cs, RateTarget::Sum) == 0);
    // r1 decodes the a-stream against b's interference: C(g_a1 / (g_b1 + 2)).
    CHECK(has_constraint(cs, RateTarget::A, {c2(1.44 / (0.64 + 2.0)), 0.0}));
    // Downlink power splits P evenly across the two active relays.
    CHECK(has_constraint(cs, RateTarget::A, {0.0, c2(0.64 * 0.5)}));
    CHECK(has_constraint(cs, RateTarget::B, {0.0, c2(0.64 * 0.5)}));
}

TEST_CASE("three-phase builder on the bundled example", "[df]") {
    const GainMatrix g = example_network_gains();
    const RateConstraintSet cs = build_tdbc_df(g, 1.0, DecodeSets{{1}, {2}});
    REQUIRE(cs.phase_count == 3);

    CHECK(has_constraint(cs, RateTarget::A, {1.2868811477881617, 0.0, 0.0}));
    CHECK(has_constraint(cs, RateTarget::A,
                         {0.056583528366367514, 0.0, 0.4005379295837288}));
    CHECK(has_constraint(cs, RateTarget::B, {0.0, 1.2868811477881617, 0.0}));
    CHECK(has_constraint(cs, RateTarget::B,
                         {0.0, 0.056583528366367514, 0.4005379295837288}));

    const PhaseSchedule third({1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(cs.cap_at(RateTarget::A, third) ==
          Catch::Approx(0.15237381931669877).epsilon(1e-14));
    CHECK(cs.cap_at(RateTarget::B, third) ==
          Catch::Approx(0.15237381931669877).epsilon(1e-14));
}

TEST_CASE("three-phase builder with no decoding relays keeps the direct link", "[df]") {
    const GainMatrix g = example_network_gains();
    const RateConstraintSet cs = build_tdbc_df(g, 1.0, DecodeSets{{}, {}});
    // Only the direct-link constraints remain; rates are not forced to zero.
    CHECK(has_constraint(cs, RateTarget::A, {c2(0.04), 0.0, 0.0}));
    CHECK(has_constraint(cs, RateTarget::B, {0.0, c2(0.04), 0.0}));
    CHECK(count_target(cs, RateTarget::A) == 1);
    const LpSolution sol = max_weighted(cs, 1.0);
    CHECK(sol.rates.a == Catch::Approx(c2(0.04)).margin(1e-9));
}

TEST_CASE("single-relay reductions match the direct transcriptions", "[df]") {
    std::mt19937 rng(41);
    for (int rep = 0; rep < 25; ++rep) {
        const GainMatrix g = random_gains(rng, 1);
        std::uniform_real_distribution<double> pu(0.25, 30.0);
        const double P = pu(rng);
        const double ga = g(0, 1), gb = g(2, 1), gab = g(0, 2);

        const RateConstraintSet mabc = build_mabc_df(g, P, DecodeSets{{1}, {1}});
        CHECK(mabc.constraints.size() == 5);
        CHECK(has_constraint(mabc, RateTarget::A, {c2(0.5 * P * ga), 0.0}));
        CHECK(has_constraint(mabc, RateTarget::A, {0.0, c2(P * gb)}));
        CHECK(has_constraint(mabc, RateTarget::B, {c2(0.5 * P * gb), 0.0}));
        CHECK(has_constraint(mabc, RateTarget::B, {0.0, c2(P * ga)}));
        CHECK(has_constraint(mabc, RateTarget::Sum, {c2(0.5 * P * (ga + gb)), 0.0}));

        const RateConstraintSet tdbc = build_tdbc_df(g, P, DecodeSets{{1}, {1}});
        CHECK(tdbc.constraints.size() == 4);
        CHECK(has_constraint(tdbc, RateTarget::A, {c2(P * ga), 0.0, 0.0}));
        CHECK(has_constraint(tdbc, RateTarget::A, {c2(P * gab), 0.0, c2(P * gb)}));
        CHECK(has_constraint(tdbc, RateTarget::B, {0.0, c2(P * gb), 0.0}));
        CHECK(has_constraint(tdbc, RateTarget::B, {0.0, c2(P * gab), c2(P * ga)}));
    }
}

TEST_CASE("chain builder instances", "[df]") {
    const GainMatrix g = example_network_gains();
    const RateConstraintSet cs = build_mhmr_df_full(g, 1.0, RelayOrder::identity(2));
    REQUIRE(cs.phase_count == 4);
    REQUIRE(cs.constraints.size() == 6);

    // First a-stream hop: R_a <= delta_4 * C(P * g[a][r1]).
    CHECK(has_constraint(cs, RateTarget::A, {0.0, 0.0, 0.0, 1.2868811477881617}));
    // Frozen per-receiver caps at the uniform schedule.
    const PhaseSchedule quarter({0.25, 0.25, 0.25, 0.25});
    std::vector<double> caps_a;
    for (const auto& c : cs.constraints) {
        if (c.target != RateTarget::A) continue;
        double v = 0.0;
        for (int l = 0; l < 4; ++l) v += 0.25 * c.coeff[l];
        caps_a.push_back(v);
    }
    std::sort(caps_a.begin(), caps_a.end());
    CHECK(caps_a[0] == Catch::Approx(0.3217202869470404).epsilon(1e-14));
    CHECK(caps_a[1] == Catch::Approx(0.5142901227494721).epsilon(1e-14));
    CHECK(caps_a[2] == Catch::Approx(0.7589059774326803).epsilon(1e-14));

    // Equal gains, uniform schedule: the one-hop bound is the bottleneck.
    const GainMatrix eq = equal_gains(3, 2.0);
    const RateConstraintSet eqcs = build_mhmr_df_full(eq, 1.0, RelayOrder::identity(3));
    const PhaseSchedule uni = PhaseSchedule::uniform(5);
    CHECK(eqcs.cap_at(RateTarget::A, uni) == Catch::Approx(c2(2.0) / 5.0).epsilon(1e-13));
    CHECK(eqcs.cap_at(RateTarget::B, uni) == Catch::Approx(c2(2.0) / 5.0).epsilon(1e-13));
}

TEST_CASE("general multi-hop builder agrees with the chain on singleton hops", "[df]") {
    // Three relays available, but the partition routes through relays 1 and
    // 2 only; the result must match the chain builder on the induced
    // two-relay subnetwork.
    std::mt19937 rng(43);
    for (int rep = 0; rep < 10; ++rep) {
        const GainMatrix g = random_gains(rng, 3);
        HopPartition part;
        part.hops = {{1}, {2}};
        const RateConstraintSet gen = build_mhmr_df_general(g, 2.0, part, 4);

        GainMatrix sub(2);  // nodes {a, r1, r2, b} of the larger network
        const int keep[4] = {0, 1, 2, 4};
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) sub.set(i, j, g(keep[i], keep[j]));
        const RateConstraintSet full = build_mhmr_df_full(sub, 2.0, RelayOrder::identity(2));

        REQUIRE(gen.constraints.size() == full.constraints.size());
        for (const auto& c : full.constraints) CHECK(has_constraint(gen, c.target, c.coeff));
    }
}

TEST_CASE("general multi-hop builder evaluates hop sums coherently", "[df]") {
    std::mt19937 rng(47);
    const GainMatrix g = random_gains(rng, 4);
    HopPartition part;
    part.hops = {{1, 3}, {2, 4}};
    const double P = 1.7;
    const RateConstraintSet cs = build_mhmr_df_general(g, P, part, 4);

    // Receivers per hop: |R_1| + |R_2| + |{b}| a-constraints, mirrored for b.
    CHECK(count_target(cs, RateTarget::A) == 5);
    CHECK(count_target(cs, RateTarget::B) == 5);

    // Hand evaluation of the k=2 a-stream constraint toward receiver 2 in
    // hop 2: phase 4 carries a -> receiver, phase 3 carries hop 1 -> receiver.
    std::vector<double> expect(4, 0.0);
    expect[4 - 1] = c2(g(0, 2) * P);
    expect[3 - 1] = c2((g(1, 2) + g(3, 2)) * P);
    CHECK(has_constraint(cs, RateTarget::A, expect));

    CHECK_THROWS_AS(build_mhmr_df_general(g, P, part, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_mhmr_df_general(g, P, part, 7), std::invalid_argument);
}

TEST_CASE("regular partition of eight relays into four hops", "[df]") {
    std::mt19937 rng(53);
    const GainMatrix g = random_gains(rng, 8);
    HopPartition part;
    part.hops = {{1, 2}, {3, 4}, {5, 6}, {7, 8}};
    const RateConstraintSet cs = build_mhmr_df_general(g, 1.0, part, 6);
    REQUIRE(cs.phase_count == 6);
    // Receivers: 2 per intermediate hop (4 hops) plus the terminal, per direction.
    CHECK(count_target(cs, RateTarget::A) == 9);
    CHECK(count_target(cs, RateTarget::B) == 9);
}

TEST_CASE("coefficients never decrease with power", "[df]") {
    std::mt19937 rng(59);
    for (int rep = 0; rep < 10; ++rep) {
        const GainMatrix g = random_gains(rng, 2);
        DecodeSets ds{{1}, {1, 2}};
        const RateConstraintSet lo = build_mabc_df(g, 1.0, ds);
        const RateConstraintSet hi = build_mabc_df(g, 4.0, ds);
        REQUIRE(lo.constraints.size() == hi.constraints.size());
        for (size_t i = 0; i < lo.constraints.size(); ++i)
            for (int l = 0; l < 2; ++l)
                CHECK(hi.constraints[i].coeff[l] >= lo.constraints[i].coeff[l] - 1e-12);
    }
}

TEST_CASE("widening the both-streams set tightens the sum bound", "[df]") {
    std::mt19937 rng(61);
    for (int rep = 0; rep < 10; ++rep) {
        const GainMatrix g = random_gains(rng, 3);
        const RateConstraintSet small = build_mabc_df(g, 2.0, DecodeSets{{1}, {1}});
        const RateConstraintSet wide = build_mabc_df(g, 2.0, DecodeSets{{1, 2, 3}, {1, 2, 3}});
        double sum_small = -1.0, sum_wide = -1.0;
        for (const auto& c : small.constraints)
            if (c.target == RateTarget::Sum) sum_small = c.coeff[0];
        for (const auto& c : wide.constraints)
            if (c.target == RateTarget::Sum) sum_wide = c.coeff[0];
        CHECK(sum_wide <= sum_small + 1e-12);
    }
}

TEST_CASE("power-split override keeps the proportional split reachable", "[df]") {
    const GainMatrix g = example_network_gains();
    DecodeSets ds{{1, 2}, {1}};
    // Proportional: both = P/2, a_only = P/2.
    const RateConstraintSet prop = build_mabc_df(g, 2.0, ds);
    const RateConstraintSet manual = build_mabc_df(g, 2.0, ds, SubsetPowers{1.0, 1.0, 0.0});
    REQUIRE(prop.constraints.size() == manual.constraints.size());
    for (const auto& c : prop.constraints) CHECK(has_constraint(manual, c.target, c.coeff));
}

TEST_CASE("power-split scan never loses to the proportional split", "[df]") {
    const GainMatrix g = example_network_gains();
    EvalOptions with_grid;
    with_grid.power_grid = true;
    for (double lambda : {0.0, 0.3, 0.5, 1.0}) {
        for (double P : {1.0, 100.0}) {
            const double plain = best_weighted(Protocol::DfMabc, g, P, lambda).objective;
            const double scanned =
                best_weighted(Protocol::DfMabc, g, P, lambda, with_grid).objective;
            CHECK(scanned >= plain - 1e-12);
            const double plain_t = best_weighted(Protocol::DfTdbc, g, P, lambda).objective;
            const double scanned_t =
                best_weighted(Protocol::DfTdbc, g, P, lambda, with_grid).objective;
            CHECK(scanned_t >= plain_t - 1e-12);
        }
    }
}

TEST_CASE("exhaustive order scan never loses to the fixed chain", "[df]") {
    std::mt19937 rng(97);
    const GainMatrix g = random_gains(rng, 3);
    EvalOptions all_orders;
    all_orders.exhaustive_order = true;
    for (double lambda : {0.0, 0.5, 1.0}) {
        const double fixed = best_weighted(Protocol::DfMhmr, g, 2.0, lambda).objective;
        const double scanned = best_weighted(Protocol::DfMhmr, g, 2.0, lambda, all_orders).objective;
        CHECK(scanned >= fixed - 1e-12);
    }
    EvalOptions too_big;
    too_big.exhaustive_order = true;
    CHECK_THROWS_AS(best_weighted(Protocol::DfMhmr, random_gains(rng, 7), 1.0, 0.5, too_big),
                    EnumerationLimitError);
}

TEST_CASE("decode-set enumeration", "[df]") {
    CHECK(enumerate_decode_sets(1).size() == 4);
    const auto sets = enumerate_decode_sets(2);
    CHECK(sets.size() == 16);

    auto contains = [&](const std::set<int>& A, const std::set<int>& B) {
        for (const auto& ds : sets)
            if (ds.A == A && ds.B == B) return true;
        return false;
    };
    // The four highlighted two-relay configurations.
    CHECK(contains({1, 2}, {1, 2}));
    CHECK(contains({1, 2}, {1}));
    CHECK(contains({2}, {1, 2}));
    CHECK(contains({2}, {1}));

    // Every relay has exactly one role per configuration, so each (A, B)
    // pair appears once.
    std::set<std::string> ids;
    for (const auto& ds : sets) ids.insert(ds.id());
    CHECK(ids.size() == sets.size());

    CHECK_THROWS_AS(enumerate_decode_sets(9), EnumerationLimitError);
    CHECK(enumerate_decode_sets(9, 10).size() == 262144);
}
