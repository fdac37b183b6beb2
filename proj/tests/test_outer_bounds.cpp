#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bdrelay/lp.hpp"
#include "bdrelay/outer_bounds.hpp"
#include "bdrelay/protocols.hpp"

using namespace bdrelay;

namespace {

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

GainMatrix random_gains(std::mt19937& rng, int m) {
    std::uniform_real_distribution<double> u(0.1, 4.0);
    GainMatrix g(m);
    for (int i = 0; i < m + 2; ++i)
        for (int j = i + 1; j < m + 2; ++j) g.set(i, j, u(rng));
    return g;
}

GainMatrix swap_terminals(const GainMatrix& g) {
    const int n = g.node_count();
    GainMatrix out(g.relay_count());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out.set(n - 1 - i, n - 1 - j, g(i, j));
    return out;
}

}  // namespace

TEST_CASE("two-phase cut bound contains the extreme cuts", "[outer]") {
    const GainMatrix g = example_network_gains();
    const double P = 1.0;
    const RateConstraintSet cs = outer_mabc(g, P);
    REQUIRE(cs.phase_count == 2);
    REQUIRE(cs.constraints.size() == 8);  // 4 cuts x 2 streams

    // Empty cut: every relay listens, nothing forwards.
    CHECK(has_constraint(cs, RateTarget::A, {c2(0.5 * (1.44 + 0.64)), c2(0.0)}));
    // Full cut: nothing listens, every relay forwards.
    CHECK(has_constraint(cs, RateTarget::A, {c2(0.0), c2(0.64 + 1.44)}));
    // Mixed cut {r1}: r2 listens, r1 forwards.
    CHECK(has_constraint(cs, RateTarget::A, {c2(0.5 * 0.64), c2(0.64)}));
    CHECK(has_constraint(cs, RateTarget::B, {c2(0.5 * 1.44), c2(1.44)}));
}

TEST_CASE("three-phase cut bound carries the direct link on the uplink", "[outer]") {
    const GainMatrix g = example_network_gains();
    const RateConstraintSet cs = outer_tdbc(g, 1.0);
    REQUIRE(cs.phase_count == 3);
    REQUIRE(cs.constraints.size() == 8);

    CHECK(has_constraint(cs, RateTarget::A, {c2(1.44 + 0.64 + 0.04), 0.0, c2(0.0)}));
    CHECK(has_constraint(cs, RateTarget::A, {c2(0.04), 0.0, c2(0.64 + 1.44)}));
    CHECK(has_constraint(cs, RateTarget::B, {0.0, c2(0.04), c2(1.44 + 0.64)}));
    // Mixed cut {r2}: r1 listens alongside the direct link, r2 forwards.
    CHECK(has_constraint(cs, RateTarget::A, {c2(1.44 + 0.04), 0.0, c2(1.44)}));
}

TEST_CASE("chain cut bound sums per-phase crossings", "[outer]") {
    const GainMatrix g = example_network_gains();
    const RateConstraintSet cs = outer_mhmr(g, 1.0, RelayOrder::identity(2));
    REQUIRE(cs.phase_count == 4);
    REQUIRE(cs.constraints.size() == 8);

    // Empty cut: only terminal a transmits, toward both relays and b.
    CHECK(has_constraint(cs, RateTarget::A, {0.0, 0.0, 0.0, c2(1.44 + 0.64 + 0.04)}));
    // Full cut: a, r1, r2 each transmit toward b in their own phase.
    CHECK(has_constraint(cs, RateTarget::A, {0.0, c2(1.44), c2(0.64), c2(0.04)}));
    // Cut {r1}: transmitters a (phase 4) and r1 (phase 3), receivers r2 and b.
    CHECK(has_constraint(cs, RateTarget::A, {0.0, 0.0, c2(4.0 + 0.64), c2(0.64 + 0.04)}));
    // Mirror: b transmits in phase 1.
    CHECK(has_constraint(cs, RateTarget::B, {c2(1.44 + 0.64 + 0.04), 0.0, 0.0, 0.0}));
}

TEST_CASE("general-hop cut bound matches the chain on singleton hops", "[outer]") {
    // An all-singleton partition is the t = m+2 boundary of the general
    // form, where it must coincide with the dedicated chain bound.
    std::mt19937 rng(67);
    for (int rep = 0; rep < 8; ++rep) {
        const GainMatrix g = random_gains(rng, 2);
        HopPartition part;
        part.hops = {{1}, {2}};
        const RateConstraintSet gen = outer_mhmr_general(g, 1.3, part, 4);
        const RateConstraintSet chain = outer_mhmr(g, 1.3, RelayOrder::identity(2));
        REQUIRE(gen.constraints.size() == chain.constraints.size());
        for (const auto& c : chain.constraints) CHECK(has_constraint(gen, c.target, c.coeff));
    }
    const GainMatrix g3 = random_gains(rng, 3);
    HopPartition chain3;
    chain3.hops = {{1}, {2}, {3}};
    const RateConstraintSet gen3 = outer_mhmr_general(g3, 2.0, chain3, 5);
    const RateConstraintSet direct3 = outer_mhmr(g3, 2.0, RelayOrder::identity(3));
    REQUIRE(gen3.constraints.size() == direct3.constraints.size());
    for (const auto& c : direct3.constraints) CHECK(has_constraint(gen3, c.target, c.coeff));
}

TEST_CASE("general-hop cut bound hand evaluation", "[outer]") {
    std::mt19937 rng(71);
    const GainMatrix g = random_gains(rng, 4);
    HopPartition part;
    part.hops = {{1, 2}, {3, 4}};
    const double P = 2.0;
    const RateConstraintSet cs = outer_mhmr_general(g, P, part, 4);
    REQUIRE(cs.constraints.size() == 2 * 16);

    // Cut {1,3}: a-stream transmitters a (hop 0, phase 4), relay 1 (hop 1,
    // phase 3), relay 3 (hop 2, phase 2); receivers are the complement
    // {2,4} minus the transmitter's own hop, plus terminal b.
    std::vector<double> expect(4, 0.0);
    expect[4 - 1] = c2(P * (g(0, 2) + g(0, 4) + g(0, 5)));
    expect[3 - 1] = c2(P * (g(1, 4) + g(1, 5)));          // hop-mate 2 conditioned out
    expect[2 - 1] = c2(P * (g(3, 2) + g(3, 5)));          // hop-mate 4 conditioned out
    CHECK(has_constraint(cs, RateTarget::A, expect));

    // All relays on the source side: only terminal crossings remain for the
    // a-stream in hop phases, each toward b alone.
    std::vector<double> full(4, 0.0);
    full[4 - 1] = c2(P * g(0, 5));
    full[3 - 1] = c2(P * (g(1, 5) + g(2, 5)));
    full[2 - 1] = c2(P * (g(3, 5) + g(4, 5)));
    CHECK(has_constraint(cs, RateTarget::A, full));
}

TEST_CASE("terminal swap mirrors the two bound families", "[outer]") {
    std::mt19937 rng(73);
    for (int rep = 0; rep < 8; ++rep) {
        const GainMatrix g = random_gains(rng, 3);
        const GainMatrix swapped = swap_terminals(g);
        for (double lambda : {0.0, 0.3, 1.0}) {
            const auto base = max_weighted(outer_mabc(g, 2.0), lambda);
            const auto mirror = max_weighted(outer_mabc(swapped, 2.0), 1.0 - lambda);
            CHECK(mirror.rates.a == Catch::Approx(base.rates.b).margin(1e-8));
            CHECK(mirror.rates.b == Catch::Approx(base.rates.a).margin(1e-8));
        }
    }
}

TEST_CASE("dropping a cut never shrinks the region", "[outer]") {
    std::mt19937 rng(79);
    for (int rep = 0; rep < 8; ++rep) {
        const GainMatrix g = random_gains(rng, 2);
        const RateConstraintSet full = outer_mabc(g, 1.5);
        for (size_t drop = 0; drop < full.constraints.size(); drop += 3) {
            RateConstraintSet reduced(2);
            for (size_t i = 0; i < full.constraints.size(); ++i)
                if (i != drop)
                    reduced.add(full.constraints[i].target, full.constraints[i].coeff);
            for (double lambda : {0.0, 0.5, 1.0})
                CHECK(max_weighted(reduced, lambda).objective >=
                      max_weighted(full, lambda).objective - 1e-9);
        }
    }
}

TEST_CASE("achievable frontiers stay inside the cut bounds", "[outer]") {
    std::mt19937 rng(83);
    for (int rep = 0; rep < 6; ++rep) {
        const int m = 1 + rep % 3;
        const GainMatrix g = random_gains(rng, m);
        for (double P : {1.0, 100.0}) {
            for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                CHECK(best_weighted(Protocol::DfMabc, g, P, lambda).objective <=
                      best_weighted(Protocol::OutMabc, g, P, lambda).objective + 1e-9);
                CHECK(best_weighted(Protocol::DfTdbc, g, P, lambda).objective <=
                      best_weighted(Protocol::OutTdbc, g, P, lambda).objective + 1e-9);
                CHECK(best_weighted(Protocol::DfMhmr, g, P, lambda).objective <=
                      best_weighted(Protocol::OutMhmr, g, P, lambda).objective + 1e-9);
            }
        }
    }
}

TEST_CASE("cut enumeration cap", "[outer]") {
    const GainMatrix g = equal_gains(2, 1.0);
    CHECK_THROWS_AS(outer_mabc(g, 1.0, /*cap=*/1), EnumerationLimitError);
}

TEST_CASE("large degenerate chain bound solves to the reference optimum", "[outer]") {
    // 512-row instance that once drove the solver onto a sub-eps pivot;
    // reference values frozen from an independent LP solver.
    const GainMatrix g = line_gains(8, 1.0, 3.8, 1.0, 0.04);
    const RateConstraintSet cs = outer_mhmr(g, 100.0, RelayOrder::identity(8));
    REQUIRE(cs.constraints.size() == 512);
    CHECK(max_weighted(cs, 0.0).objective == Catch::Approx(8.170630058879192).epsilon(1e-9));
    CHECK(max_weighted(cs, 1.0).objective == Catch::Approx(8.17063005887919).epsilon(1e-9));
    CHECK(2.0 * max_weighted(cs, 0.5).objective ==
          Catch::Approx(11.195498906617583).epsilon(1e-9));
}
