#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "bdrelay/channel.hpp"

using namespace bdrelay;

TEST_CASE("capacity at exact points", "[channel]") {
    CHECK(capacity(0.0) == 0.0);
    CHECK(capacity(1.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(capacity(3.0) == Catch::Approx(2.0).margin(1e-15));
    CHECK_THROWS_AS(capacity(-1e-12), std::domain_error);
    CHECK_THROWS_AS(capacity(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    CHECK_THROWS_AS(capacity(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("capacity is monotone and midpoint-concave", "[channel]") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        double x = u(rng), y = u(rng);
        if (x > y) std::swap(x, y);
        CHECK(capacity(x) <= capacity(y) + 1e-15);
        CHECK(capacity(0.5 * (x + y)) >= 0.5 * (capacity(x) + capacity(y)) - 1e-12);
    }
}

TEST_CASE("line gains match the even-spacing rule", "[channel]") {
    // 8 relays on a unit line: relay i sits at i/9.
    const GainMatrix g8 = line_gains(8, 1.0, 3.8, 1.0);
    for (int i = 1; i <= 8; ++i) {
        const double d = i / 9.0;
        CHECK(g8(0, i) == Catch::Approx(std::pow(d, -3.8)).epsilon(1e-14));
    }

    const GainMatrix g1 = line_gains(1, 1.0, 2.0, 1.0);
    CHECK(g1(0, 1) == Catch::Approx(4.0).epsilon(1e-14));
    CHECK(g1(1, 0) == g1(0, 1));

    // Closer pairs have strictly larger gains.
    CHECK(g8(0, 1) > g8(0, 2));
    CHECK(g8(0, 2) > g8(0, 8));

    // Direct-gain override replaces only the a-b entry.
    const GainMatrix gov = line_gains(2, 1.0, 3.8, 1.0, 0.04);
    CHECK(gov(0, 3) == 0.04);
    CHECK(gov(0, 1) == Catch::Approx(std::pow(1.0 / 3.0, -3.8)).epsilon(1e-14));
}

TEST_CASE("line gains are symmetric with zero diagonal", "[channel]") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> mm(1, 8);
    std::uniform_real_distribution<double> ee(0.5, 4.0);
    for (int rep = 0; rep < 20; ++rep) {
        const int m = mm(rng);
        const GainMatrix g = line_gains(m, 1.0 + ee(rng), ee(rng), ee(rng));
        REQUIRE_NOTHROW(g.validate());
        for (int i = 0; i < g.node_count(); ++i) {
            CHECK(g(i, i) == 0.0);
            for (int j = 0; j < g.node_count(); ++j) CHECK(g(i, j) == g(j, i));
        }
    }
}

TEST_CASE("bundled example network squares the magnitude table", "[channel]") {
    const GainMatrix g = example_network_gains();
    CHECK(g.relay_count() == 2);
    CHECK(g(0, 3) == Catch::Approx(0.04).epsilon(1e-15));
    CHECK(g(1, 2) == Catch::Approx(4.0).epsilon(1e-15));
    CHECK(g(0, 1) == Catch::Approx(1.44).epsilon(1e-15));
    for (int i = 0; i < 4; ++i) CHECK(g(i, i) == 0.0);
    REQUIRE_NOTHROW(g.validate());
}

TEST_CASE("geometry validation rejects bad placements", "[channel]") {
    Geometry geo;
    geo.relay_positions = {0.5, 0.5};
    CHECK_THROWS_AS(geo.gains(), DegenerateGeometryError);
    geo.relay_positions = {0.7, 0.3};
    CHECK_THROWS_AS(geo.gains(), DegenerateGeometryError);
    geo.relay_positions = {0.3, 1.2};
    CHECK_THROWS_AS(geo.gains(), DegenerateGeometryError);
}

TEST_CASE("equal power split", "[channel]") {
    auto two = equal_power_split({1, 2}, 2.0);
    REQUIRE(two.size() == 2);
    CHECK(two[0].second == 1.0);
    CHECK(two[1].second == 1.0);

    auto one = equal_power_split({0}, 5.0);
    REQUIRE(one.size() == 1);
    CHECK(one[0].second == 5.0);

    CHECK_THROWS_AS(equal_power_split({}, 1.0), std::invalid_argument);

    std::mt19937 rng(3);
    std::uniform_int_distribution<int> nn(1, 9);
    std::uniform_real_distribution<double> pp(0.1, 10.0);
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<int> nodes(nn(rng));
        std::iota(nodes.begin(), nodes.end(), 0);
        const double P = pp(rng);
        double sum = 0.0;
        for (const auto& [node, p] : equal_power_split(nodes, P)) sum += p;
        CHECK(sum == Catch::Approx(P).epsilon(1e-12));
    }
}

TEST_CASE("gain matrix CSV and JSON round-trip", "[channel]") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 9.0);
    for (int rep = 0; rep < 10; ++rep) {
        const int m = 1 + rep % 4;
        GainMatrix g(m);
        for (int i = 0; i < m + 2; ++i)
            for (int j = i + 1; j < m + 2; ++j) g.set(i, j, u(rng));

        std::stringstream csv;
        write_gains_csv(g, csv);
        const GainMatrix back = read_gains_csv(csv);
        REQUIRE(back.relay_count() == m);
        for (int i = 0; i < m + 2; ++i)
            for (int j = 0; j < m + 2; ++j) CHECK(back(i, j) == g(i, j));

        const GainMatrix jback = gains_from_json(gains_to_json(g));
        for (int i = 0; i < m + 2; ++i)
            for (int j = 0; j < m + 2; ++j) CHECK(jback(i, j) == g(i, j));
    }
}

TEST_CASE("gain matrix readers reject malformed input", "[channel]") {
    std::stringstream no_header("0,1\n1,0\n");
    CHECK_THROWS_AS(read_gains_csv(no_header), std::invalid_argument);

    std::stringstream asym("m=0\n0,1\n2,0\n");
    CHECK_THROWS_AS(read_gains_csv(asym), std::invalid_argument);

    nlohmann::json j{{"m", 0}, {"g", {{0.0, 1.0}, {2.0, 0.0}}}};
    CHECK_THROWS_AS(gains_from_json(j), std::invalid_argument);
}
