#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdrelay/errors.hpp"

namespace bdrelay {

/// Gaussian capacity of a scalar channel at the given SNR, in bits per
/// channel use: log2(1 + snr). Noise is normalized to unit power everywhere
/// in this library, so SNR values are plain received powers.
inline double capacity(double snr) {
    if (!std::isfinite(snr) || snr < 0.0)
        throw std::domain_error("capacity: SNR must be finite and nonnegative");
    // log1p keeps precision for the low-SNR regime.
    constexpr double inv_ln2 = 1.4426950408889634;
    return std::log1p(snr) * inv_ln2;
}

/// Squared channel magnitudes |h_{i,j}|^2 between the m+2 nodes of a
/// bi-directional relay network. Node 0 is terminal a, node m+1 is terminal
/// b, nodes 1..m are relays. The matrix is symmetric (reciprocal channel)
/// with a zero diagonal. Only squared magnitudes are stored; none of the
/// rate expressions consume complex phase.
class GainMatrix {
public:
    GainMatrix() : m_(0), g_(4, 0.0) {}

    explicit GainMatrix(int relay_count)
        : m_(relay_count), g_(static_cast<size_t>(relay_count + 2) * (relay_count + 2), 0.0) {
        if (relay_count < 0) throw std::invalid_argument("GainMatrix: negative relay count");
    }

    int relay_count() const { return m_; }
    int node_count() const { return m_ + 2; }
    int terminal_a() const { return 0; }
    int terminal_b() const { return m_ + 1; }

    double operator()(int i, int j) const { return g_[idx(i, j)]; }

    /// Sets both (i,j) and (j,i); the diagonal must stay zero.
    void set(int i, int j, double value) {
        if (i == j && value != 0.0)
            throw std::invalid_argument("GainMatrix: diagonal entries must be zero");
        if (!(value >= 0.0) || !std::isfinite(value))
            throw std::invalid_argument("GainMatrix: gains must be finite and nonnegative");
        g_[idx(i, j)] = value;
        g_[idx(j, i)] = value;
    }

    void validate() const {
        const int n = node_count();
        for (int i = 0; i < n; ++i) {
            if (g_[idx(i, i)] != 0.0)
                throw std::invalid_argument("GainMatrix: nonzero diagonal");
            for (int j = 0; j < n; ++j) {
                const double v = g_[idx(i, j)];
                if (!(v >= 0.0) || !std::isfinite(v))
                    throw std::invalid_argument("GainMatrix: negative or non-finite entry");
                if (v != g_[idx(j, i)])
                    throw std::invalid_argument("GainMatrix: asymmetric entry");
            }
        }
    }

private:
    size_t idx(int i, int j) const {
        if (i < 0 || j < 0 || i >= node_count() || j >= node_count())
            throw std::out_of_range("GainMatrix: node index out of range");
        return static_cast<size_t>(i) * node_count() + j;
    }

    int m_;
    std::vector<double> g_;
};

/// Total per-phase transmit power, linear scale, noise-normalized.
struct PowerConfig {
    double total;

    explicit PowerConfig(double p) : total(p) {
        if (!(p > 0.0) || !std::isfinite(p))
            throw std::invalid_argument("PowerConfig: power must be positive and finite");
    }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Nodes on a line segment: terminal a at 0, terminal b at d_ab, relays
/// strictly inside and strictly increasing. Gains follow a power-law
/// pathloss k / d^exponent; the direct a-b gain may be pinned to an
/// explicit squared magnitude instead.
struct Geometry {
    std::vector<double> relay_positions;
    double d_ab = 1.0;
    double pathloss_exponent = 3.8;
    double k = 1.0;
    std::optional<double> direct_gain_override;  // |h_ab|^2

    void validate() const {
        if (!(d_ab > 0.0)) throw DegenerateGeometryError("Geometry: d_ab must be positive");
        if (!(pathloss_exponent > 0.0))
            throw std::invalid_argument("Geometry: pathloss exponent must be positive");
        if (!(k > 0.0)) throw std::invalid_argument("Geometry: pathloss constant must be positive");
        double prev = 0.0;
        for (double p : relay_positions) {
            if (!(p > prev) || !(p < d_ab))
                throw DegenerateGeometryError(
                    "Geometry: relay positions must be strictly increasing inside (0, d_ab)");
            prev = p;
        }
    }

    GainMatrix gains() const {
        validate();
        const int m = static_cast<int>(relay_positions.size());
        std::vector<double> pos(m + 2);
        pos[0] = 0.0;
        for (int i = 0; i < m; ++i) pos[i + 1] = relay_positions[i];
        pos[m + 1] = d_ab;

        GainMatrix g(m);
        for (int i = 0; i < m + 2; ++i) {
            for (int j = i + 1; j < m + 2; ++j) {
                const double d = pos[j] - pos[i];
                if (!(d > 0.0))
                    throw DegenerateGeometryError("Geometry: coincident node positions");
                g.set(i, j, k / std::pow(d, pathloss_exponent));
            }
        }
        if (direct_gain_override) g.set(0, m + 1, *direct_gain_override);
        return g;
    }
};

/// Gain matrix for m relays evenly spread on a line: relay i sits at
/// i/(m+1) * d_ab. `h_ab_sq`, when given, replaces the direct terminal gain.
inline GainMatrix line_gains(int m, double d_ab, double exponent, double k,
                             std::optional<double> h_ab_sq = std::nullopt) {
    if (m < 1) throw std::invalid_argument("line_gains: need at least one relay");
    Geometry geo;
    geo.d_ab = d_ab;
    geo.pathloss_exponent = exponent;
    geo.k = k;
    geo.direct_gain_override = h_ab_sq;
    geo.relay_positions.resize(m);
    for (int i = 1; i <= m; ++i)
        geo.relay_positions[i - 1] = d_ab * static_cast<double>(i) / (m + 1);
    return geo.gains();
}

/// Two-relay (or general) line network with explicit relay positions.
inline GainMatrix gains_from_positions(const std::vector<double>& relay_positions, double d_ab,
                                       double exponent, double k,
                                       std::optional<double> h_ab_sq = std::nullopt) {
    Geometry geo;
    geo.relay_positions = relay_positions;
    geo.d_ab = d_ab;
    geo.pathloss_exponent = exponent;
    geo.k = k;
    geo.direct_gain_override = h_ab_sq;
    return geo.gains();
}

/// The bundled two-relay example network. The table lists channel
/// magnitudes h, not squared magnitudes, so entries are squared here.
inline GainMatrix example_network_gains() {
    const double h[4][4] = {{0.0, 1.2, 0.8, 0.2},
                            {1.2, 0.0, 2.0, 0.8},
                            {0.8, 2.0, 0.0, 1.2},
                            {0.2, 0.8, 1.2, 0.0}};
    GainMatrix g(2);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) g.set(i, j, h[i][j] * h[i][j]);
    return g;
}

/// Fully-connected network with every off-diagonal gain equal to h_sq.
inline GainMatrix equal_gains(int m, double h_sq) {
    GainMatrix g(m);
    for (int i = 0; i < m + 2; ++i)
        for (int j = i + 1; j < m + 2; ++j) g.set(i, j, h_sq);
    return g;
}

/// Splits a per-phase power budget equally among the transmitting nodes.
inline std::vector<std::pair<int, double>> equal_power_split(const std::vector<int>& transmitters,
                                                             double total_power) {
    if (transmitters.empty())
        throw std::invalid_argument("equal_power_split: empty transmitter set");
    if (!(total_power > 0.0))
        throw std::invalid_argument("equal_power_split: power must be positive");
    std::vector<std::pair<int, double>> out;
    out.reserve(transmitters.size());
    const double share = total_power / static_cast<double>(transmitters.size());
    for (int node : transmitters) out.emplace_back(node, share);
    return out;
}

// --- serialization ---------------------------------------------------------

inline void write_gains_csv(const GainMatrix& g, std::ostream& os) {
    os << "m=" << g.relay_count() << "\n";
    const int n = g.node_count();
    char buf[64];
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", g(i, j));
            os << buf << (j + 1 == n ? '\n' : ',');
        }
    }
}

inline GainMatrix read_gains_csv(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("m=", 0) != 0)
        throw std::invalid_argument("gain CSV: expected header line m=<value>");
    const int m = std::stoi(header.substr(2));
    if (m < 0) throw std::invalid_argument("gain CSV: negative relay count");
    GainMatrix g(m);
    const int n = m + 2;
    for (int i = 0; i < n; ++i) {
        std::string line;
        if (!std::getline(is, line)) throw std::invalid_argument("gain CSV: missing row");
        std::stringstream row(line);
        std::string cell;
        for (int j = 0; j < n; ++j) {
            if (!std::getline(row, cell, ','))
                throw std::invalid_argument("gain CSV: missing column");
            const double v = std::stod(cell);
            if (j > i) g.set(i, j, v);
            else if (v != g(i, j)) throw std::invalid_argument("gain CSV: asymmetric matrix");
        }
    }
    g.validate();
    return g;
}

inline nlohmann::json gains_to_json(const GainMatrix& g) {
    nlohmann::json rows = nlohmann::json::array();
    const int n = g.node_count();
    for (int i = 0; i < n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < n; ++j) row.push_back(g(i, j));
        rows.push_back(std::move(row));
    }
    return nlohmann::json{{"m", g.relay_count()}, {"g", std::move(rows)}};
}

inline GainMatrix gains_from_json(const nlohmann::json& j) {
    const int m = j.at("m").get<int>();
    GainMatrix g(m);
    const auto& rows = j.at("g");
    if (static_cast<int>(rows.size()) != m + 2)
        throw std::invalid_argument("gain JSON: wrong row count");
    for (int i = 0; i < m + 2; ++i) {
        const auto& row = rows.at(i);
        if (static_cast<int>(row.size()) != m + 2)
            throw std::invalid_argument("gain JSON: wrong column count");
        for (int k = i + 1; k < m + 2; ++k) g.set(i, k, row.at(k).get<double>());
    }
    for (int i = 0; i < m + 2; ++i)
        for (int k = 0; k < m + 2; ++k)
            if (rows.at(i).at(k).get<double>() != g(i, k))
                throw std::invalid_argument("gain JSON: asymmetric matrix");
    g.validate();
    return g;
}

}  // namespace bdrelay
