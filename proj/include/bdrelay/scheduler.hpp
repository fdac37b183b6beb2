#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdrelay/errors.hpp"

namespace bdrelay {

/// One sub-message of a terminal's stream: block index within [0, B).
struct SubMessageId {
    char stream;  // 'a' or 'b'
    int index;

    friend bool operator==(const SubMessageId&, const SubMessageId&) = default;
};

/// What a node puts on the air: a group element equal to the mod-L sum of
/// the listed sub-messages.
struct Payload {
    std::vector<SubMessageId> parts;
    std::uint64_t value = 0;

    std::string expr() const {
        std::ostringstream os;
        for (size_t i = 0; i < parts.size(); ++i)
            os << (i ? "^" : "") << parts[i].stream << parts[i].index;
        return os.str();
    }
};

/// One transmission. Slots count 1..B+m; within a slot, phase p in [1, m+2]
/// belongs to one fixed transmitter: phase 1 to terminal b, phase m+2-i to
/// relay i, phase m+2 to terminal a. Decoders are the nodes the protocol
/// schedules to extract a new sub-message from this transmission.
struct ScheduleEvent {
    int slot = 0;
    int phase = 0;
    int tx = 0;
    Payload payload;
    std::vector<int> decoders;
    std::vector<SubMessageId> decoded;  // parallel to decoders
};

struct ScheduleTranscript {
    int m = 0;
    int B = 0;
    std::uint64_t L = 2;
    std::vector<ScheduleEvent> events;
};

/// Closed-form transmission count of the chain schedule over B blocks.
inline long long phase_count(int m, long long B) {
    if (m < 2) throw ScheduleError("phase_count: protocol undefined for m < 2");
    if (B < m) throw ScheduleError("phase_count: need at least m blocks");
    return B * (m + 2) + static_cast<long long>(m) * (m - 1) / 2;
}

namespace detail {

/// Per-node knowledge of sub-message values, indexed by stream and block.
class NodeState {
public:
    NodeState(int node_count, int blocks)
        : blocks_(blocks),
          known_(node_count, std::vector<char>(2 * blocks, 0)),
          value_(node_count, std::vector<std::uint64_t>(2 * blocks, 0)) {}

    bool knows(int node, SubMessageId id) const { return known_[node][slot_of(id)] != 0; }

    std::uint64_t value(int node, SubMessageId id) const { return value_[node][slot_of(id)]; }

    void learn(int node, SubMessageId id, std::uint64_t v) {
        known_[node][slot_of(id)] = 1;
        value_[node][slot_of(id)] = v;
    }

private:
    size_t slot_of(SubMessageId id) const {
        if (id.index < 0 || id.index >= blocks_) throw std::out_of_range("sub-message index");
        return static_cast<size_t>(id.stream == 'b' ? blocks_ + id.index : id.index);
    }

    int blocks_;
    std::vector<std::vector<char>> known_;
    std::vector<std::vector<std::uint64_t>> value_;
};

}  // namespace detail

/// Runs the (m, m+2) chain schedule at the message level over error-free
/// links: initialization ripples the a-stream into the relay line, the main
/// routine moves one block of each stream per slot using mod-L combining,
/// and termination drains the line. Transmissions, scheduled decodes, and
/// payload compositions follow the three-stage chain schedule exactly; decoding
/// removes the components the receiver already holds.
inline ScheduleTranscript run_schedule(int m, int B, const std::vector<std::uint64_t>& messages_a,
                                       const std::vector<std::uint64_t>& messages_b,
                                       std::uint64_t L) {
    if (m < 2) throw ScheduleError("run_schedule: protocol undefined for m < 2");
    if (B < m) throw ScheduleError("run_schedule: need at least m blocks");
    if (L < 1) throw std::invalid_argument("run_schedule: group size must be >= 1");
    if (static_cast<int>(messages_a.size()) != B || static_cast<int>(messages_b.size()) != B)
        throw std::invalid_argument("run_schedule: need exactly B sub-messages per terminal");
    for (int j = 0; j < B; ++j)
        if (messages_a[j] >= L || messages_b[j] >= L)
            throw std::invalid_argument("run_schedule: sub-message values must lie in Z_L");

    const int node_a = 0, node_b = m + 1;
    detail::NodeState state(m + 2, B);
    for (int j = 0; j < B; ++j) {
        state.learn(node_a, {'a', j}, messages_a[j]);
        state.learn(node_b, {'b', j}, messages_b[j]);
    }

    ScheduleTranscript tr;
    tr.m = m;
    tr.B = B;
    tr.L = L;

    auto phase_of = [&](int tx) { return tx == node_b ? 1 : m + 2 - tx; };

    auto emit = [&](int slot, int tx, std::vector<SubMessageId> parts,
                    std::vector<std::pair<int, SubMessageId>> decodes) {
        ScheduleEvent ev;
        ev.slot = slot;
        ev.phase = phase_of(tx);
        ev.tx = tx;
        std::uint64_t v = 0;
        for (const auto& p : parts) {
            if (!state.knows(tx, p))
                throw std::logic_error("run_schedule: node transmits an unknown sub-message");
            v = (v + state.value(tx, p)) % L;
        }
        ev.payload = Payload{std::move(parts), v};
        for (const auto& [node, id] : decodes) {
            if (node == tx) throw std::logic_error("run_schedule: half-duplex violation");
            // Subtract the components the receiver already knows.
            std::uint64_t rest = ev.payload.value % L;
            for (const auto& p : ev.payload.parts) {
                if (p == id) continue;
                if (!state.knows(node, p))
                    throw std::logic_error("run_schedule: receiver missing side information");
                rest = (rest + L - state.value(node, p) % L) % L;
            }
            state.learn(node, id, rest);
            ev.decoders.push_back(node);
            ev.decoded.push_back(id);
        }
        tr.events.push_back(std::move(ev));
    };

    // Initialization: the a-stream ripples one hop per transmission. Round i
    // occupies slot i+1.
    for (int i = 0; i <= m - 1; ++i) {
        for (int j = 0; j <= i; ++j) {
            const int tx = i - j;
            emit(i + 1, tx, {{'a', j}}, {{tx + 1, {'a', j}}});
        }
    }

    // Main routine: slot m+1+i carries block i of the b-stream down the
    // chain while the a-stream shifts one relay toward b.
    for (int i = 0; i <= B - m - 1; ++i) {
        const int slot = m + 1 + i;
        emit(slot, node_b, {{'b', i}}, {{m, {'b', i}}});
        for (int j = 0; j <= m - 1; ++j) {
            const int tx = m - j;
            emit(slot, tx, {{'a', i + j}, {'b', i}},
                 {{tx - 1, {'b', i}}, {tx + 1, {'a', i + j}}});
        }
        emit(slot, node_a, {{'a', m + i}}, {{1, {'a', m + i}}});
    }

    // Termination: terminal a has nothing left to inject; relays keep
    // combining while a-stream blocks remain, then forward the b-stream
    // alone.
    for (int i = B - m; i <= B - 1; ++i) {
        const int slot = m + 1 + i;
        emit(slot, node_b, {{'b', i}}, {{m, {'b', i}}});
        for (int j = 0; j <= m - 1; ++j) {
            const int tx = m - j;
            if (i + j <= B - 1) {
                emit(slot, tx, {{'a', i + j}, {'b', i}},
                     {{tx - 1, {'b', i}}, {tx + 1, {'a', i + j}}});
            } else {
                emit(slot, tx, {{'b', i}}, {{tx - 1, {'b', i}}});
            }
        }
    }

    return tr;
}

/// Replays a transcript's decode chain from terminal knowledge alone and
/// checks that terminal b recovers the a-stream in block order and terminal
/// a the b-stream. Any payload tampering breaks the chain.
inline bool verify_delivery(const ScheduleTranscript& tr,
                            const std::vector<std::uint64_t>& messages_a,
                            const std::vector<std::uint64_t>& messages_b) {
    const int m = tr.m, B = tr.B;
    const std::uint64_t L = tr.L;
    if (static_cast<int>(messages_a.size()) != B || static_cast<int>(messages_b.size()) != B)
        return false;
    const int node_a = 0, node_b = m + 1;

    detail::NodeState state(m + 2, B);
    for (int j = 0; j < B; ++j) {
        state.learn(node_a, {'a', j}, messages_a[j] % L);
        state.learn(node_b, {'b', j}, messages_b[j] % L);
    }

    std::vector<int> order_at_b, order_at_a;
    for (const auto& ev : tr.events) {
        // The recorded value must be what the transmitter, following the
        // replayed decode chain, would actually have sent; this is what
        // exposes a tampered payload anywhere along the chain.
        std::uint64_t expected = 0;
        for (const auto& p : ev.payload.parts) {
            if (!state.knows(ev.tx, p)) return false;
            expected = (expected + state.value(ev.tx, p)) % L;
        }
        if (expected != ev.payload.value % L) return false;
        for (size_t d = 0; d < ev.decoders.size(); ++d) {
            const int node = ev.decoders[d];
            const SubMessageId id = ev.decoded[d];
            if (node == ev.tx) return false;
            std::uint64_t rest = ev.payload.value % L;
            bool ok = true;
            for (const auto& p : ev.payload.parts) {
                if (p == id) continue;
                if (!state.knows(node, p)) { ok = false; break; }
                rest = (rest + L - state.value(node, p) % L) % L;
            }
            if (!ok) return false;
            state.learn(node, id, rest);
            if (node == node_b && id.stream == 'a') order_at_b.push_back(id.index);
            if (node == node_a && id.stream == 'b') order_at_a.push_back(id.index);
        }
    }

    if (static_cast<int>(order_at_b.size()) != B || static_cast<int>(order_at_a.size()) != B)
        return false;
    for (int j = 0; j < B; ++j) {
        if (order_at_b[j] != j || order_at_a[j] != j) return false;
        if (state.value(node_b, {'a', j}) != messages_a[j] % L) return false;
        if (state.value(node_a, {'b', j}) != messages_b[j] % L) return false;
    }
    return true;
}

/// JSON-lines export, one transmission per line.
inline std::string transcript_to_jsonl(const ScheduleTranscript& tr) {
    std::ostringstream os;
    for (const auto& ev : tr.events) {
        nlohmann::json j{{"slot", ev.slot},
                         {"phase", ev.phase},
                         {"tx", ev.tx},
                         {"payload", ev.payload.expr()},
                         {"value", ev.payload.value},
                         {"decoders", ev.decoders}};
        os << j.dump() << "\n";
    }
    return os.str();
}

}  // namespace bdrelay
