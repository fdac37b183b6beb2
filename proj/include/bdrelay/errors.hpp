#pragma once

#include <stdexcept>
#include <string>

namespace bdrelay {

/// Weighted objective has no finite maximum over the constraint set.
struct UnboundedRegionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A combinatorial scan (decode sets, cut subsets, relay orders) would
/// exceed its configured cap.
struct EnumerationLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Node placement produces coincident positions or otherwise ill-defined gains.
struct DegenerateGeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scheduler preconditions violated (relay count, block count, message range).
struct ScheduleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario configuration file problems.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bdrelay
