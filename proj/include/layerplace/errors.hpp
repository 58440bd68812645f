#ifndef LAYERPLACE_ERRORS_HPP
#define LAYERPLACE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace layerplace {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed gate profile (reach probabilities not a valid survival curve).
struct ProfileError : Error {
    using Error::Error;
};

// Problem-level validation failure. Carries the complete list of issues,
// not just the first one found.
struct ValidationError : Error {
    std::vector<std::string> issues;

    explicit ValidationError(std::vector<std::string> found)
        : Error(join(found)), issues(std::move(found)) {}

  private:
    static std::string join(const std::vector<std::string>& found) {
        std::string msg = "invalid problem:";
        for (const auto& s : found) {
            msg += "\n  - ";
            msg += s;
        }
        return msg;
    }
};

struct UnknownFixture : Error {
    using Error::Error;
};

struct UnknownProfile : Error {
    using Error::Error;
};

// Transmission over a vertex pair with no connecting path.
struct UnreachableHop : Error {
    using Error::Error;
};

// A unit vertex has no device class attached.
struct MissingDeviceClass : Error {
    using Error::Error;
};

// Topology is not connected; lists the offending vertex pairs by id.
struct DisconnectedTopology : Error {
    std::vector<std::pair<std::string, std::string>> unreachable;

    DisconnectedTopology(std::string msg,
                         std::vector<std::pair<std::string, std::string>> pairs)
        : Error(std::move(msg)), unreachable(std::move(pairs)) {}
};

// objective_of_assignment was handed an assignment missing some variables.
struct IncompleteAssignment : Error {
    using Error::Error;
};

// No feasible placement. `authoritative` is true when an exact method proved
// infeasibility and false when a heuristic merely failed to construct one.
struct Infeasible : Error {
    bool authoritative;

    explicit Infeasible(std::string msg, bool proved = true)
        : Error(std::move(msg)), authoritative(proved) {}
};

// Time budget ran out before any feasible incumbent existed.
struct BudgetExceeded : Error {
    using Error::Error;
};

// Scenario rejection sampling hit its retry cap without a connected layout.
struct GenerationExhausted : Error {
    using Error::Error;
};

struct UnsupportedFormat : Error {
    using Error::Error;
};

} // namespace layerplace

#endif
