#pragma once

#include <stdexcept>
#include <string>

namespace shev {

// Base class for all solver/model errors raised by this library.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Battery power demand exceeds the physical maximum V_oc^2/(4 R_b).
struct DiscriminantNegative : SimError {
    explicit DiscriminantNegative(double p_batt_w)
        : SimError("battery power " + std::to_string(p_batt_w) +
                   " W exceeds the physical discriminant limit"),
          p_batt_w(p_batt_w) {}
    double p_batt_w;
};

struct PowerOutOfRange : SimError {
    using SimError::SimError;
};

struct ParseError : SimError {
    using SimError::SimError;
};

struct NonMonotonicTime : SimError {
    using SimError::SimError;
};

struct UnknownStage : SimError {
    using SimError::SimError;
};

struct TargetUnreachable : SimError {
    using SimError::SimError;
};

struct NoConvergence : SimError {
    using SimError::SimError;
};

struct Infeasible : SimError {
    using SimError::SimError;
};

struct AllInfeasible : SimError {
    using SimError::SimError;
};

struct RecursionLimit : SimError {
    using SimError::SimError;
};

struct NotSolved : SimError {
    using SimError::SimError;
};

struct DegenerateSweep : SimError {
    using SimError::SimError;
};

}  // namespace shev
