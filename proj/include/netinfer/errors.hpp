#pragma once

#include <stdexcept>
#include <string>

namespace netinfer {

struct DisconnectedGraph : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConsecutiveActivity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPositivePi : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroDistance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateClustering : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LengthMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeriesTooShort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruthEmpty : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace netinfer
