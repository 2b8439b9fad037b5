#pragma once

#include <stdexcept>

namespace npz {

/// Raised when a state leaves the guarded domain of the rational uptake
/// nonlinearity, i.e. the denominator 1 + chi*n drops below 1/2.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a density drops below the configured positivity tolerance.
struct PositivityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a state becomes nonfinite or exceeds the magnitude cap.
struct BlowupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when an explicit step is requested above the diffusive stability bound.
struct CflError : BlowupError {
    using BlowupError::BlowupError;
};

/// Configuration parse or validation failure.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace npz
