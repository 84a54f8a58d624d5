#pragma once

#include <stdexcept>
#include <string>

namespace sumcard {

struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InconsistentSummaryError : EstimationError {
    using EstimationError::EstimationError;
};

struct UnknownResourceError : EstimationError {
    using EstimationError::EstimationError;
};

struct CapExceededError : EstimationError {
    using EstimationError::EstimationError;
};

struct NotUnificationFreeError : EstimationError {
    using EstimationError::EstimationError;
};

struct BoundInapplicableError : EstimationError {
    using EstimationError::EstimationError;
};

}  // namespace sumcard
