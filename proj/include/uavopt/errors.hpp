// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace uavopt {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Config file could not be read or parsed; message names the file, field and line.
struct ConfigError : Error {
    using Error::Error;
};

/// A scenario or trajectory invariant is violated; message names the offending value.
struct ValidationError : Error {
    using Error::Error;
};

/// Non-finite state encountered mid-solve; message carries the iteration index.
struct NumericalError : Error {
    using Error::Error;
};

/// scale_to_budget was handed an all-zero allocation.
struct DegenerateAllocationError : Error {
    using Error::Error;
};

}  // namespace uavopt
