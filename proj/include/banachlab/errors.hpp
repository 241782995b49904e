#pragma once

#include <stdexcept>
#include <string>

namespace banachlab {

// Exhaustion budget exceeded; the CLI maps this to its resource exit code.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A coefficient space fails the standing hypothesis of a bound (for example
// its measured level-h transform norm is not < 1).
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace banachlab
