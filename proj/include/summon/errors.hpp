#pragma once

#include <stdexcept>
#include <string>

namespace summon {

/// Rejected input: a precondition or invariant on caller-supplied data failed.
class input_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A requested computation exceeds a configured resource cap.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace summon
