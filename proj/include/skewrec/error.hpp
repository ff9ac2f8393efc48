#pragma once

#include <stdexcept>
#include <string>

namespace skewrec {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two objects that must live on the same cell space do not.
struct space_mismatch : error {
    using error::error;
};

/// A stated operation precondition does not hold for the given input.
struct precondition_error : error {
    using error::error;
};

/// An argument is out of the operation's domain (empty set, bad range, ...).
struct argument_error : error {
    using error::error;
};

/// Exact rational arithmetic left the machine-word range.
struct value_overflow : error {
    using error::error;
};

/// A config file, permutation file, or CSV document failed to parse.
struct parse_error : error {
    using error::error;
};

} // namespace skewrec
