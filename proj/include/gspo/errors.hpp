#pragma once

#include <stdexcept>
#include <string>

#include "gspo/vertex_set.hpp"

namespace gspo {

/// Requested operation exceeds a hard size cap (enumeration, brute force).
class Unsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical input that cannot be used, e.g. a singular covariance block.
class DegenerateInput : public std::runtime_error {
public:
    DegenerateInput(const std::string& what, VertexSet offending)
        : std::runtime_error(what), offending_(offending) {}
    VertexSet offending() const { return offending_; }

private:
    VertexSet offending_;
};

/// An internal invariant the theory guarantees was found false.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace gspo
