#pragma once

#include <stdexcept>
#include <string>

namespace dfsnet {

// Violation of a physical precondition or an invalid optical configuration
// (beam collisions, routing cycles, non-unitary inputs, ...).
struct PhysicsError : std::runtime_error {
    explicit PhysicsError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent scenario configuration.
struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dfsnet
