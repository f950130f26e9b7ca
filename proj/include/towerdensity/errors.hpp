#pragma once

#include <stdexcept>
#include <string>

namespace towerdensity {

// A request exceeded a configured capacity ceiling (CLI exit code 3).
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace towerdensity
