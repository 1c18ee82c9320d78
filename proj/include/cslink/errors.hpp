#pragma once

#include <stdexcept>
#include <string>

namespace cslink {

// Thrown when a Fock-space cutoff is too small for the requested tail
// tolerance. Carries the cutoff that would have been large enough.
class truncation_error : public std::runtime_error {
public:
    truncation_error(const std::string& what, int required_cutoff)
        : std::runtime_error(what + " (required cutoff >= " +
                             std::to_string(required_cutoff) + ")"),
          required_cutoff_(required_cutoff) {}

    int required_cutoff() const { return required_cutoff_; }

private:
    int required_cutoff_;
};

// Thrown for parameter combinations the model does not cover,
// e.g. the Dolinar-receiver protocol with nonzero noise.
class unsupported_configuration : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cslink
