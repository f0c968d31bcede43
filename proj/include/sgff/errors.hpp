#pragma once

#include <stdexcept>
#include <string>

namespace sgff {

// Base for all numeric-domain failures raised by the library.
struct domain_fault : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation requested at (or too close to) a pole or zero of a special
// function, or at an S-matrix pole.
struct pole_error : domain_fault {
    using domain_fault::domain_fault;
};

// Two rapidities inside one K-transform coincide while an ell-factor is
// active, so a 1/sinh factor blows up.
struct coincidence_error : domain_fault {
    using domain_fault::domain_fault;
};

// A size or budget cap was exceeded (K-transform order, enumeration size,
// quadrature dimension).
struct cap_error : domain_fault {
    using domain_fault::domain_fault;
};

// An extrapolation or least-squares fit failed to settle.
struct convergence_error : domain_fault {
    using domain_fault::domain_fault;
};

// Malformed run configuration.
struct config_error : domain_fault {
    using domain_fault::domain_fault;
};

}  // namespace sgff
