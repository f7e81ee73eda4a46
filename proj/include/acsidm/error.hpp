#pragma once

#include <stdexcept>

namespace acsidm {

/// A computation left its numerically valid range (negative fractions,
/// non-bracketing root solve, non-finite values). Distinct from
/// std::invalid_argument, which signals a violated precondition.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace acsidm
