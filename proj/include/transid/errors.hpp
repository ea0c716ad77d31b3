#pragma once

#include <stdexcept>
#include <string>

namespace transid {

/// Malformed or inconsistent caller input (bad dimensions, unparsable files,
/// non-informative similar data). The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical guard tripped, e.g. dim(H_i) != n+m because the data and
/// similar subspaces are partially orthogonal. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace transid
