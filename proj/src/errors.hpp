// SPDX-License-Identifier: MIT

#ifndef OSGP_ERRORS_HPP
#define OSGP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace osgp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A node coordinate does not address a node of the given tree.
struct InvalidCoordinate : Error {
    using Error::Error;
};

// A value or configuration violates a documented constraint.
struct ValidationError : Error {
    using Error::Error;
};

// A structured text input could not be parsed; message carries line info.
struct ParseError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace osgp

#endif
