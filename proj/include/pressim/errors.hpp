#pragma once

#include <stdexcept>
#include <string>

namespace pressim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateConfiguration : Error {
    using Error::Error;
};

struct OutsidePlane : Error {
    using Error::Error;
};

struct FrameMismatch : Error {
    using Error::Error;
};

struct NoContact : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct ShapeMismatch : Error {
    using Error::Error;
};

struct ContactLost : Error {
    using Error::Error;
};

struct OutOfRange : Error {
    using Error::Error;
};

struct TorqueLimit : Error {
    using Error::Error;
};

} // namespace pressim
