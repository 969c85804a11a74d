#pragma once

#include <stdexcept>
#include <string>

namespace bosonic {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CutoffTooSmall : Error {
    using Error::Error;
};
struct DimensionOverflow : Error {
    using Error::Error;
};
struct InvalidModeIndex : Error {
    using Error::Error;
};
struct InvalidTransmittance : Error {
    using Error::Error;
};
struct InvalidNoiseVariance : Error {
    using Error::Error;
};
struct CutoffHeadroomInsufficient : Error {
    using Error::Error;
};
struct ArgumentOutOfReliableRange : Error {
    using Error::Error;
};
struct GridTooSmall : Error {
    using Error::Error;
};
struct NegativePFunction : Error {
    using Error::Error;
};
struct CutoffMismatch : Error {
    using Error::Error;
};
struct InvalidOrdering : Error {
    using Error::Error;
};
struct DegenerateDenominator : Error {
    using Error::Error;
};
struct InvalidPovmElement : Error {
    using Error::Error;
};
struct InvalidParameter : Error {
    using Error::Error;
};
struct ConfigParseError : Error {
    using Error::Error;
};

} // namespace bosonic
