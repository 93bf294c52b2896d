#ifndef FIMSTAB_ERRORS_HPP
#define FIMSTAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fimstab {

/// Base class of every domain error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Second moment requested for an approximant whose tails decay too slowly.
class DecayTooSlow : public Error {
public:
    using Error::Error;
};

/// Two spike locations coincide on the torus.
class DuplicateLocation : public Error {
public:
    using Error::Error;
};

/// Fisher matrix fails the positive-definiteness threshold.
class SingularFisher : public Error {
public:
    using Error::Error;
};

/// The minorant bound does not change sign (with certified accuracy) on the bracket.
class NoSignChange : public Error {
public:
    using Error::Error;
};

/// r points cannot be placed on the torus with the requested minimal gap.
class InfeasibleSeparation : public Error {
public:
    using Error::Error;
};

}  // namespace fimstab

#endif  // FIMSTAB_ERRORS_HPP
