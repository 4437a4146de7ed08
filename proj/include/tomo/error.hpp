#pragma once

#include <stdexcept>
#include <string>

namespace tomo {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad input: malformed config, invalid ids, violated preconditions.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A bipartition set that cannot be realized by a single tree.
class IncompatibilityError : public Error {
public:
    using Error::Error;
};

/// Extender found a receiver connected to both sides of a split, or to
/// neither; signals metric distortion or parameter failure.
class InconsistencyError : public Error {
public:
    using Error::Error;
};

/// Topology reconstruction could not produce a tree.
class ReconstructionError : public Error {
public:
    using Error::Error;
};

/// A resource guard tripped (e.g. oracle support-size limit).
class GuardError : public Error {
public:
    using Error::Error;
};

} // namespace tomo
