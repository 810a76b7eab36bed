#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hashlab {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDescriptor : public Error {
public:
    using Error::Error;
};

// A well-formed descriptor the library refuses to build (e.g. 64-bit double tabulation).
class UnsupportedConfig : public Error {
public:
    using Error::Error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

// Sketches built with different hash functions (or capacities) cannot be combined.
class SeedMismatch : public Error {
public:
    using Error::Error;
};

// The sketch holds fewer than k distinct keys. The exact count is carried along
// so callers can fall back to it.
class Underfull : public Error {
public:
    Underfull(std::size_t have, std::size_t need)
        : Error("sketch underfull: " + std::to_string(have) + " of " + std::to_string(need) + " keys"),
          count_(have) {}

    [[nodiscard]] std::size_t exact_count() const noexcept { return count_; }

private:
    std::size_t count_;
};

class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace hashlab
