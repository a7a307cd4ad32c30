#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nbody {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two bodies came closer than the configured collision threshold.
class CollisionError : public Error {
public:
    CollisionError(std::size_t body_a, std::size_t body_b, double time, double distance);

    std::size_t body_a() const { return body_a_; }
    std::size_t body_b() const { return body_b_; }
    double time() const { return time_; }
    double distance() const { return distance_; }

private:
    std::size_t body_a_;
    std::size_t body_b_;
    double time_;
    double distance_;
};

/// Cubic family requested with an even number of bodies per loop.
class CollisionParityError : public Error {
public:
    explicit CollisionParityError(int m);
    int m() const { return m_; }

private:
    int m_;
};

class NormalizationError : public Error {
public:
    using Error::Error;
};

/// Reduced parameters do not match the layout of the model they are used with.
class LayoutError : public Error {
public:
    using Error::Error;
};

/// Malformed, truncated, or inconsistent orbit record.
class RecordError : public Error {
public:
    RecordError(const std::string& what, std::size_t byte_offset = npos);

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

} // namespace nbody
