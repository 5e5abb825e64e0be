#pragma once

#include <stdexcept>
#include <string>

namespace zeropack
{

/// Raised when a computation cannot produce a trustworthy number: overflow,
/// divergence, a singular evaluation, a collapsed configuration or a series
/// truncation that misses its tail bound.
///
/// Precondition violations use std::invalid_argument or std::domain_error.
class numeric_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace detail
{

inline void require(bool condition, const std::string &message)
{
    if (!condition) {
        throw std::invalid_argument(message);
    }
}

} // namespace detail

} // namespace zeropack
