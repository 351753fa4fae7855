#pragma once

#include <stdexcept>
#include <string>

namespace fracid {

/// Raised when a computation cannot produce a finite, trustworthy result
/// (singular systems, non-finite fitness, ill-posed implicit steps).
/// Argument and precondition violations use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracid
