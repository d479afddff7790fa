#pragma once

#include <stdexcept>
#include <string>

namespace icv {

//! Raised when an operation's precondition is violated or a criterion cannot
//! be evaluated.
class Error : public std::runtime_error
{
public:
  explicit Error(const std::string& what)
    : std::runtime_error(what)
  {}
};

} // namespace icv
