#include "scipi/error.hpp"

#include <cstdio>

namespace scipi {

ParseError::ParseError(const std::string& what, long line)
    : InputError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {
std::string with_measurement(const std::string& what, double measured) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), " (measured %.3e)", measured);
  return what + buf;
}
}  // namespace

PreconditionError::PreconditionError(const std::string& what, double measured)
    : Error(with_measurement(what, measured)), measured_(measured) {}

}  // namespace scipi
