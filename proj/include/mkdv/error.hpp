#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace mkdv {

// Base class for every failure raised by the toolkit. The kind string is
// stable and ends up in reports and CLI diagnostics.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define MKDV_DEFINE_ERROR(Name, Kind)                                          \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(Kind, what) {}              \
  }

MKDV_DEFINE_ERROR(DomainError, "domain error");
MKDV_DEFINE_ERROR(RangeError, "range error");
MKDV_DEFINE_ERROR(AccuracyError, "accuracy error");
MKDV_DEFINE_ERROR(SolverError, "solver error");
MKDV_DEFINE_ERROR(ConventionError, "convention error");
MKDV_DEFINE_ERROR(UnsupportedOrderError, "unsupported order");
MKDV_DEFINE_ERROR(WrapAroundError, "wrap-around error");
MKDV_DEFINE_ERROR(InstabilityError, "instability error");
MKDV_DEFINE_ERROR(DifferentiationError, "differentiation error");
MKDV_DEFINE_ERROR(DegenerateFitError, "degenerate fit");
MKDV_DEFINE_ERROR(UsageError, "usage error");
MKDV_DEFINE_ERROR(IoError, "io error");

#undef MKDV_DEFINE_ERROR

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

} // namespace mkdv
