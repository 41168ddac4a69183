#pragma once

#include <stdexcept>
#include <string>

namespace hypwave {

/// Base class of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI's error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define HYPWAVE_DEFINE_ERROR(Name, tag)                          \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(tag, what) {} \
  }

// Geometry / numerics.
HYPWAVE_DEFINE_ERROR(GeometryError, "geometry");
HYPWAVE_DEFINE_ERROR(InvariantViolation, "invariant_violation");
HYPWAVE_DEFINE_ERROR(StepUnderflowError, "step_underflow");
HYPWAVE_DEFINE_ERROR(ToleranceError, "tolerance");

// Surface.
HYPWAVE_DEFINE_ERROR(BoundaryPathologyError, "boundary_pathology");
HYPWAVE_DEFINE_ERROR(HorizonTooLargeError, "horizon_too_large");
HYPWAVE_DEFINE_ERROR(ResourceError, "resource");

// Model parameters and inputs.
HYPWAVE_DEFINE_ERROR(AdmissibilityError, "admissibility");
HYPWAVE_DEFINE_ERROR(DomainError, "not_in_domain");
HYPWAVE_DEFINE_ERROR(ValidationError, "validation");
HYPWAVE_DEFINE_ERROR(PreconditionError, "precondition");
HYPWAVE_DEFINE_ERROR(DegenerateSampleError, "degenerate_sample");
HYPWAVE_DEFINE_ERROR(ConfigError, "config");

#undef HYPWAVE_DEFINE_ERROR

}  // namespace hypwave
