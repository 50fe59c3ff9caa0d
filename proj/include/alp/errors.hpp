#pragma once

#include <stdexcept>
#include <string>

namespace alp {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

struct WeightError : Error {
  explicit WeightError(const std::string& msg) : Error(msg) {}
};

struct SingularMatrixError : Error {
  explicit SingularMatrixError(const std::string& msg) : Error(msg) {}
};

struct IntegrationBlowUp : Error {
  explicit IntegrationBlowUp(const std::string& msg) : Error(msg) {}
};

struct InfeasibleBVP : Error {
  explicit InfeasibleBVP(const std::string& msg) : Error(msg) {}
};

struct NoPath : Error {
  explicit NoPath(const std::string& msg) : Error(msg) {}
};

struct NoNominalInSet : Error {
  explicit NoNominalInSet(const std::string& msg) : Error(msg) {}
};

struct EmptySet : Error {
  explicit EmptySet(const std::string& msg) : Error(msg) {}
};

struct ScenarioError : Error {
  explicit ScenarioError(const std::string& msg) : Error(msg) {}
};

struct InvariantViolation : Error {
  explicit InvariantViolation(const std::string& msg) : Error(msg) {}
};

}  // namespace alp
