#pragma once

#include <stdexcept>
#include <string>

namespace quantizer {

/// Point lies on the hyperplane at infinity of the requested chart.
class ChartUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Monte Carlo standard error too large relative to the estimate.
class InsufficientSamples : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NegativeDegree : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Occupation pattern outside the projective oscillator's n+1 states.
class InadmissibleState : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Step doubling changed the transported result by more than the tolerance.
class StepTooCoarse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Kernel density numerically zero at the evaluation point.
class KernelVanishes : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace quantizer
