#pragma once

#include <stdexcept>
#include <string>

namespace gkp {

/// Root of the library's exception hierarchy. Every failure mode defined by a
/// module contract maps to one of the subclasses below so callers (and the CLI)
/// can translate failures into stable machine-readable codes.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Argument outside a documented domain (negative rate, n too small, ...).
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error("domain", w) {}
};

/// NaN/overflow or an alternating sum that lost too many digits; retry at
/// higher mantissa_bits.
struct CancellationError : Error {
  explicit CancellationError(const std::string& w) : Error("cancellation", w) {}
};

/// Iterative scheme exhausted its budget; best estimate so far is attached.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& w, double best)
      : Error("convergence", w), best_estimate(best) {}
  double best_estimate;
};

/// Caller violated a precondition (unnormalized state, bad trace, ...).
struct ContractError : Error {
  explicit ContractError(const std::string& w) : Error("contract", w) {}
};

/// Pipeline-level failure (empty candidate range and similar).
struct ProtocolError : Error {
  explicit ProtocolError(const std::string& w) : Error("protocol", w) {}
};

/// POVM node refinement failed to converge.
struct ResolutionError : Error {
  explicit ResolutionError(const std::string& w) : Error("resolution", w) {}
};

/// Requested state is identically zero (odd cat with alpha = 0).
struct ZeroVectorError : Error {
  explicit ZeroVectorError(const std::string& w) : Error("zero-vector", w) {}
};

/// Post-selected exact-breeding outcome has vanishing norm.
struct DegenerateOutcomeError : Error {
  explicit DegenerateOutcomeError(const std::string& w)
      : Error("degenerate-outcome", w) {}
};

/// Mean-phase requested where the displaced overlap vanishes.
struct UndefinedPhaseError : Error {
  explicit UndefinedPhaseError(const std::string& w)
      : Error("undefined-phase", w) {}
};

/// Zak cell mass deviates from 1; lattice convention broken.
struct ConventionError : Error {
  explicit ConventionError(const std::string& w) : Error("convention", w) {}
};

/// Threshold-region scan found structure at the grid scale; rerun finer.
struct GridTooCoarseError : Error {
  explicit GridTooCoarseError(const std::string& w)
      : Error("grid-too-coarse", w) {}
};

}  // namespace gkp
