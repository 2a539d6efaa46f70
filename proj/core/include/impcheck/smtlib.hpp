#pragma once

#include <optional>
#include <string>

#include "impcheck/linsolve.hpp"
#include "impcheck/predicate.hpp"

namespace impcheck::smtlib {

// QF_LIA rendering of a satisfiability query: declarations, one assert per
// atom (single cube) or one assert of the disjunction, check-sat, get-model.
std::string emit(const Predicate& p);

// Escape hatch: pipes the emitted query into an external solver process
// ("<command> <tempfile>") and reads the first line of output. Only the
// unsat answer is trusted (sat without a parsed model stays unknown).
// Disabled unless a command is configured.
class ExternalSolver {
  public:
    ExternalSolver() = default;
    explicit ExternalSolver(std::string command) : command_(std::move(command)) {}

    bool enabled() const { return !command_.empty(); }
    std::optional<linsolve::SatKind> query(const Predicate& p) const;

  private:
    std::string command_;
};

}  // namespace impcheck::smtlib
