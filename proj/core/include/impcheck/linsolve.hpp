#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "impcheck/predicate.hpp"

namespace impcheck::linsolve {

enum class SatKind { Sat, Unsat, Unknown };

struct SatResult {
    SatKind kind = SatKind::Unknown;
    ConcreteState model;  // meaningful iff kind == Sat; satisfies the query
    std::string reason;   // meaningful iff kind == Unknown
};

struct SolverOptions {
    int64_t node_budget = 10000;      // integer search nodes per call
    size_t cube_limit = 4096;         // DNF size guard for negation/conjunction
    Int cong_modulus_limit = 64;      // negating x ≡ r (mod m) enumerates m-1 cases
    size_t fm_atom_limit = 20000;     // total atoms a Fourier-Motzkin pass may create
    int candidates_per_node = 48;     // half-open ranges: values tried per variable
};

// Satisfiability of a predicate over the integers. UNSAT answers are exact
// (rational elimination with integer tightening, or exhausted finite
// search); SAT models are re-checked by evaluation before being returned.
SatResult check_sat(const Predicate& p, const SolverOptions& opts = {});

enum class Tri { True, False, Unknown };

// p entails q, decided via check_sat(p && !q).
Tri entails(const Predicate& p, const Predicate& q, const SolverOptions& opts = {});

// Same decision with a caller-precomputed negation of q (nullopt when the
// negation blew up). Saves requerying cost when one q is checked against
// many left-hand sides.
Tri entails_with_negation(const Predicate& p, const Predicate& q,
                          const std::optional<Predicate>& neg_q,
                          const SolverOptions& opts = {});

struct ElimResult {
    Predicate pred;
    bool dropped_congruence = false;  // a congruence on the variable was lost
    bool approximate = false;         // atom blowup forced an over-approximation
};

// Existential projection of var. Exact on linear atoms (Fourier-Motzkin /
// equality substitution); congruences are substituted exactly through
// equalities and dropped otherwise.
ElimResult eliminate(const Predicate& p, const std::string& var,
                     const SolverOptions& opts = {});

}  // namespace impcheck::linsolve
