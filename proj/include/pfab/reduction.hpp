#pragma once

#include "pfab/quadrature.hpp"
#include "pfab/ratfunc.hpp"
#include "pfab/systems.hpp"

#include <map>
#include <vector>

namespace pfab {

/// Basis integral indices per system, in a fixed order.
///   S1:  I00, I11, I-11, I02
///   S2:  I01, I10, I11, I02
///   r19: I(1/2)1, I11, I10
///   r20: I01, I(1/2)1, I00
const std::vector<IntegralIndex>& basis_indices(SystemKind kind);

/// Exact linear combination of the basis integrals with rational-function
/// coefficients, plus (r19/r20) a log term tau(h) * acosh(64 h).
struct BasisCombo {
    SystemKind kind;
    std::vector<RatFunc> coeff;
    RatFunc log_coeff;

    static BasisCombo zero(SystemKind kind);
    bool is_zero() const;

    BasisCombo& operator+=(const BasisCombo& o);
    friend BasisCombo operator+(BasisCombo a, const BasisCombo& b) { return a += b; }
    BasisCombo& scale(const RatFunc& f);
    BasisCombo scaled(const RatFunc& f) const;

    /// Evaluates with the provided basis-integral values (aligned with
    /// basis_indices) and acosh(64 h) for the log term.
    double eval(double h, const std::vector<double>& basis_values) const;
    /// Evaluates the basis integrals by quadrature and substitutes.
    double eval_quadrature(const SystemSpec& sys, double h) const;

    std::string str() const;
    std::string to_json() const;
};

/// Reduces I_{i,j} to the system's basis via the printed recurrences.
/// Throws std::domain_error (with the offending relation) for indices
/// outside the reachable set or on zero recurrence pivots.
BasisCombo reduce_integral(const SystemSpec& sys, IntegralIndex idx);

/// Structured M(h): the rho-combination of the generating integrals pushed
/// through reduce_integral. Perturbation coefficients (doubles) convert
/// exactly to rationals, so the result is exact.
BasisCombo reduce_melnikov(const SystemSpec& sys, const PerturbationPoly& pert);

/// rho_0: the I_{0,2} coefficient of the rho-combination (log source for r19/r20).
Rat rho0(const SystemSpec& sys, const PerturbationPoly& pert);

/// Checks the algebraic-structure degree bounds for a combo produced by
/// reduce_melnikov at degree n (small-n regimes use the corrected bounds;
/// for n >= 4 the bounds coincide with the printed ones).
bool degree_report(const BasisCombo& combo, int n);

/// Clears the reduction memo tables (mainly for tests measuring determinism).
void clear_reduction_cache();

}  // namespace pfab
