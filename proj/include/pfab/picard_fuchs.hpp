#pragma once

#include "pfab/quadrature.hpp"
#include "pfab/ratfunc.hpp"
#include "pfab/systems.hpp"

#include <vector>

namespace pfab {

/// Picard-Fuchs system V = A(h) V' for the basis-integral vector V.
struct PFSystem {
    SystemKind kind;
    std::vector<IntegralIndex> basis;         // column vector entries
    std::vector<std::vector<RatFunc>> entry;  // A(h), exact
    std::vector<double> singular_h;           // poles of entries / defining relations
};

const PFSystem& pf_system(SystemKind kind);

/// A(h) evaluated numerically; throws on recorded singular values.
std::vector<std::vector<double>> pf_matrix(const SystemSpec& sys, double h);

/// max-norm of V - A(h) V' over max-norm of V, with V from quadrature and
/// V' from Richardson-extrapolated central differences of step `step`.
double pf_residual(const SystemSpec& sys, double h, double step);

/// Finite-difference check of I_{i,j} = I'_{i-k,j+2}/(j+2); returns the
/// relative error.
double derivative_identity_error(const SystemSpec& sys, double h, IntegralIndex idx,
                                 double step = 1e-6);

}  // namespace pfab
