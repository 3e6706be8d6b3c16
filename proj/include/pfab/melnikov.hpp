#pragma once

#include "pfab/reduction.hpp"
#include "pfab/symfield.hpp"
#include "pfab/systems.hpp"

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace pfab {

/// Fitted nonzero constants of the closed-form basis integrals, one set per
/// (system, branch). Fitted once from quadrature at a reference h.
struct BasisConstants {
    std::vector<double> c;  // aligned with basis_indices(kind)
};
const BasisConstants& basis_constants(const SystemSpec& sys, int branch);

/// Closed-form values of the basis integrals at h (Lemma 2.3 shapes with the
/// fitted constants).
std::vector<double> basis_closed_values(const SystemSpec& sys, int branch, double h);

/// Coefficient vector of M(h) over the n=2 melnikov family (6 for S1, 7 for S2).
struct KVector {
    SystemKind kind;
    int branch = 0;
    std::vector<double> k;
};

/// The linear map (perturbation coefficients) -> KVector for n=2.
KVector k_map(const SystemSpec& sys, const PerturbationPoly& pert, int branch);

/// M(h) = sum k_i f_i over the melnikov family: exact family elements with
/// floating-point weights.
struct MelnikovClosed {
    KVector kv;
    std::vector<FieldElem> family;
    double eval(double h) const;
};
MelnikovClosed melnikov_closed(const SystemSpec& sys, const KVector& kv);

/// Determinant of the k-map restricted to the independent coordinate block.
double kmap_jacobian(const SystemSpec& sys, int branch);

/// Zero-count ceilings per system (whole Sigma), discontinuous or smooth.
int bound_for(const SystemSpec& sys, int n, bool smooth);

struct Zero {
    double h = 0.0;
    double residual = 0.0;
    bool simple = true;
};

struct ZeroReport {
    double lo = 0.0, hi = 0.0;
    std::vector<Zero> zeros;
    std::vector<double> tangencies;  // possible even-multiplicity zeros, not counted
    int count = 0;
    int bound = -1;
    std::string bound_source;
    bool identically_zero = false;
    std::string to_json() const;
};

/// Sign-change scan with bisection polishing; near-tangencies flagged, never
/// silently counted. Infinite endpoints are truncated at wide defaults; pass
/// precomputed truncation radii for sharper scans.
ZeroReport count_zeros(const std::function<double(double)>& f, double lo, double hi,
                       int grid = 2048);

/// Zeros of M(h) for an arbitrary perturbation, via reduce_melnikov evaluated
/// with the closed-form basis values, over every annulus branch. Truncation
/// radius from the combo's dominant asymptotics times a safety factor.
ZeroReport melnikov_zeros(const SystemSpec& sys, const PerturbationPoly& pert, int grid = 2048);

/// Total zero count across Sigma (all branches), as used by the bound audit.
int melnikov_zero_count(const SystemSpec& sys, const PerturbationPoly& pert, int grid = 2048);

/// Builds an n=2 perturbation whose M(h) has simple zeros exactly at the
/// targets (5 for S1 on one annulus, 6 for S2); verified via count_zeros.
PerturbationPoly realize_max(const SystemSpec& sys, const std::vector<double>& targets);

PerturbationPoly random_perturbation(int n, std::mt19937_64& rng, bool smooth);

struct AuditResult {
    int trials = 0;
    int worst_count = 0;
    int bound = 0;
    bool ok = true;
};
AuditResult audit_bounds(const SystemSpec& sys, int n, int trials, std::uint64_t seed,
                         bool smooth);

}  // namespace pfab
