#pragma once

#include "pfab/rational.hpp"

#include <array>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace pfab {

enum class SystemKind { S1, S2, R19, R20 };

const char* to_string(SystemKind k);
SystemKind system_from_string(const std::string& s);

enum class Side { upper, lower };

/// Open h-interval of a period annulus; +-infinity endpoints allowed.
struct Interval {
    double lo = 0.0, hi = 0.0;
    bool contains(double h, double margin = 0.0) const { return h > lo + margin && h < hi - margin; }
};

/// One of the four systems: exponent k, H-coefficients, admissible h-ranges.
struct SystemSpec {
    SystemKind kind;
    Rat k;                       // exponent in H = x^{-k}(y^2/2 + l2 x^2 + l1 x + l0)
    Rat lambda2, lambda1, lambda0;
    std::vector<Interval> sigma;
    std::vector<std::pair<double, double>> centers;  // (x*, h*) with y*=0
    Rat mu_exponent;             // integrating-factor exponent (metadata)

    double k_d() const { return to_double(k); }
    bool half_integer_indices() const { return kind == SystemKind::R19 || kind == SystemKind::R20; }
    /// Index of the sigma interval containing h; throws if outside.
    int branch_of(double h) const;
};

SystemSpec make_system(SystemKind kind);

/// H(x,y) = x^{-k}(y^2/2 + l2 x^2 + l1 x + l0).
double hamiltonian(const SystemSpec& sys, double x, double y);

/// phi(x) = h x^k - l2 x^2 - l1 x - l0 = y^2/2 on the oval of level h.
double half_energy(const SystemSpec& sys, double h, double x);

/// Discontinuous polynomial perturbation of degree n: coefficient maps
/// a+-, b+- over monomials x^i y^j with i+j <= n (missing entries zero).
struct PerturbationPoly {
    int n = 0;
    std::map<std::pair<int, int>, double> a_plus, a_minus, b_plus, b_minus;

    void set(char which, bool plus, int i, int j, double v);
    double get(char which, bool plus, int i, int j) const;
    bool is_smooth() const;
    void validate() const;  // throws if any index has i+j > n or i,j < 0

    std::string to_json() const;
    static PerturbationPoly from_json(const std::string& text);
};

/// Unperturbed field plus eps*(f^side, g^side).
std::pair<double, double> vector_field(const SystemSpec& sys, Side side, double eps,
                                       const PerturbationPoly& pert, double x, double y);

}  // namespace pfab
