#pragma once

#include "pfab/systems.hpp"

#include <functional>

namespace pfab {

/// Index (i,j) of I_{i,j} = int x^{i-k-1} y^j dx; i may be a half-integer
/// for r19/r20, stored doubled (i2 = 2i).
struct IntegralIndex {
    int i2 = 0;
    int j = 0;

    static IntegralIndex of(int i, int j) { return {2 * i, j}; }
    static IntegralIndex half(int i2, int j) { return {i2, j}; }
    bool integer_i() const { return i2 % 2 == 0; }
    double i_value() const { return 0.5 * i2; }
    Rat i_rat() const { return rat(i2, 2); }
    bool operator<(const IntegralIndex& o) const {
        return i2 != o.i2 ? i2 < o.i2 : j < o.j;
    }
    bool operator==(const IntegralIndex& o) const { return i2 == o.i2 && j == o.j; }
    std::string str() const;
};

/// Oval x-axis intersections x1 < x2 of the level oval at h.
struct OvalGeometry {
    double h = 0.0;
    int branch = 0;
    double x1 = 0.0, x2 = 0.0;
};

OvalGeometry oval_endpoints(const SystemSpec& sys, double h);

struct QuadratureOptions {
    double rel_tol = 1e-11;
    double abs_tol = 1e-14;
    unsigned max_depth = 15;
};

/// I_{i,j}(h): upper branch x1 -> x2 with y = +sqrt(2 phi).
double integral_I(const SystemSpec& sys, double h, IntegralIndex idx,
                  const QuadratureOptions& opt = {});

/// J_{i,j}(h): lower branch x2 -> x1 with y = -sqrt(2 phi).
double integral_J(const SystemSpec& sys, double h, IntegralIndex idx,
                  const QuadratureOptions& opt = {});

/// int_{Gamma_h^+} x^i y^j dy by direct parametrization (upper branch x1->x2).
double integral_dy(const SystemSpec& sys, double h, double i_exponent, int j,
                   const QuadratureOptions& opt = {});

/// M(h) assembled from the generating integrals per the rho-combination.
double melnikov_quadrature(const SystemSpec& sys, const PerturbationPoly& pert, double h,
                           const QuadratureOptions& opt = {});

/// Adaptive Gauss-Kronrod on [a,b] (exposed for reuse by other modules).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opt = {});

}  // namespace pfab
