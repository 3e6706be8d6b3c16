#pragma once

#include "pfab/systems.hpp"

#include <vector>

namespace pfab {

struct SimOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double event_tol = 1e-12;     // |y| at the located section crossing
    double max_time = 1e5;        // per half passage
    double box_factor = 10.0;     // bounding box = factor x oval extent
    int max_steps = 2000000;
};

struct ReturnMapSample {
    double x0 = 0.0;
    double x_ret = 0.0;
    double displacement = 0.0;
    double h0 = 0.0;
};

/// Integrates the `side` field from (x0, 0) to the next transversal crossing
/// of y = 0 and returns the crossing x. eps is capped at |eps| <= 1e-2.
double half_return(const SystemSpec& sys, const PerturbationPoly& pert, double eps, double x0,
                   Side side, const SimOptions& opt = {});

/// Full return: upper-then-lower passage (order decided by the flow direction
/// at the start point).
ReturnMapSample full_return(const SystemSpec& sys, const PerturbationPoly& pert, double eps,
                            double x0, const SimOptions& opt = {});

struct CycleSearch {
    std::vector<std::pair<double, double>> cycles;  // (x*, h*)
    bool degenerate = false;                        // whole-interval zero displacement
    std::vector<ReturnMapSample> samples;
};

/// Sign-change scan of the return displacement over x0 in x_range, with
/// bisection-polished fixed points.
CycleSearch find_limit_cycles(const SystemSpec& sys, const PerturbationPoly& pert, double eps,
                              std::pair<double, double> x_range, int samples,
                              const SimOptions& opt = {});

}  // namespace pfab
