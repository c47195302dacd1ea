// quadrature.hpp - adaptive Gauss-Kronrod line integration with algebraic tails
#pragma once

#include <functional>
#include <vector>

#include "cbs3/atom.hpp"

namespace cbs3 {

struct QuadratureConfig {
    double rel_tol{1e-8};    // relative tolerance on the line integral
    double abs_floor{0.0};   // additional absolute error floor (0 disables)
    int max_intervals{2000}; // subdivision budget per integral
};

struct QuadResult {
    cd value{0.0, 0.0};
    double abs_error{0.0};
    long evals{0};
    bool converged{false};
};

// Integrate f over the whole real line. The interior (-cutoff, cutoff) is
// subdivided adaptively starting from the supplied peak hints; the tails are
// folded through u = 1/x and integrated adaptively as well, so algebraically
// decaying integrands (1/x^2 and faster) are handled without truncation bias.
QuadResult integrate_line(const std::function<cd(double)>& f, double cutoff,
                          const std::vector<double>& hints,
                          const QuadratureConfig& cfg);

struct QuadResultVec {
    Eigen::VectorXcd value;
    double abs_error{0.0};
    long evals{0};
    bool converged{false};
};

// Vector-valued variant of integrate_line: every component shares one adaptive
// subdivision and the error is controlled in the max norm (abs_error bounds
// each component). Meant for integrand families that are cheap to sweep across
// a parameter grid once their shared per-point setup is done; all evaluations
// must return the same vector length.
QuadResultVec integrate_line_vec(const std::function<Eigen::VectorXcd(double)>& f,
                                 double cutoff, const std::vector<double>& hints,
                                 const QuadratureConfig& cfg);

// Integrate f over the finite interval [a, b] with optional interior hints.
QuadResult integrate_segment(const std::function<cd(double)>& f, double a, double b,
                             const std::vector<double>& hints,
                             const QuadratureConfig& cfg);

// Generalized Mollow peak positions {0, +-Og, +-2Og}, Og = sqrt(|rabi|^2 + detuning^2).
std::vector<double> mollow_hints(const AtomParams& p);

// Default interior cutoff: scale * max(gamma, |rabi|, |detuning|).
double default_cutoff(const AtomParams& p, double scale = 25.0);

} // namespace cbs3
