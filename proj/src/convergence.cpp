#include <cmath>

#include "ddgeo/planner.hpp"
#include "ddgeo/smooth.hpp"

namespace ddgeo {

std::vector<ConvergenceRow> convergence_experiment(const Configuration& u, const Configuration& v,
                                                   const std::vector<int>& n_list) {
    const SmoothPath smooth = dubins_solve(u, v, 1.0);
    const double dubins = smooth.length();
    std::vector<ConvergenceRow> rows;
    rows.reserve(n_list.size());
    for (const int n : n_list) {
        const Params params = Params::from_sides(n, 2.0 * std::sin(kPi / n));
        if (!(params.theta < dubins)) throw PreconditionError("convergence_experiment: theta_n not below |gamma|");
        ConvergenceRow row;
        row.n = n;
        row.theta = params.theta;
        row.ell = params.ell;
        row.dubins_length = dubins;
        row.discretized_length = path_length(discretize(smooth, params.theta));
        row.plan_length = plan(u, v, params).length;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ddgeo
