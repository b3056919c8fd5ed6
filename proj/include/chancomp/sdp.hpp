// Max-slack feasibility program over the real PSD cone:
//
//   maximize    t
//   subject to  <Y, B_l> >= bound_l + t,   l = 1..L
//               trace(Y) = traceBudget
//               Y (symmetric, n x n) PSD
//
// solved with a log-barrier Newton method on strictly feasible iterates.
// Constraint matrices are supplied in factored form B_l = F_l F_l^T, which
// covers the rank-structured quadratic constraints this project generates.
#pragma once

#include <vector>

#include <Eigen/Dense>

namespace chancomp::sdp {

struct Constraint {
    Eigen::MatrixXd factors;  // n x r, B = factors * factors^T
    double bound = 0.0;
};

struct Options {
    double gapTol = 1e-9;      // stop when mu * (L + n) falls below this
    double muFactor = 10.0;    // geometric barrier schedule
    int maxNewtonPerStage = 60;
    int maxTotalNewton = 800;
};

struct Result {
    Eigen::MatrixXd Y;   // strictly feasible PSD iterate with trace = budget
    double slack = 0.0;  // exact min_l(<Y,B_l> - bound_l) of the returned Y
    bool converged = false;
    int newtonSteps = 0;
};

Result maximize_min_slack(int n, double traceBudget, const std::vector<Constraint>& constraints,
                          const Options& options = {});

// svec packing with sqrt(2)-scaled off-diagonals, so that
// svec(A) . svec(B) = <A, B>. Exposed for tests.
Eigen::VectorXd svec(const Eigen::MatrixXd& S);
Eigen::MatrixXd smat(const Eigen::VectorXd& v);

}  // namespace chancomp::sdp
