// Constellation design: assembles the pairwise separation constraints on
// the modulation vector, solves the lifted PSD relaxation, extracts a
// modulation vector by rank-one decomposition or Gaussian randomization,
// and verifies exact feasibility of the original separation conditions.
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chancomp/function.hpp"
#include "chancomp/modem.hpp"

namespace chancomp {

// One separation requirement between two classes with distinct values:
// |d^T x|^2 >= g with d = counts_i - counts_j and g = gamma |f_i - f_j|^2.
// The difference vector is recovered from the class table on demand to keep
// large pair lists compact.
struct ConstraintPair {
    int i;
    int j;
    double g;
};

struct DesignProblem {
    int q = 0;
    double P = 0.0;
    double gamma = 0.0;
    Eigen::MatrixXd classCounts;      // classes x q
    std::vector<double> classValues;  // f per class
    std::vector<ConstraintPair> pairs;

    Eigen::VectorXd diff(std::size_t pairIndex) const;  // counts_i - counts_j
};

// One pair per unordered class pair with distinct values; equal-value pairs
// are vacuous and omitted.
DesignProblem assemble_problem(const std::vector<MultisetClass>& classes, double gamma, double P);

// Default normalization policy gamma = P / (2 K^2 max|df|^2); returns the
// 1e-12 floor when fewer than two distinct values exist.
double choose_gamma(const std::vector<MultisetClass>& classes, double P);

enum class SolveStatus { Feasible, Infeasible, NumericalFailure };

struct LiftedSolution {
    Eigen::MatrixXcd X;  // q x q Hermitian PSD, trace P when feasible
    SolveStatus status = SolveStatus::NumericalFailure;
    double maxViolation = 0.0;  // largest constraint shortfall of X
    double eigenratio = 0.0;    // lambda_2 / lambda_1
    double slack = 0.0;         // achieved uniform slack min(<X,B> - g)
    // Set when infeasibility is structural: a pair with zero difference
    // vector but a positive separation requirement.
    std::optional<std::pair<int, int>> structuralPair;
};

// Solves the relaxation as a 2q x 2q real symmetric max-slack program via
// complex-to-real embedding, with constraint generation over the pair list.
LiftedSolution solve_relaxation(const DesignProblem& problem, double tol = 1e-7);

enum class Provenance { RankOne, Randomized, Manual };

std::string provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

struct ModulationDesign {
    Eigen::VectorXcd x;
    double P = 0.0;
    double gamma = 0.0;
    double margin = 0.0;  // min over pairs of |d^T x|^2 - g
    bool exactFeasible = false;
    Provenance provenance = Provenance::Manual;
};

// Rank-one extraction when the lifted solution is essentially rank one,
// otherwise Gaussian randomization with covariance X; candidates are scored
// by their minimum normalized margin. The global phase is fixed so the
// first nonzero entry is real non-negative.
ModulationDesign extract_modulation(const LiftedSolution& lifted, const DesignProblem& problem,
                                    int nRand, std::uint64_t seed);

struct FeasibilityViolation {
    int i;
    int j;
    double distance;  // |s_i - s_j|
};

struct FeasibilityReport {
    bool pass = false;
    double epsilon = 0.0;
    std::vector<FeasibilityViolation> violations;
};

// Exact check of the original feasibility conditions: constellation points
// of classes with distinct values must be farther apart than
// epsilon * sqrt(P).
FeasibilityReport verify_exact_feasibility(const Eigen::VectorXcd& x,
                                           const std::vector<MultisetClass>& classes,
                                           double epsilon);

// Minimum over pairs of |d^T x|^2 - g; +infinity when there are no pairs.
double margin(const Eigen::VectorXcd& x, const DesignProblem& problem);

struct DesignOptions {
    std::optional<double> P;      // default: q (unit average symbol energy)
    std::optional<double> gamma;  // default: choose_gamma policy
    int nRand = 1000;
    std::uint64_t seed = 1;
    double tol = 1e-7;
    double epsilon = 1e-6;
    int maxGammaHalvings = 20;
};

struct DesignResult {
    ModulationDesign design;
    LiftedSolution lifted;
    DesignProblem problem;
    std::vector<MultisetClass> classes;
    int gammaHalvings = 0;
};

// End-to-end driver: symmetry gate, class enumeration, gamma policy with
// geometric halving on relaxation infeasibility, solve and extract.
DesignResult design_modulation(const FunctionSpec& spec, const DesignOptions& options = {});

}  // namespace chancomp
