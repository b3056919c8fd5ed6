#include "chancomp/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "chancomp/channel.hpp"
#include "chancomp/sdp.hpp"

namespace chancomp {

namespace {

constexpr double kGammaFloor = 1e-12;
constexpr double kExactEpsilon = 1e-6;

double value_span(const std::vector<double>& values) {
    if (values.empty()) return 1.0;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return std::max({1.0, std::abs(*lo), std::abs(*hi)});
}

// Class constellation points s_i = counts_i . x for every class.
Eigen::VectorXcd class_points(const Eigen::MatrixXd& counts, const Eigen::VectorXcd& x) {
    return counts.cast<cxd>() * x;
}

}  // namespace

Eigen::VectorXd DesignProblem::diff(std::size_t pairIndex) const {
    const ConstraintPair& p = pairs[pairIndex];
    return (classCounts.row(p.i) - classCounts.row(p.j)).transpose();
}

DesignProblem assemble_problem(const std::vector<MultisetClass>& classes, double gamma, double P) {
    if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
    if (!(P > 0)) throw std::invalid_argument("power budget must be positive");
    if (classes.empty()) throw std::invalid_argument("need at least one class");

    DesignProblem problem;
    problem.q = static_cast<int>(classes.front().counts.size());
    problem.P = P;
    problem.gamma = gamma;
    const auto n = static_cast<Eigen::Index>(classes.size());
    problem.classCounts.resize(n, problem.q);
    problem.classValues.resize(classes.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int l = 0; l < problem.q; ++l)
            problem.classCounts(i, l) = static_cast<double>(classes[static_cast<std::size_t>(i)].counts[static_cast<std::size_t>(l)]);
        problem.classValues[static_cast<std::size_t>(i)] = classes[static_cast<std::size_t>(i)].value;
    }

    const double tol = value_equality_tolerance(value_span(problem.classValues));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double df = problem.classValues[static_cast<std::size_t>(i)] -
                              problem.classValues[static_cast<std::size_t>(j)];
            if (std::abs(df) <= tol) continue;
            problem.pairs.push_back(ConstraintPair{static_cast<int>(i), static_cast<int>(j),
                                                   gamma * df * df});
        }
    }
    return problem;
}

double choose_gamma(const std::vector<MultisetClass>& classes, double P) {
    if (!(P > 0)) throw std::invalid_argument("power budget must be positive");
    if (classes.empty()) return kGammaFloor;
    double K = 0;
    for (int c : classes.front().counts) K += c;
    const double tol = value_equality_tolerance(
        value_span([&] {
            std::vector<double> v;
            v.reserve(classes.size());
            for (const auto& cls : classes) v.push_back(cls.value);
            return v;
        }()));
    double maxDf2 = 0;
    for (std::size_t i = 0; i < classes.size(); ++i)
        for (std::size_t j = i + 1; j < classes.size(); ++j) {
            const double df = classes[i].value - classes[j].value;
            if (std::abs(df) > tol) maxDf2 = std::max(maxDf2, df * df);
        }
    if (maxDf2 <= 0) return kGammaFloor;
    return P / (2.0 * K * K * maxDf2);
}

namespace {

// Margins <X, B_ij> - g for every pair, via a signed eigen-factorization of
// Re(X): d^T R d = sum_v lambda_v (w_i[v] - w_j[v])^2 with w = V^T counts.
// Exact regardless of small negative eigenvalues.
std::vector<double> pair_margins(const DesignProblem& problem, const Eigen::MatrixXd& reX) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reX);
    const Eigen::VectorXd lambda = eig.eigenvalues();
    const Eigen::MatrixXd W = eig.eigenvectors().transpose() * problem.classCounts.transpose();
    std::vector<double> margins(problem.pairs.size());
    const int q = problem.q;
    for (std::size_t p = 0; p < problem.pairs.size(); ++p) {
        const auto i = static_cast<Eigen::Index>(problem.pairs[p].i);
        const auto j = static_cast<Eigen::Index>(problem.pairs[p].j);
        double acc = 0;
        for (int v = 0; v < q; ++v) {
            const double dw = W(v, i) - W(v, j);
            acc += lambda(v) * dw * dw;
        }
        margins[p] = acc - problem.pairs[p].g;
    }
    return margins;
}

// Complex-to-real embedding of the pair constraint: B = d d^T on the
// Hermitian side becomes diag(B, B) = [d;0][d;0]^T + [0;d][0;d]^T, with the
// bound doubled along with the trace budget. Constraints are normalized by
// their bound g so the solver's uniform slack is the relative one,
// <X, B> >= g (1 + t): an additive slack rewards isotropic X (every pair
// gains ||d||^2 per unit of identity mass) and yields lifted solutions no
// vector can realize, while the relative slack shares the extraction
// step's normalized-margin metric.
sdp::Constraint embed_pair(const DesignProblem& problem, std::size_t pairIndex) {
    const Eigen::VectorXd d = problem.diff(pairIndex);
    const int q = problem.q;
    const double g = problem.pairs[pairIndex].g;
    const double scale = g > 1e-300 ? 1.0 / std::sqrt(g) : 1.0;
    Eigen::MatrixXd factors = Eigen::MatrixXd::Zero(2 * q, 2);
    factors.col(0).head(q) = scale * d;
    factors.col(1).tail(q) = scale * d;
    return sdp::Constraint{std::move(factors), g > 1e-300 ? 2.0 : 2.0 * g};
}

// Structure-average the embedded solution and recover the Hermitian matrix:
// X = (Y11 + Y22)/2 + i (Y21 - Y12)/2, rescaled to trace exactly P.
Eigen::MatrixXcd recover_hermitian(const Eigen::MatrixXd& Y, int q, double P) {
    const Eigen::MatrixXd R = 0.5 * (Y.topLeftCorner(q, q) + Y.bottomRightCorner(q, q));
    const Eigen::MatrixXd Sraw = 0.5 * (Y.bottomLeftCorner(q, q) - Y.topRightCorner(q, q));
    const Eigen::MatrixXd S = 0.5 * (Sraw - Sraw.transpose());  // enforce antisymmetry
    Eigen::MatrixXcd X(q, q);
    X.real() = 0.5 * (R + R.transpose());
    X.imag() = S;
    const double tr = X.real().trace();
    if (tr > 0) X *= P / tr;
    return X;
}

}  // namespace

LiftedSolution solve_relaxation(const DesignProblem& problem, double tol) {
    LiftedSolution out;
    const int q = problem.q;

    // Structural infeasibility: identical count vectors cannot be separated.
    for (std::size_t p = 0; p < problem.pairs.size(); ++p) {
        if (problem.pairs[p].g <= 0) continue;
        if (problem.diff(p).cwiseAbs().maxCoeff() == 0.0) {
            out.status = SolveStatus::Infeasible;
            out.structuralPair = std::make_pair(problem.pairs[p].i, problem.pairs[p].j);
            out.maxViolation = problem.pairs[p].g;
            out.X = Eigen::MatrixXcd::Zero(q, q);
            return out;
        }
    }

    if (problem.pairs.empty()) {
        // Unconstrained: any PSD matrix with the right trace qualifies.
        out.X = (problem.P / q) * Eigen::MatrixXcd::Identity(q, q);
        out.status = SolveStatus::Feasible;
        out.slack = std::numeric_limits<double>::infinity();
        out.eigenratio = 1.0;
        return out;
    }

    const std::size_t nPairs = problem.pairs.size();
    constexpr std::size_t kInitialCap = 1500;
    constexpr std::size_t kAddPerRound = 1024;
    constexpr std::size_t kSubsetCap = 12000;
    constexpr int kMaxRounds = 40;

    // Working subset, seeded with the hardest pairs by required Rayleigh
    // level g / |d|^2.
    std::vector<std::size_t> subset;
    std::vector<char> inSubset(nPairs, 0);
    if (nPairs <= kInitialCap) {
        subset.resize(nPairs);
        std::iota(subset.begin(), subset.end(), std::size_t{0});
    } else {
        std::vector<std::size_t> order(nPairs);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::vector<double> score(nPairs);
        for (std::size_t p = 0; p < nPairs; ++p)
            score[p] = problem.pairs[p].g / problem.diff(p).squaredNorm();
        std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kInitialCap),
                         order.end(),
                         [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
        subset.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kInitialCap));
        std::sort(subset.begin(), subset.end());
    }
    for (std::size_t p : subset) inSubset[p] = 1;

    Eigen::MatrixXcd bestX;
    double fullMin = -std::numeric_limits<double>::infinity();
    double subsetSlack = 0.0;
    bool solverConverged = false;

    // The subset program overestimates the achievable slack; grow the subset
    // until the full-set minimum catches up with the subset optimum, so the
    // returned X is the max-slack solution of the whole pair list, not just a
    // point that happens to clear the missing pairs.
    for (int round = 0; round < kMaxRounds; ++round) {
        std::vector<sdp::Constraint> cons;
        cons.reserve(subset.size());
        for (std::size_t p : subset) cons.push_back(embed_pair(problem, p));

        sdp::Options opts;
        const sdp::Result res = sdp::maximize_min_slack(2 * q, 2.0 * problem.P, cons, opts);
        solverConverged = res.converged;
        subsetSlack = 0.5 * res.slack;  // embedded scale is 2x

        bestX = recover_hermitian(res.Y, q, problem.P);
        const std::vector<double> margins = pair_margins(problem, bestX.real());
        fullMin = *std::min_element(margins.begin(), margins.end());
        // Relative margins, the solver's slack metric.
        std::vector<double> relative(nPairs);
        double fullMinRel = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < nPairs; ++p) {
            relative[p] = margins[p] / std::max(problem.pairs[p].g, 1e-12);
            fullMinRel = std::min(fullMinRel, relative[p]);
        }

        if (subsetSlack < -tol) break;  // certified infeasible already
        const double gapTol = std::max(1e-6, 0.02 * std::abs(subsetSlack));
        if (fullMinRel >= subsetSlack - gapTol) break;  // subset solution is full-set optimal
        std::vector<std::size_t> lagging;
        for (std::size_t p = 0; p < nPairs; ++p)
            if (!inSubset[p] && relative[p] < subsetSlack - gapTol) lagging.push_back(p);
        if (lagging.empty()) break;  // gap sits inside the subset: solver limit
        if (subset.size() >= kSubsetCap) break;
        const std::size_t take = std::min(kAddPerRound, lagging.size());
        std::nth_element(lagging.begin(), lagging.begin() + static_cast<std::ptrdiff_t>(take - 1),
                         lagging.end(),
                         [&](std::size_t a, std::size_t b) { return relative[a] < relative[b]; });
        lagging.resize(take);
        for (std::size_t p : lagging) {
            if (subset.size() >= kSubsetCap) break;
            subset.push_back(p);
            inSubset[p] = 1;
        }
    }

    out.X = bestX;
    out.slack = fullMin;
    out.maxViolation = std::max(0.0, -fullMin);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(bestX);
    const Eigen::VectorXd lam = eig.eigenvalues();
    const double top = lam(lam.size() - 1);
    const double second = lam.size() > 1 ? std::max(0.0, lam(lam.size() - 2)) : 0.0;
    out.eigenratio = top > 0 ? second / top : 1.0;

    if (fullMin >= -tol) {
        out.status = SolveStatus::Feasible;
    } else if (subsetSlack < -tol && solverConverged) {
        out.status = SolveStatus::Infeasible;
    } else {
        out.status = SolveStatus::NumericalFailure;
    }
    return out;
}

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::RankOne: return "rank-one";
        case Provenance::Randomized: return "randomized";
        case Provenance::Manual: return "manual";
    }
    return "manual";
}

Provenance provenance_from_name(const std::string& name) {
    if (name == "rank-one") return Provenance::RankOne;
    if (name == "randomized") return Provenance::Randomized;
    if (name == "manual") return Provenance::Manual;
    throw std::invalid_argument("unknown provenance: " + name);
}

namespace {

void fix_global_phase(Eigen::VectorXcd& x, double P) {
    const double threshold = 1e-12 * std::sqrt(P);
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double mag = std::abs(x(k));
        if (mag > threshold) {
            x *= std::conj(x(k)) / mag;
            return;
        }
    }
}

// Minimum normalized margin of candidate points s (one per class), with
// early exit once the running minimum cannot beat `floor`.
double min_normalized_margin(const DesignProblem& problem, const Eigen::VectorXcd& s,
                             double floor) {
    double minMargin = std::numeric_limits<double>::infinity();
    for (const ConstraintPair& pair : problem.pairs) {
        const double dist2 = std::norm(s(pair.i) - s(pair.j));
        const double nm = (dist2 - pair.g) / std::max(pair.g, 1e-12);
        if (nm < minMargin) {
            minMargin = nm;
            if (minMargin <= floor) return minMargin;
        }
    }
    return minMargin;
}

// Deterministic ascent of the minimum normalized margin on the power
// sphere. Randomization alone lands far below the best rank-one solution
// because the lifted optimum spreads trace mass that no single vector can
// realize; a local polish of the selected candidate closes most of that gap.
Eigen::VectorXcd polish_candidate(const DesignProblem& problem, Eigen::VectorXcd x, int iters) {
    const double P = problem.P;
    const Eigen::MatrixXcd counts = problem.classCounts.cast<cxd>();
    const auto score = [&](const Eigen::VectorXcd& v) {
        return min_normalized_margin(problem, Eigen::VectorXcd(counts * v),
                                     -std::numeric_limits<double>::infinity());
    };
    double best = score(x);
    double step = 0.1 * std::sqrt(P);
    Eigen::VectorXd coef(problem.classCounts.rows());
    for (int it = 0; it < iters && step > 1e-7 * std::sqrt(P); ++it) {
        const Eigen::VectorXcd s = counts * x;
        // Softmin-weighted ascent direction of the normalized margins,
        // accumulated per class then mapped through the count matrix.
        double minMargin = std::numeric_limits<double>::infinity();
        for (const ConstraintPair& pair : problem.pairs)
            minMargin = std::min(minMargin,
                                 (std::norm(s(pair.i) - s(pair.j)) - pair.g) /
                                     std::max(pair.g, 1e-12));
        const double tau = std::max(1e-4, 0.2 * (1.0 + std::abs(minMargin)));
        Eigen::VectorXcd coefC = Eigen::VectorXcd::Zero(problem.classCounts.rows());
        for (const ConstraintPair& pair : problem.pairs) {
            const cxd u = s(pair.i) - s(pair.j);
            const double gref = std::max(pair.g, 1e-12);
            const double nm = (std::norm(u) - pair.g) / gref;
            const double w = std::exp(-(nm - minMargin) / tau);
            if (w < 1e-12) continue;
            const cxd c = w * (2.0 / gref) * u;
            coefC(pair.i) += c;
            coefC(pair.j) -= c;
        }
        Eigen::VectorXcd grad = counts.transpose() * coefC;
        // Remove the radial component; steps live on the power sphere.
        grad -= (x.dot(grad).real() / P) * x;
        const double gnorm = grad.norm();
        if (gnorm <= 0) break;
        Eigen::VectorXcd trial = x + (step / gnorm) * grad;
        trial *= std::sqrt(P) / trial.norm();
        const double trialScore = score(trial);
        if (trialScore > best) {
            best = trialScore;
            x = std::move(trial);
            step *= 1.4;
        } else {
            step *= 0.5;
        }
    }
    return x;
}

}  // namespace

double margin(const Eigen::VectorXcd& x, const DesignProblem& problem) {
    if (problem.pairs.empty()) return std::numeric_limits<double>::infinity();
    const Eigen::VectorXcd s = class_points(problem.classCounts, x);
    double minMargin = std::numeric_limits<double>::infinity();
    for (const ConstraintPair& pair : problem.pairs)
        minMargin = std::min(minMargin, std::norm(s(pair.i) - s(pair.j)) - pair.g);
    return minMargin;
}

ModulationDesign extract_modulation(const LiftedSolution& lifted, const DesignProblem& problem,
                                    int nRand, std::uint64_t seed) {
    if (lifted.status != SolveStatus::Feasible)
        throw std::invalid_argument("extraction requires a feasible lifted solution");
    if (nRand < 1) throw std::invalid_argument("nRand must be >= 1");
    const int q = problem.q;
    const double P = problem.P;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(lifted.X);
    const Eigen::VectorXd lam = eig.eigenvalues();
    const double top = std::max(lam(q - 1), 0.0);
    const double second = q > 1 ? std::max(lam(q - 2), 0.0) : 0.0;
    const double ratio = top > 0 ? second / top : 1.0;

    ModulationDesign design;
    design.P = P;
    design.gamma = problem.gamma;

    if (ratio <= 1e-6) {
        Eigen::VectorXcd x = std::sqrt(top) * eig.eigenvectors().col(q - 1);
        const double norm = x.norm();
        if (norm > 0) x *= std::sqrt(P) / norm;
        fix_global_phase(x, P);
        design.x = std::move(x);
        design.provenance = Provenance::RankOne;
    } else {
        // Gaussian randomization: candidates F z with F F^H = X (clipped),
        // rescaled to the power budget, scored by min normalized margin.
        Eigen::MatrixXcd F = eig.eigenvectors();
        for (int v = 0; v < q; ++v) F.col(v) *= std::sqrt(std::max(lam(v), 0.0));
        Rng rng(seed);
        Eigen::VectorXcd best;
        double bestScore = -std::numeric_limits<double>::infinity();
        Eigen::VectorXcd z(q);
        for (int r = 0; r < nRand; ++r) {
            for (int k = 0; k < q; ++k) z(k) = rng.complex_normal();
            Eigen::VectorXcd cand = F * z;
            const double norm = cand.norm();
            if (norm <= 0) continue;
            cand *= std::sqrt(P) / norm;
            const Eigen::VectorXcd s = class_points(problem.classCounts, cand);
            const double score = min_normalized_margin(problem, s, bestScore);
            if (score > bestScore) {
                bestScore = score;
                best = std::move(cand);
            }
        }
        if (best.size() > 0 && !problem.pairs.empty()) {
            const int polishIters = problem.pairs.size() > 2'000'000 ? 120 : 400;
            best = polish_candidate(problem, std::move(best), polishIters);
        }
        fix_global_phase(best, P);
        design.x = std::move(best);
        design.provenance = Provenance::Randomized;
    }

    design.margin = margin(design.x, problem);
    bool separated = true;
    if (!problem.pairs.empty()) {
        const Eigen::VectorXcd s = class_points(problem.classCounts, design.x);
        const double minDist = std::sqrt(kExactEpsilon * kExactEpsilon * P);
        for (const ConstraintPair& pair : problem.pairs) {
            if (std::abs(s(pair.i) - s(pair.j)) <= minDist) {
                separated = false;
                break;
            }
        }
    }
    design.exactFeasible = design.margin > 0 && separated;
    return design;
}

FeasibilityReport verify_exact_feasibility(const Eigen::VectorXcd& x,
                                           const std::vector<MultisetClass>& classes,
                                           double epsilon) {
    if (x.norm() <= 0) throw std::invalid_argument("modulation vector must be nonzero");
    FeasibilityReport report;
    report.epsilon = epsilon;
    const double P = x.squaredNorm();
    const double minDist = epsilon * std::sqrt(P);

    std::vector<cxd> s(classes.size());
    double span = 1.0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        cxd point(0, 0);
        for (std::size_t l = 0; l < classes[c].counts.size(); ++l)
            point += static_cast<double>(classes[c].counts[l]) * x(static_cast<Eigen::Index>(l));
        s[c] = point;
        span = std::max(span, std::abs(classes[c].value));
    }
    const double tol = value_equality_tolerance(span);
    for (std::size_t i = 0; i < classes.size(); ++i)
        for (std::size_t j = i + 1; j < classes.size(); ++j) {
            if (std::abs(classes[i].value - classes[j].value) <= tol) continue;
            const double dist = std::abs(s[i] - s[j]);
            if (dist <= minDist)
                report.violations.push_back(
                    FeasibilityViolation{static_cast<int>(i), static_cast<int>(j), dist});
        }
    report.pass = report.violations.empty();
    return report;
}

DesignResult design_modulation(const FunctionSpec& spec, const DesignOptions& options) {
    if (!verify_symmetry(spec))
        throw NonSymmetricFunction("target function is not symmetric; no shared encoder can compute it");
    DesignResult result;
    result.classes = enumerate_multiset_classes(spec);
    const double P = options.P.value_or(static_cast<double>(spec.q));
    double gamma = options.gamma.value_or(choose_gamma(result.classes, P));

    for (int attempt = 0; attempt <= options.maxGammaHalvings; ++attempt) {
        result.problem = assemble_problem(result.classes, gamma, P);
        result.lifted = solve_relaxation(result.problem, options.tol);
        result.gammaHalvings = attempt;
        if (result.lifted.status == SolveStatus::Feasible) {
            result.design =
                extract_modulation(result.lifted, result.problem, options.nRand, options.seed);
            return result;
        }
        if (result.lifted.structuralPair.has_value()) return result;  // no gamma can help
        if (result.lifted.status == SolveStatus::NumericalFailure) return result;
        gamma *= 0.5;
    }
    return result;
}

}  // namespace chancomp
