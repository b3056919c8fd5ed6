#include "chancomp/sdp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace chancomp::sdp {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

// Log-det of a PD matrix via Cholesky; NaN when the factorization fails.
double logdet_or_nan(const Eigen::MatrixXd& Y) {
    Eigen::LLT<Eigen::MatrixXd> llt(Y);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::quiet_NaN();
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

Eigen::VectorXd svec(const Eigen::MatrixXd& S) {
    const Eigen::Index n = S.rows();
    Eigen::VectorXd v(n * (n + 1) / 2);
    Eigen::Index idx = 0;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i <= j; ++i)
            v(idx++) = (i == j) ? S(i, j) : kSqrt2 * S(i, j);
    return v;
}

Eigen::MatrixXd smat(const Eigen::VectorXd& v) {
    const auto n = static_cast<Eigen::Index>(
        (std::sqrt(8.0 * static_cast<double>(v.size()) + 1.0) - 1.0) / 2.0 + 0.5);
    if (n * (n + 1) / 2 != v.size()) throw std::invalid_argument("svec length is not triangular");
    Eigen::MatrixXd S(n, n);
    Eigen::Index idx = 0;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i <= j; ++i) {
            const double x = v(idx++);
            if (i == j) {
                S(i, j) = x;
            } else {
                S(i, j) = x / kSqrt2;
                S(j, i) = x / kSqrt2;
            }
        }
    return S;
}

Result maximize_min_slack(int n, double traceBudget, const std::vector<Constraint>& constraints,
                          const Options& options) {
    if (n < 1) throw std::invalid_argument("matrix order must be positive");
    if (!(traceBudget > 0)) throw std::invalid_argument("trace budget must be positive");
    if (constraints.empty()) throw std::invalid_argument("max-slack program needs >= 1 constraint");
    const auto L = static_cast<Eigen::Index>(constraints.size());
    const Eigen::Index N = static_cast<Eigen::Index>(n) * (n + 1) / 2;

    Eigen::MatrixXd V(N, L);  // svec(B_l) per column
    Eigen::VectorXd bounds(L);
    for (Eigen::Index l = 0; l < L; ++l) {
        const Eigen::MatrixXd& F = constraints[static_cast<std::size_t>(l)].factors;
        if (F.rows() != n) throw std::invalid_argument("constraint factor row mismatch");
        V.col(l) = svec(Eigen::MatrixXd(F * F.transpose()));
        bounds(l) = constraints[static_cast<std::size_t>(l)].bound;
    }

    // Equality border svec(I), padded with 0 in the t coordinate.
    Eigen::VectorXd border = Eigen::VectorXd::Zero(N + 1);
    border.head(N) = svec(Eigen::MatrixXd::Identity(n, n));

    // Strictly feasible start: scaled identity, t below every initial slack.
    Eigen::MatrixXd Y = (traceBudget / n) * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd values = V.transpose() * svec(Y);
    double t = (values - bounds).minCoeff() - std::max(1.0, 0.1 * traceBudget);

    auto barrier = [&](const Eigen::MatrixXd& Ym, double tm, const Eigen::VectorXd& slacks,
                       double mu) {
        if ((slacks.array() <= 0).any()) return std::numeric_limits<double>::infinity();
        const double ld = logdet_or_nan(Ym);
        if (std::isnan(ld)) return std::numeric_limits<double>::infinity();
        return -tm - mu * ld - mu * slacks.array().log().sum();
    };

    Result result;
    double mu = std::max(1.0, traceBudget / n);
    const double muMin = 1e-15;
    bool reachedGap = false;
    bool aborted = false;

    Eigen::MatrixXd H(N + 1, N + 1);
    Eigen::MatrixXd M(n, n);

    while (!reachedGap && !aborted && result.newtonSteps < options.maxTotalNewton) {
        for (int iter = 0; iter < options.maxNewtonPerStage; ++iter) {
            if (result.newtonSteps >= options.maxTotalNewton) break;

            Eigen::LLT<Eigen::MatrixXd> lltY(Y);
            if (lltY.info() != Eigen::Success) {
                aborted = true;  // iterate left the cone: unrecoverable
                break;
            }
            const Eigen::MatrixXd W = lltY.solve(Eigen::MatrixXd::Identity(n, n));

            values.noalias() = V.transpose() * svec(Y);
            const Eigen::VectorXd slacks = values - bounds - Eigen::VectorXd::Constant(L, t);
            const Eigen::ArrayXd invS = slacks.array().inverse();
            const Eigen::ArrayXd invS2 = invS * invS;

            Eigen::VectorXd grad(N + 1);
            grad.head(N) = -mu * svec(W) - mu * (V * invS.matrix());
            grad(N) = -1.0 + mu * invS.sum();

            // H = mu * [ W (x)_s W   0 ; 0  0 ] + mu * sum_l (1/s_l^2) u_l u_l^T
            // with u_l = [svec(B_l); -1]; assembled in svec coordinates.
            {
                Eigen::Index col = 0;
                for (Eigen::Index j = 0; j < n; ++j) {
                    for (Eigen::Index i = 0; i <= j; ++i, ++col) {
                        if (i == j) {
                            M.noalias() = W.col(i) * W.col(i).transpose();
                        } else {
                            M.noalias() = (W.col(i) * W.col(j).transpose()) / kSqrt2;
                            M.noalias() += (W.col(j) * W.col(i).transpose()) / kSqrt2;
                        }
                        Eigen::Index row = 0;
                        for (Eigen::Index jj = 0; jj < n; ++jj)
                            for (Eigen::Index ii = 0; ii <= jj; ++ii, ++row)
                                H(row, col) = (ii == jj) ? mu * M(ii, jj) : mu * kSqrt2 * M(ii, jj);
                    }
                }
            }
            {
                const Eigen::MatrixXd Vw = V * invS.matrix().asDiagonal();
                H.topLeftCorner(N, N).noalias() += mu * (Vw * Vw.transpose());
            }
            H.block(0, N, N, 1).noalias() = -mu * (V * invS2.matrix());
            H.block(N, 0, 1, N) = H.block(0, N, N, 1).transpose();
            H(N, N) = mu * invS2.sum();

            // Eliminate the trace-equality multiplier through the PD Hessian:
            // step = -H^{-1}(grad + nu * border) with border^T step = 0.
            // Jacobi scaling keeps the factorization alive when the barrier
            // Hessian blows up near the optimum (slack entries ~ 1/mu^2).
            const Eigen::VectorXd scale = H.diagonal().cwiseMax(1e-300).cwiseSqrt();
            Eigen::MatrixXd Hs = scale.cwiseInverse().asDiagonal() * H *
                                 scale.cwiseInverse().asDiagonal();
            Hs.diagonal().array() += 1e-13;
            Eigen::LLT<Eigen::MatrixXd> lltH(Hs);
            if (lltH.info() != Eigen::Success) break;  // stage polished as far as doubles allow
            const auto precSolve = [&](const Eigen::VectorXd& rhs) {
                return Eigen::VectorXd(scale.cwiseInverse().asDiagonal() *
                                       lltH.solve(Eigen::VectorXd(rhs.cwiseQuotient(scale))));
            };
            const Eigen::VectorXd hg = precSolve(grad);
            const Eigen::VectorXd hc = precSolve(border);
            const double nu = -border.dot(hg) / border.dot(hc);
            const Eigen::VectorXd step = -hg - nu * hc;
            if (!step.allFinite()) break;

            const Eigen::VectorXd dy = step.head(N);
            const double dt = step(N);
            const double decrement2 = -(grad.dot(step));
            result.newtonSteps++;
            if (decrement2 / 2.0 < 1e-11) break;

            const Eigen::VectorXd dSlack = V.transpose() * dy - Eigen::VectorXd::Constant(L, dt);
            double alpha = 1.0;
            for (Eigen::Index l = 0; l < L; ++l)
                if (dSlack(l) < 0) alpha = std::min(alpha, -0.99 * slacks(l) / dSlack(l));

            const Eigen::MatrixXd dY = smat(dy);
            const double phi0 = barrier(Y, t, slacks, mu);
            const double slope = grad.dot(step);
            int backtracks = 0;
            bool stepped = false;
            while (backtracks < 60) {
                const Eigen::VectorXd sTrial = slacks + alpha * dSlack;
                const Eigen::MatrixXd Ytrial = Y + alpha * dY;
                const double phi = barrier(Ytrial, t + alpha * dt, sTrial, mu);
                if (phi <= phi0 + 0.25 * alpha * slope) {
                    Y = Ytrial;
                    t += alpha * dt;
                    stepped = true;
                    break;
                }
                alpha *= 0.5;
                backtracks++;
            }
            if (!stepped) break;  // stalled at this barrier stage
        }

        if (aborted) break;
        if (mu * static_cast<double>(L + n) <= options.gapTol * std::max(1.0, std::abs(t))) {
            reachedGap = true;
        } else if (mu <= muMin) {
            break;
        } else {
            mu = std::max(mu / options.muFactor, muMin);
        }
    }

    result.Y = Y;
    values.noalias() = V.transpose() * svec(Y);
    result.slack = (values - bounds).minCoeff();
    result.converged = reachedGap;
    return result;
}

}  // namespace chancomp::sdp
