#include "censmed/logistic.hpp"

#include <cmath>

#include "censmed/distributions.hpp"
#include "censmed/error.hpp"

namespace censmed {

double log1p_exp(double eta) {
    return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double weighted_logistic_loglik(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                const Eigen::VectorXd& w, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = x * beta;
    double total = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        total += w(i) * (y(i) * eta(i) - log1p_exp(eta(i)));
    }
    return total;
}

LogisticFit fit_weighted_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& w, const LogisticOptions& opts) {
    const Eigen::Index p = x.cols();
    {
        const Eigen::MatrixXd scaled = w.cwiseSqrt().asDiagonal() * x;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
        qr.setThreshold(1e-10);
        if (qr.rank() < p) {
            throw Error(ErrorKind::RankDeficientDesign, "logistic design matrix is rank deficient");
        }
    }

    LogisticFit fit;
    fit.beta = Eigen::VectorXd::Zero(p);
    double loglik = weighted_logistic_loglik(x, y, w, fit.beta);
    Eigen::VectorXd score(p);
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        fit.n_iter = iter;
        const Eigen::VectorXd eta = x * fit.beta;
        Eigen::VectorXd resid(eta.size());
        Eigen::VectorXd curvature(eta.size());
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            const double prob = expit(eta(i));
            resid(i) = w(i) * (y(i) - prob);
            curvature(i) = w(i) * prob * (1.0 - prob);
        }
        score = x.transpose() * resid;
        const Eigen::MatrixXd info = x.transpose() * curvature.asDiagonal() * x;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
        if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-14)) {
            // Curvature collapsed: fitted probabilities saturated.
            break;
        }
        Eigen::VectorXd step = ldlt.solve(score);
        double scale = 1.0;
        Eigen::VectorXd candidate = fit.beta + step;
        double cand_loglik = weighted_logistic_loglik(x, y, w, candidate);
        for (int k = 0; k < 30 && cand_loglik < loglik - 1e-12 * (1.0 + std::abs(loglik)); ++k) {
            scale *= 0.5;
            candidate = fit.beta + scale * step;
            cand_loglik = weighted_logistic_loglik(x, y, w, candidate);
        }
        const double change = (scale * step).lpNorm<Eigen::Infinity>();
        fit.beta = candidate;
        loglik = cand_loglik;
        if (change < opts.tol) {
            fit.converged = true;
            break;
        }
    }

    const Eigen::VectorXd eta = x * fit.beta;
    Eigen::VectorXd resid(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) resid(i) = w(i) * (y(i) - expit(eta(i)));
    fit.score_inf_norm = (x.transpose() * resid).lpNorm<Eigen::Infinity>();
    if (!fit.converged && eta.cwiseAbs().maxCoeff() > 30.0) {
        fit.separation = true;
    }
    return fit;
}

LogisticFit fit_weighted_logistic(const std::vector<WeightedRow>& rows, const LogisticOptions& opts) {
    if (rows.empty()) {
        throw Error(ErrorKind::RankDeficientDesign, "no rows");
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index p = rows.front().x.size();
    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n);
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        if (r.x.size() != p) throw Error(ErrorKind::InvalidArgument, "ragged logistic rows");
        if (!(r.w > 0.0)) throw Error(ErrorKind::InvalidArgument, "row weights must be positive");
        x.row(i) = r.x.transpose();
        y(i) = r.y;
        w(i) = r.w;
    }
    return fit_weighted_logistic(x, y, w, opts);
}

}  // namespace censmed
