#include "censmed/censored_normal.hpp"

#include <cmath>
#include <numbers>

#include "censmed/distributions.hpp"
#include "censmed/error.hpp"

namespace censmed {

namespace {

constexpr double kLog2Pi = 1.83787706640934548356;

struct Split {
    Eigen::MatrixXd design;
    Eigen::VectorXd m;
};

Split observed_rows(const ArmSample& s) {
    const auto n_obs = static_cast<Eigen::Index>(s.count_observed());
    Split out{Eigen::MatrixXd(n_obs, s.n_params()), Eigen::VectorXd(n_obs)};
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        if (!s.observed[static_cast<std::size_t>(i)]) continue;
        out.design.row(r) = s.design.row(i);
        out.m(r) = s.m(i);
        ++r;
    }
    return out;
}

}  // namespace

Eigen::VectorXd least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& response) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < design.cols()) {
        throw Error(ErrorKind::RankDeficientDesign, "mediator design matrix is rank deficient");
    }
    return qr.solve(response);
}

double censored_normal_loglik(const Eigen::VectorXd& alpha, double sigma2, const ArmSample& sample) {
    const double sigma = std::sqrt(sigma2);
    const double log_norm = -0.5 * (kLog2Pi + std::log(sigma2));
    double total = 0.0;
    for (Eigen::Index i = 0; i < sample.rows(); ++i) {
        const double mu = sample.design.row(i).dot(alpha);
        if (sample.observed[static_cast<std::size_t>(i)]) {
            const double r = sample.m(i) - mu;
            total += log_norm - r * r / (2.0 * sigma2);
        } else {
            total += log_norm_cdf((sample.assay_limit - mu) / sigma);
        }
    }
    return total;
}

Eigen::VectorXd censored_normal_score(const Eigen::VectorXd& alpha, double sigma2, const ArmSample& sample) {
    const double sigma = std::sqrt(sigma2);
    const Eigen::Index p = alpha.size();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(p + 1);
    for (Eigen::Index i = 0; i < sample.rows(); ++i) {
        const auto x = sample.design.row(i);
        const double mu = x.dot(alpha);
        if (sample.observed[static_cast<std::size_t>(i)]) {
            const double r = sample.m(i) - mu;
            g.head(p) += (r / sigma2) * x.transpose();
            g(p) += -0.5 / sigma2 + r * r / (2.0 * sigma2 * sigma2);
        } else {
            const double z = (sample.assay_limit - mu) / sigma;
            const double lambda = inverse_mills(z);
            g.head(p) += (-lambda / sigma) * x.transpose();
            // d/dsigma2 log Phi(z) = lambda * dz/dsigma2 = -lambda * z / (2 sigma2)
            g(p) += -lambda * z / (2.0 * sigma2);
        }
    }
    return g;
}

CensoredNormalFit fit_censored_normal(const ArmSample& sample, const CensoredNormalOptions& opts) {
    const std::size_t n_obs = sample.count_observed();
    if (n_obs == 0) {
        throw Error(ErrorKind::NoUncensoredRows, "censored-normal fit needs at least one uncensored row");
    }
    const Split obs = observed_rows(sample);
    least_squares(obs.design, obs.m);
    const Eigen::Index n = sample.rows();

    // Start from least squares with censored rows placed at the limit. The
    // uncensored-only fit sits too far above the limit for the sigma2 score
    // update to have a positive denominator under heavy censoring.
    Eigen::VectorXd completed(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        completed(i) = sample.observed[static_cast<std::size_t>(i)] ? sample.m(i) : sample.assay_limit;
    }
    CensoredNormalFit fit;
    fit.alpha = least_squares(sample.design, completed);
    fit.sigma2_m = (completed - sample.design * fit.alpha).squaredNorm() / static_cast<double>(n);
    if (opts.init_alpha && opts.init_sigma2) {
        fit.alpha = *opts.init_alpha;
        fit.sigma2_m = *opts.init_sigma2;
    }
    if (!(fit.sigma2_m > 0.0)) {
        throw Error(ErrorKind::RankDeficientDesign, "mediator values have zero residual variance");
    }
    double loglik = censored_normal_loglik(fit.alpha, fit.sigma2_m, sample);
    fit.loglik_trace.push_back(loglik);

    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        fit.n_iter = iter;
        const double sigma = std::sqrt(fit.sigma2_m);
        const Eigen::VectorXd mu = sample.design * fit.alpha;
        double ss = 0.0;
        double denom = 0.0;
        double censored_second_moment = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (sample.observed[static_cast<std::size_t>(i)]) {
                const double r = sample.m(i) - mu(i);
                ss += r * r;
                denom += 1.0;
                completed(i) = sample.m(i);
            } else {
                const double z = (sample.assay_limit - mu(i)) / sigma;
                const double lambda = inverse_mills(z);
                denom += lambda * z;
                censored_second_moment += 1.0 - z * lambda;
                completed(i) = mu(i) - sigma * lambda;
            }
        }
        // Score-equation update; if its denominator is not positive, take
        // the EM form of the same fixed point instead.
        double sigma2_next = denom > 0.0
                                 ? ss / denom
                                 : (ss + fit.sigma2_m * censored_second_moment) / static_cast<double>(n);
        Eigen::VectorXd alpha_next = least_squares(sample.design, completed);
        double loglik_next = censored_normal_loglik(alpha_next, sigma2_next, sample);
        for (int k = 0; k < 30 && !(loglik_next >= loglik); ++k) {
            alpha_next = 0.5 * (alpha_next + fit.alpha);
            sigma2_next = 0.5 * (sigma2_next + fit.sigma2_m);
            loglik_next = censored_normal_loglik(alpha_next, sigma2_next, sample);
        }
        if (!(loglik_next >= loglik - 1e-10 * (1.0 + std::abs(loglik)))) {
            break;
        }
        const double change = std::max((alpha_next - fit.alpha).lpNorm<Eigen::Infinity>(),
                                       std::abs(sigma2_next - fit.sigma2_m));
        fit.alpha = alpha_next;
        fit.sigma2_m = sigma2_next;
        loglik = loglik_next;
        fit.loglik_trace.push_back(loglik);
        if (change < opts.tol) {
            fit.converged = true;
            break;
        }
    }
    fit.loglik = loglik;
    fit.score_inf_norm = censored_normal_score(fit.alpha, fit.sigma2_m, sample).lpNorm<Eigen::Infinity>();
    return fit;
}

}  // namespace censmed
