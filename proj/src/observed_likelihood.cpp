#include "censmed/observed_likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "censmed/censored_normal.hpp"
#include "censmed/distributions.hpp"
#include "censmed/error.hpp"
#include "censmed/logistic.hpp"
#include "censmed/optimize.hpp"
#include "censmed/quadrature.hpp"

namespace censmed {

namespace {

constexpr double kLog2Pi = 1.83787706640934548356;

struct CellGroup {
    int y;
    Eigen::VectorXd x;  // intercept then covariates
    double count;
};

// Censored rows grouped by (y, covariates); every likelihood evaluation
// integrates each group once.
class ObsLikProblem {
public:
    explicit ObsLikProblem(const ArmSample& s) : assay_limit_(s.assay_limit) {
        const auto n_obs = static_cast<Eigen::Index>(s.count_observed());
        const Eigen::Index p = s.n_params();
        obs_x_.resize(n_obs, p);
        obs_m_.resize(n_obs);
        obs_y_.resize(n_obs);
        std::map<std::vector<double>, std::size_t> index;
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
            if (s.observed[static_cast<std::size_t>(i)]) {
                obs_x_.row(r) = s.design.row(i);
                obs_m_(r) = s.m(i);
                obs_y_(r) = s.y(i);
                ++r;
                continue;
            }
            std::vector<double> key;
            key.reserve(static_cast<std::size_t>(p) + 1);
            for (Eigen::Index j = 0; j < p; ++j) key.push_back(s.design(i, j));
            key.push_back(s.y(i));
            auto [it, inserted] = index.try_emplace(std::move(key), groups_.size());
            if (inserted) {
                groups_.push_back({static_cast<int>(s.y(i)), s.design.row(i).transpose(), 0.0});
            }
            groups_[it->second].count += 1.0;
        }
    }

    double loglik(const Theta& theta, double quad_tol) const {
        const Eigen::Index p = obs_x_.cols();
        const double sigma2 = theta.sigma2_m;
        const double sigma = std::sqrt(sigma2);
        const double beta_m = theta.beta(1);
        double total = 0.0;
        if (obs_x_.rows() > 0) {
            const Eigen::VectorXd mu = obs_x_ * theta.alpha;
            const Eigen::VectorXd eta_c = obs_x_ * outcome_covariate_coefs(theta, p);
            const double log_norm = -0.5 * (kLog2Pi + std::log(sigma2));
            for (Eigen::Index i = 0; i < obs_x_.rows(); ++i) {
                const double eta = eta_c(i) + beta_m * obs_m_(i);
                const double r = obs_m_(i) - mu(i);
                total += obs_y_(i) * eta - log1p_exp(eta) + log_norm - r * r / (2.0 * sigma2);
            }
        }
        const Eigen::VectorXd gamma = outcome_covariate_coefs(theta, p);
        for (const auto& g : groups_) {
            const double mu = g.x.dot(theta.alpha);
            const double eta = g.x.dot(gamma);
            const double cell = censored_cell_integral(g.y, mu, sigma, eta, beta_m, assay_limit_, quad_tol);
            total += g.count * std::log(cell);
        }
        return total;
    }

private:
    // Outcome coefficients aligned with the (1, c) design: (b0, b2...).
    static Eigen::VectorXd outcome_covariate_coefs(const Theta& theta, Eigen::Index p) {
        Eigen::VectorXd gamma(p);
        gamma(0) = theta.beta(0);
        gamma.tail(p - 1) = theta.beta.tail(p - 1);
        return gamma;
    }

    double assay_limit_;
    Eigen::MatrixXd obs_x_;
    Eigen::VectorXd obs_m_;
    Eigen::VectorXd obs_y_;
    std::vector<CellGroup> groups_;
};

}  // namespace

double censored_cell_integral(int y, double mu, double sigma, double eta_without_m, double beta_m,
                              double assay_limit, double quad_tol) {
    const double z = (assay_limit - mu) / sigma;
    const double mass = norm_cdf(z);
    if (!(mass > 0.0)) {
        return std::numeric_limits<double>::min();
    }
    auto integrand = [&](double m) {
        const double p = expit(eta_without_m + beta_m * m);
        const double t = (m - mu) / sigma;
        return (y == 1 ? p : 1.0 - p) * norm_pdf(t) / sigma;
    };
    const double hi = std::min(assay_limit, mu + 12.0 * sigma);
    double lo = std::min(mu - 10.0 * sigma, hi - 10.0 * sigma);
    const double tol = quad_tol * std::min(1.0, mass);
    for (int k = 0; k < 8 && integrand(lo) * 10.0 * sigma > tol; ++k) {
        lo -= 10.0 * sigma;
    }
    const double value = integrate_adaptive(integrand, lo, hi, tol).value;
    return std::clamp(value, std::numeric_limits<double>::min(), mass);
}

double censored_cell_integral(int y, const Eigen::VectorXd& c, const Theta& theta, double assay_limit,
                              double quad_tol) {
    const Eigen::Index k = c.size();
    if (theta.alpha.size() != k + 1) {
        throw Error(ErrorKind::InvalidArgument, "covariate dimension does not match theta");
    }
    const double mu = theta.alpha(0) + theta.alpha.tail(k).dot(c);
    const double eta = theta.beta(0) + theta.beta.tail(k).dot(c);
    return censored_cell_integral(y, mu, theta.sigma_m(), eta, theta.beta(1), assay_limit, quad_tol);
}

double obs_loglik(const Theta& theta, const ArmSample& sample, double quad_tol) {
    return ObsLikProblem(sample).loglik(theta, quad_tol);
}

Eigen::VectorXd to_unconstrained(const Theta& theta) {
    Eigen::VectorXd v = theta.flat();
    v(theta.alpha.size()) = std::log(theta.sigma2_m);
    return v;
}

Theta from_unconstrained(const Eigen::VectorXd& v, std::size_t k) {
    Eigen::VectorXd flat = v;
    const auto idx = static_cast<Eigen::Index>(k + 1);
    flat(idx) = std::exp(v(idx));
    return Theta::from_flat(flat, k);
}

Theta extrapolation_start(const ArmSample& sample) {
    const CensoredNormalFit mediator = fit_censored_normal(sample);
    const auto n_obs = static_cast<Eigen::Index>(sample.count_observed());
    const Eigen::Index p = sample.n_params();
    Eigen::MatrixXd x(n_obs, p + 1);
    Eigen::VectorXd y(n_obs);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sample.rows(); ++i) {
        if (!sample.observed[static_cast<std::size_t>(i)]) continue;
        x(r, 0) = 1.0;
        x(r, 1) = sample.m(i);
        x.row(r).tail(p - 1) = sample.design.row(i).tail(p - 1);
        y(r) = sample.y(i);
        ++r;
    }
    const LogisticFit outcome = fit_weighted_logistic(x, y, Eigen::VectorXd::Ones(n_obs));
    return Theta(mediator.alpha, mediator.sigma2_m, outcome.beta);
}

ObsLikFit maximize_obs_loglik(const ArmSample& sample, const Theta& init, const ObsLikOptions& opts) {
    if (!init.is_finite() || static_cast<Eigen::Index>(init.alpha.size()) != sample.n_params()) {
        throw Error(ErrorKind::InvalidArgument, "initial theta does not match the sample");
    }
    const ObsLikProblem problem(sample);
    const std::size_t k = init.n_covariates();
    int evals = 0;
    const Objective negative_loglik = [&](const Eigen::VectorXd& v) {
        ++evals;
        if (!v.allFinite() || std::abs(v(static_cast<Eigen::Index>(k + 1))) > 700.0) {
            return std::numeric_limits<double>::infinity();
        }
        return -problem.loglik(from_unconstrained(v, k), opts.quad_tol);
    };

    ObsLikFit fit;
    if (sample.count_observed() == 0) {
        fit.warnings.emplace_back("no uncensored rows; mediator parameters are weakly identified");
    }
    NelderMeadOptions nm;
    nm.initial_step = opts.simplex_step;
    nm.f_tol = opts.simplex_f_tol;
    nm.max_evals = opts.simplex_max_evals;
    const OptimResult coarse = nelder_mead(negative_loglik, to_unconstrained(init), nm);

    BfgsOptions qn;
    qn.grad_tol = opts.grad_tol;
    qn.max_iter = opts.bfgs_max_iter;
    const OptimResult polished = bfgs(negative_loglik, coarse.x, qn);

    fit.theta = from_unconstrained(polished.x, k);
    fit.loglik = -polished.value;
    fit.grad_inf_norm = polished.grad_inf_norm;
    fit.converged = polished.grad_inf_norm < opts.accept_grad_tol;
    fit.n_evals = evals;
    if (!fit.converged) {
        fit.warnings.emplace_back("optimizer stopped before the gradient tolerance was met");
    }
    return fit;
}

}  // namespace censmed
