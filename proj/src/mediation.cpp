#include "censmed/mediation.hpp"

#include <cmath>

#include "censmed/distributions.hpp"
#include "censmed/error.hpp"
#include "censmed/logistic.hpp"
#include "censmed/random.hpp"

namespace censmed {

namespace {

constexpr std::uint64_t kMcemStream = 1;
constexpr std::uint64_t kPredictStream = 2;

const double kLog10Of2 = std::log10(2.0);

Eigen::MatrixXd outcome_design(const Eigen::MatrixXd& mediator_design, const Eigen::VectorXd& m) {
    const Eigen::Index p = mediator_design.cols();
    Eigen::MatrixXd x(mediator_design.rows(), p + 1);
    x.col(0).setOnes();
    x.col(1) = m;
    x.rightCols(p - 1) = mediator_design.rightCols(p - 1);
    return x;
}

ArmSample only_observed(const ArmSample& s) {
    const auto n = static_cast<Eigen::Index>(s.count_observed());
    ArmSample out;
    out.design.resize(n, s.n_params());
    out.m.resize(n);
    out.y.resize(n);
    out.observed.assign(static_cast<std::size_t>(n), 1);
    out.assay_limit = s.assay_limit;
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        if (!s.observed[static_cast<std::size_t>(i)]) continue;
        out.design.row(r) = s.design.row(i);
        out.m(r) = s.m(i);
        out.y(r) = s.y(i);
        ++r;
    }
    return out;
}

Eigen::VectorXd fit_outcome(const ArmSample& s, Diagnostics& diag) {
    const LogisticFit fit = fit_weighted_logistic(outcome_design(s.design, s.m), s.y, Eigen::VectorXd::Ones(s.rows()));
    if (!fit.converged) diag.converged = false;
    if (fit.separation) {
        diag.separation = true;
        diag.notes.emplace_back("outcome model: separation detected");
    }
    return fit.beta;
}

void fit_untreated(const ArmSample& sample, const MethodSpec& spec, FittedModels& out) {
    Diagnostics& diag = out.diagnostics;
    switch (spec.kind) {
        case Method::Extrapolation: {
            const CensoredNormalFit mediator = fit_censored_normal(sample);
            diag.converged = mediator.converged;
            diag.n_iter = mediator.n_iter;
            const Eigen::VectorXd beta = fit_outcome(only_observed(sample), diag);
            out.theta = Theta(mediator.alpha, mediator.sigma2_m, beta);
            return;
        }
        case Method::ObservedLikelihood: {
            const ObsLikFit fit = maximize_obs_loglik(sample, extrapolation_start(sample), spec.obs_lik);
            diag.converged = fit.converged;
            diag.n_iter = fit.n_evals;
            diag.notes.insert(diag.notes.end(), fit.warnings.begin(), fit.warnings.end());
            out.theta = fit.theta;
            return;
        }
        case Method::Mcem: {
            McemConfig config = spec.mcem;
            config.seed = derive_seed(spec.seed, {kMcemStream, spec.mcem.seed});
            McemFit fit = mcem_fit(sample, config);
            diag.converged = fit.converged;
            diag.n_iter = fit.n_iter;
            if (fit.separation) {
                diag.separation = true;
                diag.notes.emplace_back("M-step outcome model: separation detected");
            }
            out.theta = fit.theta;
            out.posterior_samples = std::move(fit.samples);
            return;
        }
        case Method::HalfAssayLimit: {
            ArmSample imputed = sample;
            const double fill = half_limit_value(sample.assay_limit, spec.half_limit_scale);
            for (Eigen::Index i = 0; i < imputed.rows(); ++i) {
                if (!imputed.observed[static_cast<std::size_t>(i)]) imputed.m(i) = fill;
            }
            const Eigen::VectorXd alpha = least_squares(imputed.design, imputed.m);
            const double sigma2 =
                (imputed.m - imputed.design * alpha).squaredNorm() / static_cast<double>(imputed.rows());
            if (!(sigma2 > 0.0)) {
                throw Error(ErrorKind::RankDeficientDesign, "imputed mediator has zero residual variance");
            }
            const Eigen::VectorXd beta = fit_outcome(imputed, diag);
            out.theta = Theta(alpha, sigma2, beta);
            return;
        }
    }
}

// Per-row mediator values entering the prediction step: the observed value,
// or a set of draws for censored rows.
struct PredictionInputs {
    Eigen::MatrixXd design;
    std::vector<char> observed;
    Eigen::VectorXd m;
    std::vector<std::vector<double>> draws;  // indexed by censored-row order
};

PredictionInputs prediction_inputs(const ArmSample& s, const Eigen::VectorXd& alpha, double sigma2,
                                   const std::vector<std::vector<double>>* posterior, int J, std::uint64_t seed) {
    PredictionInputs in{s.design, s.observed, s.m, {}};
    const double sigma = std::sqrt(sigma2);
    Rng rng(seed);
    std::size_t cens = 0;
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        if (s.observed[static_cast<std::size_t>(i)]) continue;
        if (posterior) {
            in.draws.push_back((*posterior)[cens]);
        } else {
            const double mu = s.design.row(i).dot(alpha);
            std::vector<double> d(static_cast<std::size_t>(J));
            for (auto& v : d) v = sample_truncated_normal(mu, sigma, s.assay_limit, rng);
            in.draws.push_back(std::move(d));
        }
        ++cens;
    }
    return in;
}

// Mean over rows of E[Y | A = 0, M = m - shift, C].
double mean_prediction(const PredictionInputs& in, const Eigen::VectorXd& beta, double shift) {
    const Eigen::Index p = in.design.cols();
    Eigen::VectorXd gamma(p);
    gamma(0) = beta(0);
    gamma.tail(p - 1) = beta.tail(p - 1);
    const double slope = beta(1);
    double total = 0.0;
    std::size_t cens = 0;
    for (Eigen::Index i = 0; i < in.design.rows(); ++i) {
        const double eta_c = in.design.row(i).dot(gamma);
        if (in.observed[static_cast<std::size_t>(i)]) {
            total += expit(eta_c + slope * (in.m(i) - shift));
            continue;
        }
        const auto& d = in.draws[cens++];
        double acc = 0.0;
        for (double v : d) acc += expit(eta_c + slope * (v - shift));
        total += acc / static_cast<double>(d.size());
    }
    return total / static_cast<double>(in.design.rows());
}

bool use_posterior(const MethodSpec& spec) {
    switch (spec.prediction_draws) {
        case PredictionDraws::Auto: return spec.kind == Method::Mcem;
        case PredictionDraws::Truncated: return false;
        case PredictionDraws::Posterior: return true;
    }
    return false;
}

Dataset untreated_rows(const Dataset& data) {
    Dataset untreated = data.has_treated() ? data.arm(0) : data;
    if (untreated.size() == 0) throw Error(ErrorKind::EmptyArm, "no untreated rows");
    return untreated;
}

}  // namespace

std::string_view to_string(Method method) {
    switch (method) {
        case Method::Extrapolation: return "extrapolation";
        case Method::ObservedLikelihood: return "observed_likelihood";
        case Method::Mcem: return "mcem";
        case Method::HalfAssayLimit: return "half_assay_limit";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "extrapolation" || name == "extrap") return Method::Extrapolation;
    if (name == "observed_likelihood" || name == "ol" || name == "numerical_optimization") {
        return Method::ObservedLikelihood;
    }
    if (name == "mcem") return Method::Mcem;
    if (name == "half_assay_limit" || name == "al2" || name == "half") return Method::HalfAssayLimit;
    throw Error(ErrorKind::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

void MethodSpec::validate() const {
    if (J_predict < 1) throw Error(ErrorKind::InvalidArgument, "J_predict must be at least 1");
    if (prediction_draws == PredictionDraws::Posterior && kind != Method::Mcem) {
        throw Error(ErrorKind::InvalidArgument, "posterior prediction draws are only available for mcem");
    }
    if (kind == Method::Mcem) mcem.validate();
}

double predict_outcome_a0(const Eigen::VectorXd& beta, double m, std::span<const double> c) {
    if (static_cast<std::size_t>(beta.size()) != c.size() + 2) {
        throw Error(ErrorKind::InvalidArgument, "beta length must be covariates + 2");
    }
    double eta = beta(0) + beta(1) * m;
    for (std::size_t j = 0; j < c.size(); ++j) eta += beta(static_cast<Eigen::Index>(j) + 2) * c[j];
    return expit(eta);
}

double half_limit_value(double assay_limit, HalfLimitScale scale) {
    return scale == HalfLimitScale::Natural ? assay_limit - kLog10Of2 : 0.5 * assay_limit;
}

FittedModels fit_models(const Dataset& data, Design design, const MethodSpec& spec) {
    spec.validate();
    FittedModels out;
    if (design == Design::TwoArm) {
        const Dataset untreated = data.arm(0);
        const Dataset treated = data.arm(1);
        if (untreated.size() == 0) throw Error(ErrorKind::EmptyArm, "no untreated rows");
        if (treated.size() == 0) throw Error(ErrorKind::EmptyArm, "no treated rows");
        fit_untreated(ArmSample::from_dataset(untreated), spec, out);
        out.treated_mediator = fit_censored_normal(ArmSample::from_dataset(treated));
        if (!out.treated_mediator->converged) {
            out.diagnostics.notes.emplace_back("treated-arm mediator fit did not converge");
        }
    } else {
        fit_untreated(ArmSample::from_dataset(untreated_rows(data)), spec, out);
    }
    return out;
}

std::vector<EffectEstimate> estimate_shift_indirect(const Dataset& data, std::span<const double> xis,
                                                    const MethodSpec& spec) {
    for (double xi : xis) {
        if (!(xi >= 0.0)) throw Error(ErrorKind::InvalidArgument, "shift xi must be non-negative");
    }
    const Dataset untreated = untreated_rows(data);
    const ArmSample sample = ArmSample::from_dataset(untreated);
    FittedModels models = fit_models(untreated, Design::Shift, spec);
    const bool posterior = use_posterior(spec);
    const PredictionInputs in =
        prediction_inputs(sample, models.theta.alpha, models.theta.sigma2_m, posterior ? &models.posterior_samples : nullptr,
                          spec.J_predict, derive_seed(spec.seed, {kPredictStream}));
    const double observed_mean = sample.y.mean();

    std::vector<EffectEstimate> out;
    out.reserve(xis.size());
    for (double xi : xis) {
        EffectEstimate e;
        e.indirect = mean_prediction(in, models.theta.beta, xi) - observed_mean;
        e.method = spec;
        e.xi = xi;
        e.theta_hat = models.theta;
        e.diagnostics = models.diagnostics;
        out.push_back(std::move(e));
    }
    return out;
}

EffectEstimate estimate_shift_indirect(const Dataset& data, double xi, const MethodSpec& spec) {
    const double xis[] = {xi};
    return estimate_shift_indirect(data, xis, spec).front();
}

EffectEstimate estimate_two_arm(const Dataset& data, const MethodSpec& spec) {
    FittedModels models = fit_models(data, Design::TwoArm, spec);
    const ArmSample treated = ArmSample::from_dataset(data.arm(1));
    const ArmSample untreated = ArmSample::from_dataset(data.arm(0));
    const CensoredNormalFit& med = *models.treated_mediator;
    // Posterior draws belong to untreated rows; treated censored rows always
    // draw from the treated-arm mediator fit.
    const PredictionInputs in = prediction_inputs(treated, med.alpha, med.sigma2_m, nullptr, spec.J_predict,
                                                  derive_seed(spec.seed, {kPredictStream}));
    const double counterfactual = mean_prediction(in, models.theta.beta, 0.0);
    const double treated_mean = treated.y.mean();
    const double untreated_mean = untreated.y.mean();

    EffectEstimate e;
    e.indirect = counterfactual - untreated_mean;
    e.direct = treated_mean - counterfactual;
    e.method = spec;
    e.theta_hat = models.theta;
    e.diagnostics = models.diagnostics;
    return e;
}

}  // namespace censmed
