#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "censmed/censored_normal.hpp"
#include "censmed/mcem.hpp"
#include "censmed/observed_likelihood.hpp"
#include "censmed/types.hpp"

namespace censmed {

enum class Method { Extrapolation, ObservedLikelihood, Mcem, HalfAssayLimit };

std::string_view to_string(Method method);
/// Accepts the canonical names plus short aliases (extrap, ol, mcem, al2).
Method parse_method(std::string_view name);
inline constexpr Method kAllMethods[] = {Method::Extrapolation, Method::ObservedLikelihood, Method::Mcem,
                                         Method::HalfAssayLimit};

/// Scale on which "half the assay limit" is taken. Natural: the limit is
/// halved before the log10 transform, so the imputed value is AL - log10(2).
/// Log: the log10-scale value itself is halved.
enum class HalfLimitScale { Natural, Log };

/// Which distribution feeds the prediction step for censored mediators.
/// Auto: retained posterior draws for MCEM, truncated f(M | C) otherwise.
enum class PredictionDraws { Auto, Truncated, Posterior };

struct MethodSpec {
    Method kind = Method::ObservedLikelihood;
    McemConfig mcem{};
    int J_predict = 100;
    std::uint64_t seed = 0;
    HalfLimitScale half_limit_scale = HalfLimitScale::Natural;
    PredictionDraws prediction_draws = PredictionDraws::Auto;
    ObsLikOptions obs_lik{};

    void validate() const;
};

enum class Design { TwoArm, Shift };

struct Diagnostics {
    bool converged = true;
    int n_iter = 0;
    bool separation = false;
    std::vector<std::string> notes;
};

struct FittedModels {
    Theta theta;
    Diagnostics diagnostics;
    /// MCEM only: posterior draws per censored untreated row, in row order.
    std::vector<std::vector<double>> posterior_samples;
    /// Two-arm only: censored-normal fit of M | A = 1, C.
    std::optional<CensoredNormalFit> treated_mediator;
};

struct EffectEstimate {
    double indirect = 0.0;
    /// Absent in shift mode, which has no treated-arm outcomes.
    std::optional<double> direct;
    MethodSpec method;
    std::optional<double> xi;
    Theta theta_hat;
    Diagnostics diagnostics;
};

/// expit(b0 + b1 m + b2'c); `c` excludes the intercept.
double predict_outcome_a0(const Eigen::VectorXd& beta, double m, std::span<const double> c);

/// Imputed modeling-scale value for censored rows under HalfAssayLimit.
double half_limit_value(double assay_limit, HalfLimitScale scale);

/// Fits the untreated-arm joint model by the chosen method and, in two-arm
/// mode, the treated-arm censored-normal mediator model. In shift mode any
/// treated rows are ignored. Throws EmptyArm.
FittedModels fit_models(const Dataset& data, Design design, const MethodSpec& spec);

/// Indirect effect of a hypothetical treatment that shifts the mediator down
/// by xi, from untreated data only.
EffectEstimate estimate_shift_indirect(const Dataset& data, double xi, const MethodSpec& spec);

/// One fit, evaluated at several shifts. The prediction draws are shared
/// across shifts.
std::vector<EffectEstimate> estimate_shift_indirect(const Dataset& data, std::span<const double> xis,
                                                    const MethodSpec& spec);

/// Organic indirect and direct effects relative to a = 0 from both arms.
EffectEstimate estimate_two_arm(const Dataset& data, const MethodSpec& spec);

}  // namespace censmed
