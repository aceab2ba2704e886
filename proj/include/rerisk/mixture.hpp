#pragma once

#include <Eigen/Core>

#include <vector>

namespace rerisk {

/// Univariate Gaussian mixture fitted by EM.
struct MixtureFit {
    int k = 0;
    Eigen::VectorXd weights;  ///< sum to 1
    Eigen::VectorXd means;
    Eigen::VectorXd sds;  ///< ascending
    double log_likelihood = 0.0;
    double bic = 0.0;  ///< -2 logL + (3k - 1) log n
    Eigen::Index n = 0;
    int iterations = 0;
    int restart = 0;  ///< index of the winning initialisation
    bool converged = true;
    bool sd_floor_hit = false;
};

struct EmOptions {
    /// Stop once |logL_t - logL_{t-1}| < tolerance * max(1, |logL_t|).
    double tolerance = 1e-8;
    int max_iterations = 2000;
    int restarts = 10;
    /// Iterations every initialisation runs before the best one is chosen
    /// and iterated to convergence.
    int screening_iterations = 20;
    /// Component sd floor, as a fraction of the sample sd.
    double sd_floor_fraction = 1e-4;
};

/// Parameters of one EM start or iterate.
struct MixtureParams {
    Eigen::VectorXd weights;
    Eigen::VectorXd means;
    Eigen::VectorXd sds;
};

/// Deterministic quantile-split starting points for a k-component fit.
///
/// Restarts 0..4 split the sorted distances from the median into nested
/// bands (the innermost band seeds the low-volatility component, the outer
/// tail fraction f in {5, 10, 20, 30, 45}% seeds the high-volatility ones);
/// restarts 5..9 split the sorted values into k contiguous quantile groups
/// with boundaries shifted by {0, +-10, +-20}% of a group width. Each group's
/// share, mean and sd give the starting weight, mean and sd.
[[nodiscard]] std::vector<MixtureParams> em_initialisations(const Eigen::VectorXd& x, int k, int restarts = 10);

/// Runs EM from `start`. When `trace` is non-null every iteration's
/// log-likelihood is appended (the first entry is the start's).
[[nodiscard]] MixtureFit run_em(const Eigen::VectorXd& x, const MixtureParams& start, const EmOptions& options,
                                int max_iterations, std::vector<double>* trace = nullptr);

/// Best k-component fit over the deterministic restarts: restarts are
/// screened, then continued in order of screened log-likelihood until one
/// converges without a component pinned at the sd floor. If every restart
/// collapses, the best collapsed fit is returned with sd_floor_hit set.
[[nodiscard]] MixtureFit fit_mixture(const Eigen::VectorXd& x, int k, const EmOptions& options = {});

/// Fits k = 1..k_max and returns the fit with the smallest BIC (ties go to
/// the smaller k). Collapsed fits (sd_floor_hit) are not eligible. Requires n >= 30 and k_max in {1, 2, 3}.
[[nodiscard]] MixtureFit fit_mixture_em(const Eigen::VectorXd& x, int k_max = 3, const EmOptions& options = {});

[[nodiscard]] double mixture_log_likelihood(const MixtureFit& m, const Eigen::VectorXd& x);
[[nodiscard]] double mixture_pdf(const MixtureFit& m, double x);
[[nodiscard]] double mixture_cdf(const MixtureFit& m, double x);
[[nodiscard]] double mixture_mean(const MixtureFit& m);

}  // namespace rerisk
