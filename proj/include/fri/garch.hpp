#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fri {

struct FitOptions {
  int max_iterations = 500;
  double tolerance = 1e-8;  // on the per-observation log-likelihood
  std::size_t min_observations = 250;
};

/// Gaussian QMLE of r_t = mu + e_t, s2_t = omega + alpha * e_{t-1}^2 + beta * s2_{t-1}.
/// Accepted fits always satisfy omega > 0, alpha, beta >= 0, alpha + beta < 1.
struct GarchFit {
  double mu = 0.0;
  double omega = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> cond_var;
  std::vector<double> std_resid;
  double loglik = 0.0;
  double initial_loglik = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Full Gaussian log-likelihood; s2_0 is the sample variance of the
/// residuals. Optionally writes the conditional variances.
double garch11_loglik(std::span<const double> returns, double mu, double omega, double alpha, double beta,
                      std::vector<double>* cond_var = nullptr);

/// mu is the sample mean; (omega, alpha, beta) are found by simplex search
/// over log(omega) and a logistic map of (alpha + beta, alpha share),
/// starting from alpha = 0.05, beta = 0.90 with variance targeting.
/// Throws std::invalid_argument for short, constant or non-finite input.
GarchFit fit_garch11(std::span<const double> returns, const FitOptions& opts = {});

/// DCC(1,1) correlation stage for two standardized residual series:
/// Q_t = (1-a-b) Qbar + a z_{t-1} z_{t-1}' + b Q_{t-1}, Qbar the sample
/// covariance of (zA, zB), rho_t = Q12 / sqrt(Q11 Q22).
struct DccFit {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> correlation;
  double loglik = 0.0;  // correlation part of the Gaussian log-likelihood
  double initial_loglik = 0.0;
  int iterations = 0;
  bool converged = false;
};

double dcc11_loglik(std::span<const double> za, std::span<const double> zb, double a, double b,
                    std::vector<double>* correlation = nullptr);

DccFit fit_dcc11(std::span<const double> za, std::span<const double> zb, const FitOptions& opts = {});

}  // namespace fri
