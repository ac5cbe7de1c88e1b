#include "fri/garch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fri/optimize.hpp"

namespace fri {

namespace {

constexpr double kMaxPersistence = 1.0 - 1e-10;
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// (persistence, share) -> (first, second) with first + second = persistence < 1.
std::pair<double, double> split_persistence(double u_persistence, double u_share) {
  const double p = std::min(logistic(u_persistence), kMaxPersistence);
  const double s = logistic(u_share);
  return {p * s, p * (1.0 - s)};
}

void check_series(std::span<const double> x, std::size_t min_obs, const char* what) {
  if (x.size() < min_obs)
    throw std::invalid_argument(std::string(what) + ": need at least " + std::to_string(min_obs) +
                                " observations, got " + std::to_string(x.size()));
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": series contains non-finite values");
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); }))
    throw std::invalid_argument(std::string(what) + ": series is constant");
}

// Runs the simplex, then restarts once from its optimum with a smaller step
// so a collapsed simplex is not mistaken for convergence.
SimplexResult minimise_with_restart(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                                    const FitOptions& opts) {
  SimplexOptions so;
  so.max_iterations = opts.max_iterations;
  so.f_tolerance = opts.tolerance;
  so.initial_step = 0.5;
  SimplexResult first = nelder_mead(f, std::move(x0), so);
  so.initial_step = 0.1;
  SimplexResult second = nelder_mead(f, first.x, so);
  second.initial_value = first.initial_value;
  second.iterations += first.iterations;
  second.converged = first.converged && second.converged;
  return second;
}

}  // namespace

double garch11_loglik(std::span<const double> returns, double mu, double omega, double alpha, double beta,
                      std::vector<double>* cond_var) {
  const std::size_t n = returns.size();
  double s2 = 0.0;
  for (double r : returns) s2 += (r - mu) * (r - mu);
  s2 /= static_cast<double>(n);
  if (cond_var) cond_var->resize(n);

  double ll = 0.0;
  double prev_e2 = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0) s2 = omega + alpha * prev_e2 + beta * s2;
    if (!(s2 > 0.0)) return -std::numeric_limits<double>::infinity();
    const double e = returns[t] - mu;
    ll -= 0.5 * (kLog2Pi + std::log(s2) + e * e / s2);
    prev_e2 = e * e;
    if (cond_var) (*cond_var)[t] = s2;
  }
  return ll;
}

GarchFit fit_garch11(std::span<const double> returns, const FitOptions& opts) {
  check_series(returns, opts.min_observations, "fit_garch11");
  const double n = static_cast<double>(returns.size());

  GarchFit fit;
  for (double r : returns) fit.mu += r;
  fit.mu /= n;
  double var = 0.0;
  for (double r : returns) var += (r - fit.mu) * (r - fit.mu);
  var /= n;
  const double scale = std::sqrt(var);

  // Estimate on unit-variance residuals; omega and the likelihood are mapped back afterwards.
  std::vector<double> x(returns.size());
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = (returns[t] - fit.mu) / scale;

  auto objective = [&](std::span<const double> u) {
    const auto [alpha, beta] = split_persistence(u[1], u[2]);
    return -garch11_loglik(x, 0.0, std::exp(u[0]), alpha, beta) / n;
  };
  const double alpha0 = 0.05, beta0 = 0.90;
  std::vector<double> u0 = {std::log(1.0 - alpha0 - beta0), logit(alpha0 + beta0), logit(alpha0 / (alpha0 + beta0))};
  const SimplexResult res = minimise_with_restart(objective, u0, opts);

  const auto [alpha, beta] = split_persistence(res.x[1], res.x[2]);
  fit.alpha = alpha;
  fit.beta = beta;
  fit.omega = std::exp(res.x[0]) * var;
  fit.iterations = res.iterations;
  fit.loglik = garch11_loglik(returns, fit.mu, fit.omega, fit.alpha, fit.beta, &fit.cond_var);
  fit.initial_loglik = garch11_loglik(returns, fit.mu, (1.0 - alpha0 - beta0) * var, alpha0, beta0);
  fit.std_resid.resize(returns.size());
  for (std::size_t t = 0; t < returns.size(); ++t)
    fit.std_resid[t] = (returns[t] - fit.mu) / std::sqrt(fit.cond_var[t]);
  fit.converged = res.converged && std::isfinite(fit.loglik) && fit.omega > 0.0 && fit.alpha >= 0.0 &&
                  fit.beta >= 0.0 && fit.alpha + fit.beta < 1.0;
  return fit;
}

double dcc11_loglik(std::span<const double> za, std::span<const double> zb, double a, double b,
                    std::vector<double>* correlation) {
  const std::size_t n = za.size();
  const double dn = static_cast<double>(n);
  double ma = 0.0, mb = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    ma += za[t];
    mb += zb[t];
  }
  ma /= dn;
  mb /= dn;
  double q11 = 0.0, q22 = 0.0, q12 = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    q11 += (za[t] - ma) * (za[t] - ma);
    q22 += (zb[t] - mb) * (zb[t] - mb);
    q12 += (za[t] - ma) * (zb[t] - mb);
  }
  const double bar11 = q11 / dn, bar22 = q22 / dn, bar12 = q12 / dn;
  q11 = bar11;
  q22 = bar22;
  q12 = bar12;
  if (correlation) correlation->resize(n);

  const double c = 1.0 - a - b;
  double ll = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0) {
      q11 = c * bar11 + a * za[t - 1] * za[t - 1] + b * q11;
      q22 = c * bar22 + a * zb[t - 1] * zb[t - 1] + b * q22;
      q12 = c * bar12 + a * za[t - 1] * zb[t - 1] + b * q12;
    }
    const double rho = q12 / std::sqrt(q11 * q22);
    const double one_m = 1.0 - rho * rho;
    if (!(one_m > 0.0) || !std::isfinite(rho)) return -std::numeric_limits<double>::infinity();
    const double x = za[t], y = zb[t];
    ll -= 0.5 * (std::log(one_m) + (x * x + y * y - 2.0 * rho * x * y) / one_m - (x * x + y * y));
    if (correlation) (*correlation)[t] = rho;
  }
  return ll;
}

DccFit fit_dcc11(std::span<const double> za, std::span<const double> zb, const FitOptions& opts) {
  if (za.size() != zb.size()) throw std::invalid_argument("fit_dcc11: residual series differ in length");
  check_series(za, opts.min_observations, "fit_dcc11");
  check_series(zb, opts.min_observations, "fit_dcc11");
  const double n = static_cast<double>(za.size());

  auto objective = [&](std::span<const double> u) {
    const auto [a, b] = split_persistence(u[0], u[1]);
    return -dcc11_loglik(za, zb, a, b) / n;
  };
  const double a0 = 0.05, b0 = 0.90;
  const SimplexResult res = minimise_with_restart(objective, {logit(a0 + b0), logit(a0 / (a0 + b0))}, opts);

  DccFit fit;
  const auto [a, b] = split_persistence(res.x[0], res.x[1]);
  fit.a = a;
  fit.b = b;
  fit.iterations = res.iterations;
  fit.initial_loglik = dcc11_loglik(za, zb, a0, b0);
  fit.loglik = dcc11_loglik(za, zb, a, b, &fit.correlation);
  const bool in_range = std::all_of(fit.correlation.begin(), fit.correlation.end(),
                                    [](double r) { return r > -1.0 && r < 1.0; });
  fit.converged = res.converged && std::isfinite(fit.loglik) && a >= 0.0 && b >= 0.0 && a + b < 1.0 && in_range;
  return fit;
}

}  // namespace fri
