#pragma once

// Ridge-penalized logistic regression by damped Newton ascent, the single
// numerical kernel behind pseudolikelihood fitting and scoring. Problems are
// expressed row-wise with sparse feature index/value pairs so joint
// (multi-site) fits stay cheap.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "netcg/graph.hpp"

namespace netcg {

inline double expit(double x) {
  if (x >= 0) {
    double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

// log(expit(x)) without overflow
inline double log_expit(double x) {
  if (x >= 0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

struct LogisticProblem {
  // row r: response y[r], features {(idx, value)}; an intercept must be
  // included explicitly as a feature when wanted. Optional row weights
  // (counts of collapsed duplicate rows); empty means all ones.
  int n_params = 0;
  std::vector<uint8_t> y;
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> weights;
  double ridge = 1e-4;       // applied to the per-row average log-likelihood
  double clamp = 15.0;       // |theta| bound, guards separated data
  double grad_tol = 1e-8;
  double obj_tol = 1e-10;
  int max_iter = 500;
};

struct LogisticFitResult {
  std::vector<double> theta;
  double loglik = 0.0;  // unpenalized total log-likelihood at theta
  int iterations = 0;
};

namespace detail {

// In-place Cholesky solve of A x = b for symmetric positive definite A
// (lower triangle of A is used).
inline bool cholesky_solve(std::vector<double>& A, int n, std::vector<double>& b) {
  for (int j = 0; j < n; ++j) {
    double d = A[size_t(j) * n + j];
    for (int k = 0; k < j; ++k) d -= A[size_t(j) * n + k] * A[size_t(j) * n + k];
    if (d <= 0) return false;
    d = std::sqrt(d);
    A[size_t(j) * n + j] = d;
    for (int i = j + 1; i < n; ++i) {
      double s = A[size_t(i) * n + j];
      for (int k = 0; k < j; ++k) s -= A[size_t(i) * n + k] * A[size_t(j) * n + k];
      A[size_t(i) * n + j] = s / d;
    }
  }
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= A[size_t(i) * n + k] * b[k];
    b[i] = s / A[size_t(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= A[size_t(k) * n + i] * b[k];
    b[i] = s / A[size_t(i) * n + i];
  }
  return true;
}

}  // namespace detail

// Maximizes (1/N) sum_r log p(y_r | x_r; theta) - ridge * |theta|^2.
// Returns the unpenalized total log-likelihood at the optimum.
inline LogisticFitResult logistic_fit(const LogisticProblem& prob,
                                      const std::vector<double>* warm_start = nullptr) {
  const int k = prob.n_params;
  const size_t N = prob.rows.size();
  if (N == 0) throw Error("logistic fit called with no rows");
  const bool weighted = !prob.weights.empty();
  if (weighted && prob.weights.size() != N)
    throw Error("logistic fit: weights/rows size mismatch");
  double wsum = 0.0;
  if (weighted)
    for (double w : prob.weights) wsum += w;
  else
    wsum = double(N);
  const double invN = 1.0 / wsum;

  std::vector<double> theta(k, 0.0);
  if (warm_start && int(warm_start->size()) == k) {
    theta = *warm_start;
    for (double& t : theta) t = std::clamp(t, -prob.clamp, prob.clamp);
  }

  std::vector<double> eta(N), grad(k), step(k), H(size_t(k) * k), cand(k);

  auto objective = [&](const std::vector<double>& th) {
    double obj = 0.0;
    for (size_t r = 0; r < N; ++r) {
      double z = 0.0;
      for (const auto& [j, x] : prob.rows[r]) z += th[j] * x;
      eta[r] = z;
      double ll = prob.y[r] ? log_expit(z) : log_expit(-z);
      obj += weighted ? prob.weights[r] * ll : ll;
    }
    double pen = 0.0;
    for (double t : th) pen += t * t;
    return obj * invN - prob.ridge * pen;
  };

  double obj = objective(theta);
  bool converged = false;
  int iter = 0;
  for (; iter < prob.max_iter && !converged; ++iter) {
    // eta holds the linear predictor at the current theta
    std::fill(grad.begin(), grad.end(), 0.0);
    std::fill(H.begin(), H.end(), 0.0);
    for (size_t r = 0; r < N; ++r) {
      double mu = expit(eta[r]);
      double rw = weighted ? prob.weights[r] : 1.0;
      double resid = (double(prob.y[r]) - mu) * rw;
      double w = mu * (1.0 - mu) * rw;
      const auto& feats = prob.rows[r];
      for (const auto& [j, x] : feats) {
        grad[j] += resid * x;
        for (const auto& [j2, x2] : feats)
          if (j2 <= j) H[size_t(j) * k + j2] += w * x * x2;
      }
    }
    double gmax = 0.0;
    for (int j = 0; j < k; ++j) {
      grad[j] = grad[j] * invN - 2.0 * prob.ridge * theta[j];
      gmax = std::max(gmax, std::fabs(grad[j]));
    }
    if (gmax <= prob.grad_tol) {
      converged = true;
      break;
    }

    for (int j = 0; j < k; ++j) {
      for (int j2 = 0; j2 <= j; ++j2) H[size_t(j) * k + j2] *= invN;
      H[size_t(j) * k + j] += 2.0 * prob.ridge + 1e-12;
    }
    step = grad;
    std::vector<double> Hc = H;
    if (!detail::cholesky_solve(Hc, k, step)) step = grad;

    double alpha = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 50 && !improved; ++ls) {
      for (int j = 0; j < k; ++j)
        cand[j] = std::clamp(theta[j] + alpha * step[j], -prob.clamp, prob.clamp);
      double cobj = objective(cand);
      if (cobj >= obj) {
        double rel = (cobj - obj) / (std::fabs(obj) + 1e-12);
        theta = cand;
        if (rel <= prob.obj_tol) converged = true;
        obj = cobj;
        improved = true;
      } else {
        alpha *= 0.5;
      }
    }
    if (!improved) {
      // no ascent direction left at float precision: treat as converged
      converged = true;
      objective(theta);  // restore eta for the final log-likelihood pass
    }
  }
  if (!converged)
    throw Error("pseudolikelihood optimizer failed to converge within " +
                std::to_string(prob.max_iter) +
                " iterations (grad tol 1e-8, relative objective tol 1e-10)");

  LogisticFitResult res;
  res.theta = std::move(theta);
  res.iterations = iter;
  double ll = 0.0;
  for (size_t r = 0; r < N; ++r) {
    double z = 0.0;
    for (const auto& [j, x] : prob.rows[r]) z += res.theta[j] * x;
    double l = prob.y[r] ? log_expit(z) : log_expit(-z);
    ll += weighted ? prob.weights[r] * l : l;
  }
  res.loglik = ll;
  return res;
}

}  // namespace netcg
