#include "quermass/symfunc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quermass/error.hpp"

namespace quermass {

CurvatureVector::CurvatureVector(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) {
    throw InvalidInput("CurvatureVector: need at least one entry");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw InvalidInput("CurvatureVector: non-finite entry");
    }
  }
}

CurvatureVector::CurvatureVector(std::initializer_list<double> values)
    : CurvatureVector(std::vector<double>(values)) {}

ConeLevel::ConeLevel(int k, std::size_t n) : k_(k) {
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw InvalidInput("ConeLevel: k=" + std::to_string(k) +
                       " outside [1, " + std::to_string(n) + "]");
  }
}

std::vector<double> elem_sym_all(std::span<const double> lambda, int max_m) {
  if (max_m < 0) {
    throw InvalidInput("elem_sym: negative degree");
  }
  std::vector<double> e(static_cast<std::size_t>(max_m) + 1, 0.0);
  e[0] = 1.0;
  const int n = static_cast<int>(lambda.size());
  for (int i = 0; i < n; ++i) {
    const int top = std::min(i + 1, max_m);
    for (int j = top; j >= 1; --j) {
      e[j] += lambda[i] * e[j - 1];
    }
  }
  return e;
}

double elem_sym(std::span<const double> lambda, int m) {
  if (m < 0) {
    throw InvalidInput("elem_sym: negative degree");
  }
  if (static_cast<std::size_t>(m) > lambda.size()) {
    return 0.0;
  }
  return elem_sym_all(lambda, m)[m];
}

std::vector<double> elem_sym_gradient(std::span<const double> lambda, int m) {
  const int n = static_cast<int>(lambda.size());
  if (m < 1 || m > n) {
    throw InvalidInput("elem_sym_gradient: need 1 <= m <= n");
  }
  std::vector<double> grad(lambda.size());
  std::vector<double> rest;
  rest.reserve(lambda.size());
  for (int i = 0; i < n; ++i) {
    rest.clear();
    for (int j = 0; j < n; ++j) {
      if (j != i) rest.push_back(lambda[j]);
    }
    grad[i] = elem_sym(rest, m - 1);
  }
  return grad;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) {
    b = b * (n - k + i) / i;
  }
  return std::round(b);
}

double cnk(int n, int k) {
  if (k < 1 || k > n) {
    throw InvalidInput("cnk: need 1 <= k <= n (got n=" + std::to_string(n) +
                       ", k=" + std::to_string(k) + ")");
  }
  return static_cast<double>(n - k + 1) / k;
}

bool in_gamma_k(std::span<const double> lambda, int k, bool strict,
                double cone_tol) {
  if (k < 1) return true;
  const auto e = elem_sym_all(lambda, k);
  for (int m = 1; m <= k; ++m) {
    if (strict ? !(e[m] > 0.0) : !(e[m] >= -cone_tol)) return false;
  }
  return true;
}

bool in_gamma_k_scaled(std::span<const double> lambda, int k, bool strict,
                       double rel_tol) {
  if (k < 1) return true;
  if (strict) return in_gamma_k(lambda, k, true);
  double scale = 0.0;
  for (double v : lambda) scale = std::max(scale, std::abs(v));
  const auto e = elem_sym_all(lambda, k);
  for (int m = 1; m <= k; ++m) {
    if (!(e[m] >= -rel_tol * std::pow(scale, m))) return false;
  }
  return true;
}

double polarized_sigma_square(std::span<const double> lambda, int m) {
  const auto grad = elem_sym_gradient(lambda, m);
  double acc = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    acc += grad[i] * lambda[i] * lambda[i];
  }
  return acc;
}

double newton_maclaurin_check(std::span<const double> lambda, int k) {
  const int n = static_cast<int>(lambda.size());
  if (k < 1 || k > n - 1) {
    throw InvalidInput("newton_maclaurin_check: need 1 <= k <= n-1");
  }
  const auto e = elem_sym_all(lambda, k + 1);
  if (e[k] == 0.0) {
    throw NumericalError("newton_maclaurin_check: sigma_k vanishes");
  }
  const double bk = binomial(n, k);
  const double at_identity = binomial(n, k + 1) * binomial(n, k - 1) / (bk * bk);
  return at_identity - e[k + 1] * e[k - 1] / (e[k] * e[k]);
}

double maclaurin_constant(int n, int k) {
  if (k < 1 || k > n) {
    throw InvalidInput("maclaurin_constant: need 1 <= k <= n");
  }
  return binomial(n, k + 1) /
         std::pow(binomial(n, k), static_cast<double>(k + 1) / k);
}

double maclaurin_power_bound(std::span<const double> lambda, int k) {
  const int n = static_cast<int>(lambda.size());
  if (!in_gamma_k(lambda, k, true)) {
    throw InvalidInput("maclaurin_power_bound: lambda not in Gamma_k");
  }
  const auto e = elem_sym_all(lambda, k + 1);
  const double sk = e[k];
  return maclaurin_constant(n, k) * sk * std::pow(sk, 1.0 / k) - e[k + 1];
}

}  // namespace quermass
