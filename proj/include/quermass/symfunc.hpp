#pragma once

// Elementary symmetric functions of curvature vectors and the algebraic
// inequalities/identities built on them.

#include <initializer_list>
#include <span>
#include <vector>

namespace quermass {

/// Principal curvatures at a surface point. Non-empty and finite.
class CurvatureVector {
 public:
  explicit CurvatureVector(std::vector<double> values);
  CurvatureVector(std::initializer_list<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  operator std::span<const double>() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// Degree of a Garding cone, 1 <= k <= n.
class ConeLevel {
 public:
  ConeLevel(int k, std::size_t n);
  int value() const noexcept { return k_; }

 private:
  int k_;
};

/// sigma_m(lambda); 1 for m == 0, 0 for m > n.
///
/// Built with the incremental coefficient recurrence
///   e_j <- e_j + lambda_i * e_{j-1},
/// which costs O(n*m) and is exact on integer input up to rounding.
double elem_sym(std::span<const double> lambda, int m);

/// sigma_0..sigma_{max_m} in one pass.
std::vector<double> elem_sym_all(std::span<const double> lambda, int max_m);

/// d sigma_m / d lambda_i = sigma_{m-1}(lambda without entry i).
std::vector<double> elem_sym_gradient(std::span<const double> lambda, int m);

/// C_{n,k} = sigma_k(I) / sigma_{k-1}(I) = (n - k + 1) / k.
double cnk(int n, int k);

/// binom(n, k) as a double; zero outside 0 <= k <= n.
double binomial(int n, int k);

/// Cone membership. Strict: sigma_m > 0 for every 1 <= m <= k. Non-strict
/// (closure surrogate): sigma_m >= -cone_tol for every 1 <= m <= k.
bool in_gamma_k(std::span<const double> lambda, int k, bool strict,
                double cone_tol = 0.0);

/// Like in_gamma_k, with the non-strict slack for degree m taken as
/// rel_tol * max|lambda_i|^m.
bool in_gamma_k_scaled(std::span<const double> lambda, int k, bool strict,
                       double rel_tol = 1e-10);

/// sigma_{m-1,1}(lambda; lambda^2) = sum_i d sigma_m/d lambda_i * lambda_i^2,
/// the principal-frame polarization used in the sigma_m evolution law.
double polarized_sigma_square(std::span<const double> lambda, int m);

/// Newton gap  sigma_{k+1}(I)sigma_{k-1}(I)/sigma_k(I)^2
///           - sigma_{k+1}sigma_{k-1}/sigma_k^2.
/// Nonnegative for every real lambda. Throws NumericalError if sigma_k == 0.
double newton_maclaurin_check(std::span<const double> lambda, int k);

/// C~ sigma_k^{1+1/k} - sigma_{k+1} with the sharp MacLaurin constant
/// C~ = binom(n,k+1) / binom(n,k)^{(k+1)/k}. Requires lambda in Gamma_k.
double maclaurin_power_bound(std::span<const double> lambda, int k);

/// The sharp constant used by maclaurin_power_bound.
double maclaurin_constant(int n, int k);

}  // namespace quermass
