#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A Taylor value holds the coefficients c_alpha of
//   f(p + d) = sum_{|alpha| <= order} c_alpha d^alpha
// for a fixed expansion point p. Arithmetic propagates the expansion exactly
// (forward-mode automatic differentiation of arbitrary order), so any smooth
// expression written generically over the scalar type yields all of its
// partial derivatives up to the requested order.
//
// Each value carries a "valid order": differentiation lowers it by one and
// binary operations take the minimum of their operands. Values built from a
// plain double are constants, valid to every order.

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace moebius_lab {

/// Monomial layout shared by all Taylor values with the same
/// (variable count, maximum order). Monomials are graded, so every
/// degree-d truncation is a prefix of the coefficient array.
class TaylorSpace {
 public:
  static std::shared_ptr<const TaylorSpace> get(int nvars, int max_order);

  int nvars() const { return nvars_; }
  int max_order() const { return max_order_; }
  std::size_t size() const { return degree_.size(); }
  /// Number of monomials of total degree <= d.
  std::size_t prefix(int d) const;
  int degree(std::size_t i) const { return degree_[i]; }
  std::span<const int> exponent(std::size_t i) const;
  /// Index of exponent(i) + e_var, or -1 when the degree overflows.
  int raise(std::size_t i, int var) const { return raise_[i * nvars_ + var]; }
  /// Index of exponent(i) + exponent(j); caller guarantees degrees fit.
  int product(std::size_t i, std::size_t j) const { return product_[i * size() + j]; }
  /// Index of a multi-index given as per-variable exponents, -1 if too high.
  int index_of(std::span<const int> alpha) const;

  TaylorSpace(int nvars, int max_order);

 private:
  int nvars_;
  int max_order_;
  std::vector<int> exps_;  // flattened, nvars_ per monomial
  std::vector<int> degree_;
  std::vector<std::size_t> prefix_;
  std::vector<int> raise_;
  std::vector<int> product_;
};

class Taylor {
 public:
  static constexpr int kConstantOrder = std::numeric_limits<int>::max();

  Taylor() : Taylor(0.0) {}
  Taylor(double value);  // NOLINT: implicit promotion from constants is intended
  Taylor(std::shared_ptr<const TaylorSpace> space, int order);

  /// The coordinate function p_var + d_var.
  static Taylor variable(std::shared_ptr<const TaylorSpace> space, int var, double at);

  bool is_constant() const { return !space_; }
  const std::shared_ptr<const TaylorSpace>& space() const { return space_; }
  int order() const { return order_; }
  double value() const { return coeffs_[0]; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  /// Partial derivative in variable `var` (valid order drops by one).
  Taylor partial(int var) const;
  /// The mixed partial derivative d^alpha f evaluated at the expansion point.
  double derivative(std::span<const int> alpha) const;

  /// Truncates to a lower valid order (no-op if already lower).
  Taylor truncated(int order) const;

  Taylor& operator+=(const Taylor& o);
  Taylor& operator-=(const Taylor& o);
  Taylor& operator*=(const Taylor& o);
  Taylor& operator/=(const Taylor& o);
  Taylor& operator*=(double s);
  Taylor& operator+=(double s);

  Taylor operator-() const;

 private:
  friend Taylor compose(const Taylor& a, std::span<const double> scaled_derivs);
  friend Taylor operator*(const Taylor& a, const Taylor& b);

  std::size_t active_size() const;

  std::shared_ptr<const TaylorSpace> space_;
  int order_ = kConstantOrder;
  std::vector<double> coeffs_;
};

Taylor operator+(Taylor a, const Taylor& b);
Taylor operator-(Taylor a, const Taylor& b);
Taylor operator*(const Taylor& a, const Taylor& b);
Taylor operator/(const Taylor& a, const Taylor& b);
Taylor operator+(Taylor a, double b);
Taylor operator+(double a, Taylor b);
Taylor operator-(Taylor a, double b);
Taylor operator-(double a, const Taylor& b);
Taylor operator*(Taylor a, double b);
Taylor operator*(double a, Taylor b);
Taylor operator/(Taylor a, double b);
Taylor operator/(double a, const Taylor& b);

/// f(a) given f^(k)(a0)/k! for k = 0..K (Horner in the nilpotent part).
Taylor compose(const Taylor& a, std::span<const double> scaled_derivs);

Taylor sqrt(const Taylor& a);
Taylor exp(const Taylor& a);
Taylor log(const Taylor& a);
Taylor sin(const Taylor& a);
Taylor cos(const Taylor& a);
Taylor sinh(const Taylor& a);
Taylor cosh(const Taylor& a);
Taylor pow(const Taylor& a, double exponent);
Taylor inverse(const Taylor& a);

inline double value_of(double x) { return x; }
inline double value_of(const Taylor& x) { return x.value(); }

}  // namespace moebius_lab
