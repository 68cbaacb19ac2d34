#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "bergman/geometry.hpp"

namespace bergman {

/// Analytic polynomial sum_k c_k z^k. Trailing zero coefficients are trimmed,
/// so the zero polynomial has no coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> coefficients);
  Polynomial(std::initializer_list<Complex> coefficients);

  static Polynomial monomial(std::size_t power, Complex coefficient = 1.0);

  const std::vector<Complex>& coefficients() const noexcept { return coeffs_; }
  /// Coefficient of z^k (zero past the degree).
  Complex operator[](std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : Complex{}; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  Complex operator()(Complex z) const noexcept;
  Complex derivative_at(Complex z) const noexcept;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator*=(Complex c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator*(Polynomial a, Complex c) { return a *= c; }
  friend Polynomial operator*(Complex c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<Complex> coeffs_;
};

}  // namespace bergman
