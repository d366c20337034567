#pragma once

// Truncated third-order Taylor jets in m variables.
//
// A Jet3 carries f, ∂f, ∂²f and ∂³f at a single point. Arithmetic follows the
// truncated Leibniz and Faà di Bruno rules, so every derivative channel is exact
// up to rounding as long as the inputs are.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace sasaki {

class Jet3 {
 public:
  Jet3() = default;

  explicit Jet3(std::size_t dim, double value = 0.0)
      : dim_(dim), value_(value), grad_(dim, 0.0), hess_(dim * dim, 0.0), third_(dim * dim * dim, 0.0) {}

  static Jet3 constant(std::size_t dim, double value) { return Jet3(dim, value); }

  /// The coordinate function x_i evaluated at `value`.
  static Jet3 variable(std::size_t dim, std::size_t index, double value) {
    Jet3 j(dim, value);
    j.grad_[index] = 1.0;
    return j;
  }

  std::size_t dim() const noexcept { return dim_; }

  double value() const noexcept { return value_; }
  double grad(std::size_t i) const { return grad_[i]; }
  double hess(std::size_t i, std::size_t j) const { return hess_[i * dim_ + j]; }
  double third(std::size_t i, std::size_t j, std::size_t k) const { return third_[(i * dim_ + j) * dim_ + k]; }

  void set_value(double v) noexcept { value_ = v; }
  void set_grad(std::size_t i, double v) { grad_[i] = v; }
  void set_hess(std::size_t i, std::size_t j, double v) {
    hess_[i * dim_ + j] = v;
    hess_[j * dim_ + i] = v;
  }
  /// Writes all six index permutations.
  void set_third(std::size_t i, std::size_t j, std::size_t k, double v) {
    third_[(i * dim_ + j) * dim_ + k] = v;
    third_[(i * dim_ + k) * dim_ + j] = v;
    third_[(j * dim_ + i) * dim_ + k] = v;
    third_[(j * dim_ + k) * dim_ + i] = v;
    third_[(k * dim_ + i) * dim_ + j] = v;
    third_[(k * dim_ + j) * dim_ + i] = v;
  }

  Jet3& operator+=(const Jet3& o) {
    assert(o.dim_ == dim_);
    value_ += o.value_;
    for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] += o.grad_[i];
    for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] += o.hess_[i];
    for (std::size_t i = 0; i < third_.size(); ++i) third_[i] += o.third_[i];
    return *this;
  }

  Jet3& operator-=(const Jet3& o) {
    assert(o.dim_ == dim_);
    value_ -= o.value_;
    for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] -= o.grad_[i];
    for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] -= o.hess_[i];
    for (std::size_t i = 0; i < third_.size(); ++i) third_[i] -= o.third_[i];
    return *this;
  }

  Jet3& operator*=(double s) {
    value_ *= s;
    for (auto& v : grad_) v *= s;
    for (auto& v : hess_) v *= s;
    for (auto& v : third_) v *= s;
    return *this;
  }

  Jet3& operator+=(double s) {
    value_ += s;
    return *this;
  }
  Jet3& operator-=(double s) {
    value_ -= s;
    return *this;
  }

  Jet3& operator*=(const Jet3& o) {
    *this = multiply(*this, o);
    return *this;
  }

  Jet3 operator-() const {
    Jet3 r = *this;
    r *= -1.0;
    return r;
  }

  /// h = f(u) given f and its first three derivatives at u.value().
  Jet3 compose(double f0, double f1, double f2, double f3) const {
    const std::size_t m = dim_;
    Jet3 r(m, f0);
    for (std::size_t i = 0; i < m; ++i) r.grad_[i] = f1 * grad_[i];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        r.hess_[i * m + j] = f2 * grad_[i] * grad_[j] + f1 * hess_[i * m + j];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k)
          r.third_[(i * m + j) * m + k] =
              f3 * grad_[i] * grad_[j] * grad_[k] +
              f2 * (hess_[i * m + j] * grad_[k] + hess_[i * m + k] * grad_[j] + hess_[j * m + k] * grad_[i]) +
              f1 * third_[(i * m + j) * m + k];
    return r;
  }

  static Jet3 multiply(const Jet3& a, const Jet3& b) {
    assert(a.dim_ == b.dim_);
    const std::size_t m = a.dim_;
    Jet3 r(m, a.value_ * b.value_);
    for (std::size_t i = 0; i < m; ++i) r.grad_[i] = a.grad_[i] * b.value_ + a.value_ * b.grad_[i];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        r.hess_[i * m + j] = a.hess_[i * m + j] * b.value_ + a.grad_[i] * b.grad_[j] + a.grad_[j] * b.grad_[i] +
                             a.value_ * b.hess_[i * m + j];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) {
          const std::size_t ijk = (i * m + j) * m + k;
          r.third_[ijk] = a.third_[ijk] * b.value_ + a.hess_[i * m + j] * b.grad_[k] +
                          a.hess_[i * m + k] * b.grad_[j] + a.hess_[j * m + k] * b.grad_[i] +
                          a.grad_[i] * b.hess_[j * m + k] + a.grad_[j] * b.hess_[i * m + k] +
                          a.grad_[k] * b.hess_[i * m + j] + a.value_ * b.third_[ijk];
        }
    return r;
  }

 private:
  std::size_t dim_ = 0;
  double value_ = 0.0;
  std::vector<double> grad_;
  std::vector<double> hess_;
  std::vector<double> third_;
};

inline Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
inline Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }
inline Jet3 operator*(const Jet3& a, const Jet3& b) { return Jet3::multiply(a, b); }
inline Jet3 operator+(Jet3 a, double s) { return a += s; }
inline Jet3 operator+(double s, Jet3 a) { return a += s; }
inline Jet3 operator-(Jet3 a, double s) { return a -= s; }
inline Jet3 operator-(double s, const Jet3& a) { return -a + s; }
inline Jet3 operator*(Jet3 a, double s) { return a *= s; }
inline Jet3 operator*(double s, Jet3 a) { return a *= s; }

inline Jet3 reciprocal(const Jet3& a) {
  const double v = a.value();
  const double r = 1.0 / v;
  return a.compose(r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

inline Jet3 operator/(const Jet3& a, const Jet3& b) { return a * reciprocal(b); }
inline Jet3 operator/(Jet3 a, double s) { return a *= (1.0 / s); }
inline Jet3 operator/(double s, const Jet3& a) { return reciprocal(a) * s; }

inline Jet3 sqrt(const Jet3& a) {
  const double s = std::sqrt(a.value());
  return a.compose(s, 0.5 / s, -0.25 / (s * s * s), 0.375 / (s * s * s * s * s));
}

inline Jet3 exp(const Jet3& a) {
  const double e = std::exp(a.value());
  return a.compose(e, e, e, e);
}

inline Jet3 log(const Jet3& a) {
  const double v = a.value();
  return a.compose(std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

inline Jet3 sin(const Jet3& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  return a.compose(s, c, -s, -c);
}

inline Jet3 cos(const Jet3& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  return a.compose(c, -s, -c, s);
}

/// a^p for real p (a > 0 unless p is a small non-negative integer).
inline Jet3 pow(const Jet3& a, double p) {
  const double v = a.value();
  return a.compose(std::pow(v, p), p * std::pow(v, p - 1.0), p * (p - 1.0) * std::pow(v, p - 2.0),
                   p * (p - 1.0) * (p - 2.0) * std::pow(v, p - 3.0));
}

}  // namespace sasaki
