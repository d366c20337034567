#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sasaki/error.hpp"

namespace sasaki {

/// Dense rank-R array with every index running over 0..dim-1, row-major.
template <std::size_t Rank>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::size_t dim) : dim_(dim), data_(ipow(dim, Rank), 0.0) {}

  static constexpr std::size_t rank() noexcept { return Rank; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return data_.size(); }

  template <class... Idx>
  double& operator()(Idx... idx) {
    static_assert(sizeof...(Idx) == Rank);
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }

  template <class... Idx>
  double operator()(Idx... idx) const {
    static_assert(sizeof...(Idx) == Rank);
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Tensor& operator-=(const Tensor& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Tensor& operator+=(const Tensor& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor& operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }

 private:
  static constexpr std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= b;
    return r;
  }

  std::size_t offset(std::array<std::size_t, Rank> idx) const {
    std::size_t off = 0;
    for (std::size_t a = 0; a < Rank; ++a) off = off * dim_ + idx[a];
    return off;
  }

  std::size_t dim_ = 0;
  std::vector<double> data_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;

/// Full contraction Σ T_{i…}² of a rank-`rank` array with indices in 0..dim-1
/// (orthonormal-frame components).
inline double contract_norm_sq(std::span<const double> components, std::size_t rank, std::size_t dim) {
  std::size_t expected = 1;
  for (std::size_t i = 0; i < rank; ++i) expected *= dim;
  if (components.size() != expected)
    throw Error(ErrorKind::RankMismatch, "expected " + std::to_string(expected) + " components for rank " +
                                             std::to_string(rank) + ", got " + std::to_string(components.size()));
  double sum = 0.0;
  for (double c : components) sum += c * c;
  return sum;
}

template <std::size_t Rank>
double contract_norm_sq(const Tensor<Rank>& t) {
  return contract_norm_sq(t.data(), Rank, t.dim());
}

/// Σ A_{i…} B_{i…}.
template <std::size_t Rank>
double full_contraction(const Tensor<Rank>& a, const Tensor<Rank>& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::InconsistentDimensions, "contraction of tensors of different dim");
  double sum = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) sum += da[i] * db[i];
  return sum;
}

}  // namespace sasaki
