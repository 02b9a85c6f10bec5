#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace mkdv {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

/// Dense 2x2 complex matrix, row-major.
struct Mat2 {
  std::array<cplx, 4> e{};

  constexpr Mat2() = default;
  constexpr Mat2(cplx a11, cplx a12, cplx a21, cplx a22) : e{a11, a12, a21, a22} {}

  constexpr cplx& operator()(int i, int j) { return e[static_cast<std::size_t>(2 * i + j)]; }
  constexpr const cplx& operator()(int i, int j) const {
    return e[static_cast<std::size_t>(2 * i + j)];
  }

  // 1-based entry access, matching the usual (m)_{21} notation.
  constexpr cplx entry(int row, int col) const { return (*this)(row - 1, col - 1); }

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 zero() { return {}; }
  static constexpr Mat2 sigma1() { return {0.0, 1.0, 1.0, 0.0}; }
  static constexpr Mat2 sigma2() { return {0.0, -kI, kI, 0.0}; }
  static constexpr Mat2 sigma3() { return {1.0, 0.0, 0.0, -1.0}; }

  Mat2& operator+=(const Mat2& o) {
    for (std::size_t i = 0; i < 4; ++i) e[i] += o.e[i];
    return *this;
  }
  Mat2& operator-=(const Mat2& o) {
    for (std::size_t i = 0; i < 4; ++i) e[i] -= o.e[i];
    return *this;
  }
  Mat2& operator*=(cplx s) {
    for (auto& x : e) x *= s;
    return *this;
  }

  friend Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
  friend Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
  friend Mat2 operator*(Mat2 a, cplx s) { return a *= s; }
  friend Mat2 operator*(cplx s, Mat2 a) { return a *= s; }
  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
            a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)};
  }

  /// Largest entry modulus.
  double max_abs() const {
    double m = 0.0;
    for (const auto& x : e) m = std::max(m, std::abs(x));
    return m;
  }
};

inline double max_abs_diff(const Mat2& a, const Mat2& b) { return (a - b).max_abs(); }

} // namespace mkdv
