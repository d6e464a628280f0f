// Small dense real matrices with the matrix functions needed by the
// BCH oracle: exponential (scaling-and-squaring, Pade [13/13]) and
// principal logarithm (inverse scaling-and-squaring).

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace splitgen {

class Mat {
 public:
  Mat() = default;
  explicit Mat(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  static Mat identity(std::size_t n);

  std::size_t dim() const { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  std::span<const double> data() const { return a_; }
  std::span<double> data() { return a_; }

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(double x);

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, double x) { return a *= x; }
  friend Mat operator*(double x, Mat a) { return a *= x; }
  friend Mat operator*(const Mat& a, const Mat& b);

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

double one_norm(const Mat& a);
double frobenius_norm(const Mat& a);
double frobenius_dot(const Mat& a, const Mat& b);

Mat commutator(const Mat& a, const Mat& b);

// Solves A X = B by LU with partial pivoting. Throws std::runtime_error on
// a numerically singular pivot.
Mat solve(Mat a, Mat b);
Mat inverse(const Mat& a);

Mat expm(const Mat& a);

// Principal branch; valid for matrices with no eigenvalues on the closed
// negative real axis. Throws std::runtime_error when the square-root
// iteration fails to converge (input too far from the identity).
Mat logm(const Mat& a);

}  // namespace splitgen
