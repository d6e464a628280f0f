#include "splitgen/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splitgen {

Mat Mat::identity(std::size_t n) {
  Mat m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat& Mat::operator+=(const Mat& o) {
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

Mat& Mat::operator*=(double x) {
  for (double& v : a_) v *= x;
  return *this;
}

Mat operator*(const Mat& a, const Mat& b) {
  const std::size_t n = a.dim();
  Mat c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

double one_norm(const Mat& a) {
  const std::size_t n = a.dim();
  double best = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += std::abs(a(i, j));
    best = std::max(best, col);
  }
  return best;
}

double frobenius_norm(const Mat& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

double frobenius_dot(const Mat& a, const Mat& b) {
  double s = 0.0;
  auto da = a.data(), db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) s += da[k] * db[k];
  return s;
}

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

Mat solve(Mat a, Mat b) {
  const std::size_t n = a.dim();
  // LU with partial pivoting, applied to the augmented right-hand side.
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < 1e-300)
      throw std::runtime_error("solve: singular matrix");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(col, j), a(piv, j));
        std::swap(b(col, j), b(piv, j));
      }
    }
    const double d = a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / d;
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      for (std::size_t j = 0; j < n; ++j) b(r, j) -= f * b(col, j);
    }
  }
  Mat x(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = n; i-- > 0;) {
      double s = b(i, j);
      for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * x(k, j);
      x(i, j) = s / a(i, i);
    }
  }
  return x;
}

Mat inverse(const Mat& a) { return solve(a, Mat::identity(a.dim())); }

Mat expm(const Mat& a) {
  // Scaling and squaring with the [13/13] Pade approximant.
  static constexpr double b[] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  static constexpr double theta13 = 5.371920351148152;

  const std::size_t n = a.dim();
  const double nrm = one_norm(a);
  int s = 0;
  Mat as = a;
  if (nrm > theta13) {
    s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    as *= std::ldexp(1.0, -s);
  }

  const Mat id = Mat::identity(n);
  const Mat a2 = as * as;
  const Mat a4 = a2 * a2;
  const Mat a6 = a2 * a4;

  Mat u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
          b[3] * a2 + b[1] * id;
  u = as * u;
  Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
          b[2] * a2 + b[0] * id;

  Mat r = solve(v - u, v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

namespace {

// Denman-Beavers iteration for the principal square root.
Mat sqrtm(const Mat& a) {
  const std::size_t n = a.dim();
  Mat x = a;
  Mat y = Mat::identity(n);
  for (int it = 0; it < 60; ++it) {
    const Mat xi = inverse(x);
    const Mat yi = inverse(y);
    Mat xn = 0.5 * (x + yi);
    Mat yn = 0.5 * (y + xi);
    const double delta = one_norm(xn - x);
    x = std::move(xn);
    y = std::move(yn);
    if (delta <= 1e-15 * std::max(1.0, one_norm(x))) return x;
  }
  throw std::runtime_error("logm: square-root iteration did not converge");
}

}  // namespace

Mat logm(const Mat& a) {
  const std::size_t n = a.dim();
  const Mat id = Mat::identity(n);

  Mat y = a;
  int k = 0;
  while (one_norm(y - id) > 0.25) {
    if (++k > 40)
      throw std::runtime_error("logm: inverse scaling did not reach the identity");
    y = sqrtm(y);
  }

  // log(I+X) = sum_i w_i X (I + x_i X)^{-1}, the [8/8] Pade approximant
  // realized by 8-point Gauss-Legendre quadrature on [0,1].
  static constexpr double gl_x[] = {0.18343464249564980, 0.52553240991632899,
                                    0.79666647741362674, 0.96028985649753623};
  static constexpr double gl_w[] = {0.36268378337836198, 0.31370664587788729,
                                    0.22238103445337447, 0.10122853629037626};

  const Mat x = y - id;
  Mat acc(n);
  for (int i = 0; i < 4; ++i) {
    for (double sgn : {-1.0, 1.0}) {
      const double node = 0.5 * (1.0 + sgn * gl_x[i]);
      const double w = 0.5 * gl_w[i];
      acc += w * solve(id + node * x, x);
    }
  }
  acc *= std::ldexp(1.0, k);
  return acc;
}

}  // namespace splitgen
