#pragma once

// Dense complex matrix kernel. Everything operator-valued in the library is an
// Eigen dense matrix; the free functions below accept any Eigen expression.

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace chernoff {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  }
}

// Padé approximant r_m(A) of degree m in {3, 5, 7, 9, 13}. Coefficients from
// Higham, "The scaling and squaring method for the matrix exponential revisited".
template <typename Matrix>
Matrix pade_exp(const Matrix& a, int degree) {
  using Scalar = typename Matrix::Scalar;
  const Eigen::Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix u;
  Matrix v;
  switch (degree) {
    case 3: {
      const double b[] = {120.0, 60.0, 12.0, 1.0};
      u = a * (Scalar(b[3]) * a2 + Scalar(b[1]) * ident);
      v = Scalar(b[2]) * a2 + Scalar(b[0]) * ident;
      break;
    }
    case 5: {
      const double b[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
      const Matrix a4 = a2 * a2;
      u = a * (Scalar(b[5]) * a4 + Scalar(b[3]) * a2 + Scalar(b[1]) * ident);
      v = Scalar(b[4]) * a4 + Scalar(b[2]) * a2 + Scalar(b[0]) * ident;
      break;
    }
    case 7: {
      const double b[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                          25200.0,    1512.0,    56.0,      1.0};
      const Matrix a4 = a2 * a2;
      const Matrix a6 = a4 * a2;
      u = a * (Scalar(b[7]) * a6 + Scalar(b[5]) * a4 + Scalar(b[3]) * a2 + Scalar(b[1]) * ident);
      v = Scalar(b[6]) * a6 + Scalar(b[4]) * a4 + Scalar(b[2]) * a2 + Scalar(b[0]) * ident;
      break;
    }
    case 9: {
      const double b[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                          2162160.0,     110880.0,     3960.0,       90.0,        1.0};
      const Matrix a4 = a2 * a2;
      const Matrix a6 = a4 * a2;
      const Matrix a8 = a6 * a2;
      u = a * (Scalar(b[9]) * a8 + Scalar(b[7]) * a6 + Scalar(b[5]) * a4 + Scalar(b[3]) * a2 +
               Scalar(b[1]) * ident);
      v = Scalar(b[8]) * a8 + Scalar(b[6]) * a6 + Scalar(b[4]) * a4 + Scalar(b[2]) * a2 +
          Scalar(b[0]) * ident;
      break;
    }
    default: {
      const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                          1187353796428800.0,  129060195264000.0,   10559470521600.0,
                          670442572800.0,      33522128640.0,       1323241920.0,
                          40840800.0,          960960.0,            16380.0,
                          182.0,               1.0};
      const Matrix a4 = a2 * a2;
      const Matrix a6 = a4 * a2;
      const Matrix inner_u = a6 * (Scalar(b[13]) * a6 + Scalar(b[11]) * a4 + Scalar(b[9]) * a2);
      u = a * (inner_u + Scalar(b[7]) * a6 + Scalar(b[5]) * a4 + Scalar(b[3]) * a2 +
               Scalar(b[1]) * ident);
      const Matrix inner_v = a6 * (Scalar(b[12]) * a6 + Scalar(b[10]) * a4 + Scalar(b[8]) * a2);
      v = inner_v + Scalar(b[6]) * a6 + Scalar(b[4]) * a4 + Scalar(b[2]) * a2 +
          Scalar(b[0]) * ident;
      break;
    }
  }
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace detail

/// e^{tA} by scaling and squaring on a Padé approximant.
///
/// Relative accuracy is close to machine precision for ||tA|| <= 20. Larger
/// arguments are accepted but carry no accuracy guarantee.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> mat_exp(
    const Eigen::MatrixBase<Derived>& a, double t) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  detail::require_square(a, "mat_exp");
  if (!std::isfinite(t)) throw std::invalid_argument("mat_exp: t must be finite");

  Matrix scaled = (t * a).eval();
  const double norm1 = scaled.cwiseAbs().colwise().sum().maxCoeff();

  constexpr double theta[] = {1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
                              2.097847961257068e0};
  constexpr int degrees[] = {3, 5, 7, 9};
  for (int k = 0; k < 4; ++k) {
    if (norm1 <= theta[k]) return detail::pade_exp(scaled, degrees[k]);
  }

  constexpr double theta13 = 5.371920351148152;
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    scaled /= std::ldexp(1.0, squarings);
  }
  Matrix result = detail::pade_exp(scaled, 13);
  for (int k = 0; k < squarings; ++k) result = (result * result).eval();
  return result;
}

/// Largest singular value.
template <typename Derived>
double op_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0.0;
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::JacobiSVD<Matrix> svd(a.eval());
  return svd.singularValues()(0);
}

/// Sum of singular values (Schatten-1 norm).
template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& a) {
  detail::require_square(a, "trace_norm");
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::JacobiSVD<Matrix> svd(a.eval());
  return svd.singularValues().sum();
}

template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
      a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Column-stacking vectorization: [[a,b],[c,d]] -> (a, c, b, d).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> vectorize(
    const Eigen::MatrixBase<Derived>& x) {
  detail::require_square(x, "vectorize");
  const auto plain = x.eval();
  return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>>(
      plain.data(), plain.size());
}

/// Inverse of vectorize. The length must be a perfect square.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> devectorize(
    const Eigen::MatrixBase<Derived>& v) {
  if (v.cols() != 1) throw std::invalid_argument("devectorize: expected a column");
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.rows()))));
  if (d * d != v.rows() || d == 0) {
    throw std::invalid_argument("devectorize: length is not a perfect square");
  }
  const auto plain = v.eval();
  return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>>(
      plain.data(), d, d);
}

/// Superoperator of X -> P X Q under column stacking, i.e. Q^T (x) P.
template <typename DerivedP, typename DerivedQ>
ComplexMatrix superoperator(const Eigen::MatrixBase<DerivedP>& p,
                            const Eigen::MatrixBase<DerivedQ>& q) {
  return kron(q.transpose(), p);
}

template <typename DerivedA, typename DerivedB>
ComplexMatrix commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return a * b - b * a;
}

struct HermEig {
  Eigen::VectorXd eigenvalues;  // ascending
  ComplexMatrix eigenvectors;   // unitary, one eigenvector per column

  ComplexMatrix reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
  }
};

/// Eigendecomposition of a Hermitian matrix. Throws std::invalid_argument when
/// ||H - H^*|| exceeds 1e-10 ||H||.
HermEig herm_eig(const ComplexMatrix& h);

/// Largest eigenvalue of the Hermitian part (A + A^*)/2.
double numerical_abscissa(const ComplexMatrix& a);

/// Numerical range in the closed left half-plane, up to `tol`.
bool is_dissipative(const ComplexMatrix& a, double tol = 1e-10);

/// Relative Frobenius distance ||a - b|| / max(||b||, 1).
double relative_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace chernoff
