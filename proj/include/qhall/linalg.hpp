#pragma once

#include <complex>
#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace qhall {

using real = double;
using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;

inline constexpr real two_pi = 6.283185307179586476925286766559;

struct HermitianEigen {
  rvec values;   // ascending
  cmat vectors;  // columns; empty when only values were requested
};

/// Dense Hermitian eigensolve (LAPACK zheevr). Only the upper triangle of
/// `h` is read. Throws EigensolveFailure when the solver reports an error.
HermitianEigen hermitian_eigen(const cmat& h, bool want_vectors = true);

/// Eigenvalues only, ascending.
rvec hermitian_eigenvalues(const cmat& h);

/// Number of eigenvalues of Hermitian `h` strictly above `shift`, from the
/// inertia of a Bunch-Kaufman factorization of h - shift (LAPACK zhetrf).
/// Throws EigensolveFailure when h - shift is singular.
long count_eigenvalues_above(const cmat& h, real shift);

/// max |h - h^*| over all entries.
real hermiticity_defect(const cmat& h);

/// Runs `body(i)` for i in [0, n) on up to `threads` workers. Indices are
/// split into contiguous static chunks, so callers writing into slot i of a
/// pre-sized buffer get results independent of the worker count.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body);

/// Worker count used when a caller passes threads <= 0.
int default_threads();

}  // namespace qhall
