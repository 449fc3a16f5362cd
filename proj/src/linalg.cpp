#include "qhall/linalg.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <lapacke.h>

#include "qhall/error.hpp"

namespace qhall {

HermitianEigen hermitian_eigen(const cmat& h, bool want_vectors) {
  if (h.rows() != h.cols()) {
    throw invalid_argument("hermitian_eigen: matrix is not square");
  }
  const auto n = static_cast<lapack_int>(h.rows());
  HermitianEigen out;
  out.values.resize(n);
  if (n == 0) return out;

  // MRRR rather than divide and conquer: the latter routes through real GEMM,
  // which some OpenBLAS builds miscompute on AVX-512 hardware.
  cmat a = h;
  cmat z(want_vectors ? n : 1, want_vectors ? n : 1);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'A', 'U', n,
      reinterpret_cast<lapack_complex_double*>(a.data()), n, 0.0, 0.0, 0, 0,
      0.0, &found, out.values.data(),
      reinterpret_cast<lapack_complex_double*>(z.data()), z.rows(),
      support.data());
  if (info != 0 || found != n) {
    throw EigensolveFailure("zheevr returned info=" + std::to_string(info));
  }
  if (want_vectors) out.vectors = std::move(z);
  return out;
}

rvec hermitian_eigenvalues(const cmat& h) {
  return hermitian_eigen(h, false).values;
}

long count_eigenvalues_above(const cmat& h, real shift) {
  if (h.rows() != h.cols()) {
    throw invalid_argument("count_eigenvalues_above: matrix is not square");
  }
  const auto n = static_cast<lapack_int>(h.rows());
  if (n == 0) return 0;
  cmat a = h;
  a.diagonal().array() -= shift;
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zhetrf(
      LAPACK_COL_MAJOR, 'U', n, reinterpret_cast<lapack_complex_double*>(a.data()),
      n, ipiv.data());
  if (info < 0) {
    throw EigensolveFailure("zhetrf returned info=" + std::to_string(info));
  }
  // Sylvester: h - shift and the block diagonal D share their inertia.
  long above = 0;
  for (lapack_int k = 0; k < n;) {
    if (ipiv[k] > 0) {
      const real d = a(k, k).real();
      if (d == 0.0) throw EigensolveFailure("shift is an eigenvalue");
      if (d > 0.0) ++above;
      k += 1;
    } else {
      // 2x2 block in rows k-1, k with the upper storage; ipiv marks both rows.
      const real d11 = a(k, k).real();
      const real d22 = a(k + 1, k + 1).real();
      const real off = std::norm(a(k, k + 1));
      const real tr = d11 + d22;
      const real det = d11 * d22 - off;
      if (det == 0.0) throw EigensolveFailure("shift is an eigenvalue");
      if (det < 0.0) {
        above += 1;
      } else if (tr > 0.0) {
        above += 2;
      }
      k += 2;
    }
  }
  return above;
}

real hermiticity_defect(const cmat& h) {
  if (h.size() == 0) return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads <= 0) threads = default_threads();
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qhall
