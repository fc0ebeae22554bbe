#ifndef TVVAR_TESTS_HELPERS_HPP_
#define TVVAR_TESTS_HELPERS_HPP_

#include <cstdint>

#include "tvvar/linalg.hpp"
#include "tvvar/simulation.hpp"

namespace tvvar::testing {

// Entries uniform on [-scale, scale].
inline DenseMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
  DenseMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = scale * (2.0 * rng.uniform() - 1.0);
  return m;
}

// Diagonally dominant, so comfortably invertible.
inline DenseMatrix well_conditioned(Rng& rng, std::size_t d) {
  DenseMatrix m = random_matrix(rng, d, d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) += static_cast<double>(d);
  return m;
}

// Path with the same matrix at every time point.
inline TransitionPath constant_path(const DenseMatrix& a, std::size_t n) {
  return TransitionPath{n, a.rows(), std::vector<DenseMatrix>(n, a)};
}

inline SeriesMatrix stationary_series(const DenseMatrix& a, std::size_t n, std::uint64_t seed,
                                      double noise = 1.0) {
  const std::size_t d = a.rows();
  return simulate_tvvar(constant_path(a, n), DenseMatrix::identity(d) * (noise * noise), 100, seed);
}

}  // namespace tvvar::testing

#endif  // TVVAR_TESTS_HELPERS_HPP_
