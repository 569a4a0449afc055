#include <immintrin.h>

#include "msepred/kernels.hpp"

namespace msepred::kernels::detail {
namespace {

// Sum of the four lanes of each of a, b, c, d, returned as one vector
// (lane i = total of the i-th argument).
inline __m256d reduce4(__m256d a, __m256d b, __m256d c, __m256d d) {
  const __m256d ab = _mm256_hadd_pd(a, b);  // a0+a1 b0+b1 a2+a3 b2+b3
  const __m256d cd = _mm256_hadd_pd(c, d);
  const __m256d lo = _mm256_permute2f128_pd(ab, cd, 0x20);
  const __m256d hi = _mm256_permute2f128_pd(ab, cd, 0x31);
  return _mm256_add_pd(lo, hi);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void dot_rows_avx2(const double* rows, std::size_t n_rows, std::size_t row_len, const double* x,
                   double* out) {
  const std::size_t vec_len = row_len & ~std::size_t{3};
  std::size_t g = 0;
  for (; g + 4 <= n_rows; g += 4) {
    const double* r0 = rows + g * row_len;
    const double* r1 = r0 + row_len;
    const double* r2 = r1 + row_len;
    const double* r3 = r2 + row_len;
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd();
    __m256d a3 = _mm256_setzero_pd();
    for (std::size_t k = 0; k < vec_len; k += 4) {
      const __m256d xv = _mm256_loadu_pd(x + k);
      a0 = _mm256_fmadd_pd(_mm256_loadu_pd(r0 + k), xv, a0);
      a1 = _mm256_fmadd_pd(_mm256_loadu_pd(r1 + k), xv, a1);
      a2 = _mm256_fmadd_pd(_mm256_loadu_pd(r2 + k), xv, a2);
      a3 = _mm256_fmadd_pd(_mm256_loadu_pd(r3 + k), xv, a3);
    }
    __m256d sums = reduce4(a0, a1, a2, a3);
    if (vec_len != row_len) {
      alignas(32) double tail[4] = {0.0, 0.0, 0.0, 0.0};
      for (std::size_t k = vec_len; k < row_len; ++k) {
        tail[0] += r0[k] * x[k];
        tail[1] += r1[k] * x[k];
        tail[2] += r2[k] * x[k];
        tail[3] += r3[k] * x[k];
      }
      sums = _mm256_add_pd(sums, _mm256_load_pd(tail));
    }
    _mm256_storeu_pd(out + g, sums);
  }
  for (; g < n_rows; ++g) {
    const double* row = rows + g * row_len;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < vec_len; k += 4) {
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + k), _mm256_loadu_pd(x + k), acc);
    }
    double s = hsum(acc);
    for (std::size_t k = vec_len; k < row_len; ++k) s += row[k] * x[k];
    out[g] = s;
  }
}

void sq_distances_avx2(const double* rows, std::size_t n_rows, std::size_t row_len,
                       const double* y, double* out) {
  const std::size_t vec_len = row_len & ~std::size_t{3};
  for (std::size_t g = 0; g < n_rows; ++g) {
    const double* row = rows + g * row_len;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < vec_len; k += 4) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(row + k), _mm256_loadu_pd(y + k));
      acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (std::size_t k = vec_len; k < row_len; ++k) {
      const double d = row[k] - y[k];
      s += d * d;
    }
    out[g] = s;
  }
}

}  // namespace

const Table& avx2_table() {
  static const Table table{&dot_rows_avx2, &sq_distances_avx2};
  return table;
}

}  // namespace msepred::kernels::detail
