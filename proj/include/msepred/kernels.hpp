#pragma once

// Data-parallel inner loops behind grid search and distance scans.
//
// Every kernel has a scalar reference implementation; an AVX2+FMA variant is
// selected at runtime when the CPU supports it. Rows are stored contiguously
// (row-major, `row_len` doubles each); complex vectors are passed as their
// interleaved (re, im) doubles so that Re{x^H a} is a plain real dot product.

#include <cstddef>
#include <span>
#include <string_view>

namespace msepred::kernels {

enum class Backend { kScalar, kAvx2 };

bool backend_available(Backend backend);
Backend active_backend();
/// Throws DomainError when the backend is not available on this CPU/build.
void set_backend(Backend backend);
std::string_view backend_name(Backend backend);

/// out[g] = sum_k rows[g * row_len + k] * x[k]
void dot_rows(std::span<const double> rows, std::size_t row_len, std::span<const double> x,
              std::span<double> out);

/// out[g] = sum_k (rows[g * row_len + k] - y[k])^2
void sq_distances(std::span<const double> rows, std::size_t row_len, std::span<const double> y,
                  std::span<double> out);

/// argmax_g scale * dot(row_g, x) + bias[g]; bias may be empty (treated as 0).
/// Ties go to the lowest index.
std::size_t argmax_affine_dot(std::span<const double> rows, std::size_t row_len,
                              std::span<const double> x, double scale,
                              std::span<const double> bias);

/// min_g sq_distance(row_g, y), with the index of the minimiser.
struct MinResult {
  double value;
  std::size_t index;
};
MinResult min_sq_distance(std::span<const double> rows, std::size_t row_len,
                          std::span<const double> y);

namespace detail {

struct Table {
  void (*dot_rows)(const double* rows, std::size_t n_rows, std::size_t row_len, const double* x,
                   double* out);
  void (*sq_distances)(const double* rows, std::size_t n_rows, std::size_t row_len,
                       const double* y, double* out);
};

const Table& scalar_table();
#if defined(MSEPRED_HAVE_AVX2)
const Table& avx2_table();
#endif

}  // namespace detail
}  // namespace msepred::kernels
