#include "msepred/kernels.hpp"

namespace msepred::kernels::detail {
namespace {

void dot_rows_scalar(const double* rows, std::size_t n_rows, std::size_t row_len,
                     const double* x, double* out) {
  for (std::size_t g = 0; g < n_rows; ++g) {
    const double* row = rows + g * row_len;
    double acc = 0.0;
    for (std::size_t k = 0; k < row_len; ++k) acc += row[k] * x[k];
    out[g] = acc;
  }
}

void sq_distances_scalar(const double* rows, std::size_t n_rows, std::size_t row_len,
                         const double* y, double* out) {
  for (std::size_t g = 0; g < n_rows; ++g) {
    const double* row = rows + g * row_len;
    double acc = 0.0;
    for (std::size_t k = 0; k < row_len; ++k) {
      const double d = row[k] - y[k];
      acc += d * d;
    }
    out[g] = acc;
  }
}

}  // namespace

const Table& scalar_table() {
  static const Table table{&dot_rows_scalar, &sq_distances_scalar};
  return table;
}

}  // namespace msepred::kernels::detail
