#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <string>

#include "msepred/error.hpp"
#include "msepred/kernels.hpp"

namespace msepred::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(MSEPRED_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const detail::Table& table_for(Backend backend) {
#if defined(MSEPRED_HAVE_AVX2)
  if (backend == Backend::kAvx2) return detail::avx2_table();
#endif
  (void)backend;
  return detail::scalar_table();
}

Backend initial_backend() {
  // MSEPRED_KERNELS=scalar forces the reference path.
  if (const char* env = std::getenv("MSEPRED_KERNELS")) {
    if (std::string(env) == "scalar") return Backend::kScalar;
  }
  return cpu_has_avx2() ? Backend::kAvx2 : Backend::kScalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

constexpr std::size_t kBlock = 256;

}  // namespace

bool backend_available(Backend backend) {
  return backend == Backend::kScalar || cpu_has_avx2();
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw DomainError("kernel backend '" + std::string(backend_name(backend)) +
                      "' is not available on this machine");
  }
  current().store(backend, std::memory_order_relaxed);
}

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

void dot_rows(std::span<const double> rows, std::size_t row_len, std::span<const double> x,
              std::span<double> out) {
  if (row_len == 0 || x.size() != row_len || rows.size() != out.size() * row_len) {
    throw DomainError("dot_rows: inconsistent sizes");
  }
  table_for(active_backend()).dot_rows(rows.data(), out.size(), row_len, x.data(), out.data());
}

void sq_distances(std::span<const double> rows, std::size_t row_len, std::span<const double> y,
                  std::span<double> out) {
  if (row_len == 0 || y.size() != row_len || rows.size() != out.size() * row_len) {
    throw DomainError("sq_distances: inconsistent sizes");
  }
  table_for(active_backend())
      .sq_distances(rows.data(), out.size(), row_len, y.data(), out.data());
}

std::size_t argmax_affine_dot(std::span<const double> rows, std::size_t row_len,
                              std::span<const double> x, double scale,
                              std::span<const double> bias) {
  if (row_len == 0 || x.size() != row_len || rows.size() % row_len != 0 || rows.empty()) {
    throw DomainError("argmax_affine_dot: inconsistent sizes");
  }
  const std::size_t n_rows = rows.size() / row_len;
  if (!bias.empty() && bias.size() != n_rows) {
    throw DomainError("argmax_affine_dot: bias length must match row count");
  }
  const auto& table = table_for(active_backend());
  std::array<double, kBlock> buffer{};
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t start = 0; start < n_rows; start += kBlock) {
    const std::size_t count = std::min(kBlock, n_rows - start);
    table.dot_rows(rows.data() + start * row_len, count, row_len, x.data(), buffer.data());
    for (std::size_t i = 0; i < count; ++i) {
      const double score = scale * buffer[i] + (bias.empty() ? 0.0 : bias[start + i]);
      if (score > best) {
        best = score;
        best_index = start + i;
      }
    }
  }
  return best_index;
}

MinResult min_sq_distance(std::span<const double> rows, std::size_t row_len,
                          std::span<const double> y) {
  if (row_len == 0 || y.size() != row_len || rows.size() % row_len != 0 || rows.empty()) {
    throw DomainError("min_sq_distance: inconsistent sizes");
  }
  const std::size_t n_rows = rows.size() / row_len;
  const auto& table = table_for(active_backend());
  std::array<double, kBlock> buffer{};
  MinResult result{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t start = 0; start < n_rows; start += kBlock) {
    const std::size_t count = std::min(kBlock, n_rows - start);
    table.sq_distances(rows.data() + start * row_len, count, row_len, y.data(), buffer.data());
    for (std::size_t i = 0; i < count; ++i) {
      if (buffer[i] < result.value) result = {buffer[i], start + i};
    }
  }
  return result;
}

}  // namespace msepred::kernels
