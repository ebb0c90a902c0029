#include <cstdint>

#include "natlearn/norm.hpp"
#include "natlearn/rng.hpp"

namespace natlearn::parallel {

std::uint64_t gram_raw_sum(const TruthTable& t) {
  const SignMatrix m = SignMatrix::from_table(t);
  const auto rows = static_cast<std::int64_t>(m.rows());
  const std::uint64_t cols = m.cols();
  std::uint64_t off = 0;
  // Upper triangle; later rows have less work, hence dynamic scheduling.
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : off)
  for (std::int64_t r0 = 0; r0 < rows; ++r0) {
    std::uint64_t local = 0;
    for (std::int64_t r1 = r0 + 1; r1 < rows; ++r1) {
      const auto ip = m.row_inner(static_cast<std::uint64_t>(r0), static_cast<std::uint64_t>(r1));
      local += static_cast<std::uint64_t>(ip * ip);
    }
    off += local;
  }
  return m.rows() * cols * cols + 2 * off;
}

std::int64_t mc_product_sum(const PairFunction& f, std::uint64_t samples, std::uint64_t base_seed) {
  constexpr std::int64_t shards = 64;
  const std::uint64_t ma = f.bits_a >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << f.bits_a) - 1;
  const std::uint64_t mb = f.bits_b >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << f.bits_b) - 1;
  std::int64_t total = 0;
#pragma omp parallel for schedule(static) reduction(+ : total)
  for (std::int64_t k = 0; k < shards; ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    const std::uint64_t count = samples / shards + (uk < samples % shards ? 1 : 0);
    Rng rng(splitmix64(base_seed + uk));
    std::int64_t s = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint64_t a0 = rng() & ma, a1 = rng() & ma, b0 = rng() & mb, b1 = rng() & mb;
      s += f.eval(a0, b0) * f.eval(a0, b1) * f.eval(a1, b0) * f.eval(a1, b1);
    }
    total += s;
  }
  return total;
}

}  // namespace natlearn::parallel
