#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <vector>

#include "scenesmith/core/base64.hpp"
#include "scenesmith/core/error.hpp"
#include "scenesmith/core/hash.hpp"
#include "scenesmith/core/rng.hpp"
#include "scenesmith/simd/kernels.hpp"

using namespace scenesmith;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

// Reference written straight from the lane-order contract in kernels.hpp.
double lane_order_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double lanes[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double p = a[i] * b[i];
    lanes[i % 4] = lanes[i % 4] + p;
  }
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 767, 768, 1001};

}  // namespace

TEST_SUITE("core") {

TEST_CASE("scalar dot follows the documented lane order") {
  Rng rng(11);
  for (std::size_t n : kSizes) {
    const auto a = random_vector(rng, n), b = random_vector(rng, n);
    CHECK(same_bits(simd::scalar_kernels().dot(a.data(), b.data(), n), lane_order_dot(a, b)));
  }
}

TEST_CASE("every available ISA is bit-identical to the scalar reference") {
  const auto& ref = simd::scalar_kernels();
  Rng rng(2024);
  for (simd::Isa isa : simd::available_isas()) {
    CAPTURE(simd::isa_name(isa));
    const auto& k = simd::kernels_for(isa);
    CHECK(k.isa == isa);
    for (std::size_t n : kSizes) {
      CAPTURE(n);
      const auto a = random_vector(rng, n, -1e3, 1e3), b = random_vector(rng, n, -1e-3, 1e-3);
      CHECK(same_bits(k.dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n)));

      const std::size_t rows = 7;
      const auto m = random_vector(rng, rows * n);
      std::vector<double> o1(rows), o2(rows);
      k.dot_rows(m.data(), rows, n, a.data(), o1.data());
      ref.dot_rows(m.data(), rows, n, a.data(), o2.data());
      for (std::size_t r = 0; r < rows; ++r) CHECK(same_bits(o1[r], o2[r]));

      auto y1 = random_vector(rng, n), y2 = y1;
      k.axpy(0.37, a.data(), y1.data(), n);
      ref.axpy(0.37, a.data(), y2.data(), n);
      CHECK(std::memcmp(y1.data(), y2.data(), n * sizeof(double)) == 0);

      const auto xs = random_vector(rng, n, 0, 10), ys = random_vector(rng, n, 0, 10);
      for (int q = 0; q < 20; ++q) {
        const double px = rng.uniform(0, 10), py = rng.uniform(0, 10), r2 = rng.uniform(0, 4);
        CHECK(k.any_within(xs.data(), ys.data(), n, px, py, r2) ==
              ref.any_within(xs.data(), ys.data(), n, px, py, r2));
      }
    }
  }
}

TEST_CASE("any_within is strict at the boundary") {
  const double xs[] = {3.0, 100.0, 100.0, 100.0, 100.0};
  const double ys[] = {4.0, 100.0, 100.0, 100.0, 100.0};
  for (simd::Isa isa : simd::available_isas()) {
    const auto& k = simd::kernels_for(isa);
    CHECK_FALSE(k.any_within(xs, ys, 5, 0.0, 0.0, 25.0));
    CHECK(k.any_within(xs, ys, 5, 0.0, 0.0, 25.0000001));
    CHECK_FALSE(k.any_within(xs, ys, 0, 3.0, 4.0, 1.0));
  }
}

TEST_CASE("fnv1a64 published vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(to_hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("derived seeds differ per stream and are stable") {
  CHECK(derive_seed(42, 1) == derive_seed(42, 1));
  CHECK(derive_seed(42, 1) != derive_seed(42, 2));
  CHECK(derive_seed(42, 1) != derive_seed(43, 1));
}

TEST_CASE("rng conversions stay in range and repeat per seed") {
  Rng a(5), b(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == b.uniform01());
    const auto k = a.below(7);
    CHECK(k < 7);
    CHECK(k == b.below(7));
  }
}

TEST_CASE("base64 round trip and float32 packing") {
  const std::vector<std::uint8_t> bytes = {'f', 'o', 'o', 'b', 'a'};
  CHECK(base64_encode(bytes) == "Zm9vYmE=");
  CHECK(base64_decode("Zm9vYmE=") == bytes);
  const std::vector<double> values = {0.5, -1.25, 3.0};
  CHECK(decode_f32_base64(encode_f32_base64(values)) == values);
  CHECK_THROWS_AS(base64_decode("@@@@"), Error);
}

}
