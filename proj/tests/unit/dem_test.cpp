#include "doctest.h"

#include "dvps/dem.hpp"
#include "dvps/errors.hpp"
#include "dvps/rng.hpp"

using namespace dvps;

TEST_CASE("dem round trip and wrong keys") {
  const Group& g = p256();
  HashOracle h;
  Rng rng("dem");
  DemCiphertext empty = dem_seal(g, h, g.generator(), Bytes{});
  CHECK(empty.c21.empty());
  CHECK(empty.c22.size() == 32);
  CHECK(dem_open(g, h, g.generator(), empty).empty());
  for (int i = 0; i < 100; ++i) {
    GroupElement k = g.exp_g(g.random_scalar(rng));
    Bytes m = rng.bytes(rng.below(64).get_ui());
    DemCiphertext ct = dem_seal(g, h, k, m);
    CHECK(ct.c21.size() == m.size());
    CHECK(dem_open(g, h, k, ct) == m);
    GroupElement other = g.exp_g(g.random_scalar(rng));
    CHECK_THROWS_AS(dem_open(g, h, other, ct), Error);
  }
}

TEST_CASE("every single-bit flip is rejected") {
  const Group& g = p256();
  HashOracle h;
  GroupElement k = g.exp_g(12345);
  Bytes m = to_bytes("sixteen byte msg");
  DemCiphertext ct = dem_seal(g, h, k, m);
  int rejected = 0, total = 0;
  for (int part = 0; part < 2; ++part) {
    Bytes& target = part == 0 ? ct.c21 : ct.c22;
    for (std::size_t bit = 0; bit < target.size() * 8; ++bit) {
      target[bit / 8] ^= static_cast<std::uint8_t>(1 << (bit % 8));
      ++total;
      try {
        dem_open(g, h, k, ct);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kTagMismatch) ++rejected;
      }
      target[bit / 8] ^= static_cast<std::uint8_t>(1 << (bit % 8));
    }
  }
  CHECK(total == 128 + 256);
  CHECK(rejected == total);
}
