#include <doctest.h>

#include <cmath>
#include <set>

#include "pga/random.hpp"

using namespace pga;

TEST_CASE("philox known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(detail::philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
        A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(detail::philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                              {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
}

TEST_CASE("streams are reproducible and distinct") {
  Philox a(7), b(7), c(7, 1);
  Philox d = Philox(7).split(1);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    const auto y = c();
    CHECK(y == d());
    CHECK(x != y);
  }
}

TEST_CASE("uniform and normal moments") {
  Philox rng(123);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(std::abs(su / n - 0.5) < 0.005);
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(std::abs(sn2 / n - 1.0) < 0.02);
}

TEST_CASE("below and binomial ranges") {
  Philox rng(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(rng.below(6));
  CHECK(seen.size() == 6);
  CHECK(*seen.rbegin() == 5);
  double s = 0;
  for (int i = 0; i < 20000; ++i) {
    const int k = rng.binomial(10, 0.3);
    CHECK(k >= 0);
    CHECK(k <= 10);
    s += k;
  }
  CHECK(std::abs(s / 20000 - 3.0) < 0.05);
}
