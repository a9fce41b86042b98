#include <catch2/catch_amalgamated.hpp>

#include "xhawkes/rng.hpp"

using xhawkes::Philox4x64;

TEST_CASE("philox known-answer blocks match the reference generator", "[rng]") {
    // Vectors frozen from NumPy's Philox(4x64-10) bit generator.
    const auto b1 = Philox4x64::philox_block({1, 0, 0, 0}, {0, 0});
    CHECK(b1[0] == 0x02f4ba6408e4d89bULL);
    CHECK(b1[1] == 0x3dd62b0b9ca8c5b2ULL);
    CHECK(b1[2] == 0x1c8667a55d902e79ULL);
    CHECK(b1[3] == 0x907d7a052fd5b4dcULL);

    const auto b2 = Philox4x64::philox_block({2, 0, 0, 0}, {0, 0});
    CHECK(b2[0] == 0x809bf322883987c3ULL);
    CHECK(b2[1] == 0x471128b9e807f7ddULL);
    CHECK(b2[2] == 0xf250ba0dbec065b7ULL);
    CHECK(b2[3] == 0xfc6ed66767a457bcULL);

    const auto b3 = Philox4x64::philox_block({2, 2, 3, 4}, {5, 6});
    CHECK(b3[0] == 0x92ab6a0e75619263ULL);
    CHECK(b3[1] == 0xd8ff75bdc6bf8f60ULL);
    CHECK(b3[2] == 0x450e124938725640ULL);
    CHECK(b3[3] == 0x94eb1a7cffd20cbbULL);

    const auto b4 = Philox4x64::philox_block({1, 0, 0, 0}, {0xdeadbeef, 0xcafef00d});
    CHECK(b4[0] == 0x2efbea9056208111ULL);
    CHECK(b4[1] == 0x32bb8ca912a6bd47ULL);
    CHECK(b4[2] == 0x78cd0b669d6a23fbULL);
    CHECK(b4[3] == 0x4a9a089e67c68c3aULL);
}

TEST_CASE("streams are deterministic and independent", "[rng]") {
    Philox4x64 a(42, 7), b(42, 7), c(42, 8);
    bool all_equal = true;
    bool any_diff = false;
    for (int i = 0; i < 64; ++i) {
        const auto va = a.next_u64();
        all_equal = all_equal && va == b.next_u64();
        any_diff = any_diff || va != c.next_u64();
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("uniform and exponential draws have the right range and mean", "[rng]") {
    Philox4x64 rng(123, 0);
    double sum_u = 0.0, sum_e = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum_u += u;
        sum_e += rng.exponential(2.0);
    }
    CHECK_THAT(sum_u / n, Catch::Matchers::WithinAbs(0.5, 0.005));
    CHECK_THAT(sum_e / n, Catch::Matchers::WithinAbs(0.5, 0.01));
}
