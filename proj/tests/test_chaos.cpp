#include <random>
#include <set>

#include <doctest.h>

#include "ibea/chaos.hpp"
#include "ibea/errors.hpp"

using namespace ibea;
using namespace ibea::chaos;

TEST_CASE("baker_step branches") {
    // first branch: (x/mu, mu*y)
    BakerState s = baker_step({0.25, 0.5}, 0.5);
    CHECK(s.x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.y == doctest::Approx(0.25).epsilon(1e-15));

    // second branch: ((x-mu)/(1-mu), (1-mu)*y + mu)
    s = baker_step({0.75, 0.0}, 0.5);
    CHECK(s.x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.y == doctest::Approx(0.5).epsilon(1e-15));

    // x == mu goes to the first branch
    s = baker_step({0.3, 1.0}, 0.3);
    CHECK(s.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.y == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("baker_step validates mu") {
    CHECK_THROWS_AS(baker_step({0.5, 0.5}, 0.0), ValidationError);
    CHECK_THROWS_AS(baker_step({0.5, 0.5}, 1.0), ValidationError);
    CHECK_THROWS_AS(baker_step({0.5, 0.5}, -0.2), ValidationError);
}

TEST_CASE("baker_iterate") {
    // n=1 is exactly one step
    const BakerState once = baker_iterate(0.25, 0.5, 0.5, 1);
    const BakerState step = baker_step({0.25, 0.5}, 0.5);
    CHECK(once.x == step.x);
    CHECK(once.y == step.y);

    // two steps by hand: (0.25,0.5) -> (0.5,0.25) -> (1.0,0.125)
    const BakerState twice = baker_iterate(0.25, 0.5, 0.5, 2);
    CHECK(twice.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(twice.y == doctest::Approx(0.125).epsilon(1e-15));

    // the origin is fixed under the first branch
    const BakerState origin = baker_iterate(0.0, 0.0, 0.5, 10000);
    CHECK(origin.x == 0.0);
    CHECK(origin.y == 0.0);

    CHECK_THROWS_AS(baker_iterate(0.1, 0.1, 0.5, 0), ValidationError);
}

TEST_CASE("baker map stays inside the unit square") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> mu_dist(0.01, 0.99);
    for (int trial = 0; trial < 200; ++trial) {
        const double mu = mu_dist(rng);
        BakerState s{unit(rng), unit(rng)};
        for (int i = 0; i < 100; ++i) {
            s = baker_step(s, mu);
            REQUIRE(s.x >= 0.0);
            REQUIRE(s.x <= 1.0);
            REQUIRE(s.y >= 0.0);
            REQUIRE(s.y <= 1.0);
        }
    }
}

TEST_CASE("arnold_map examples") {
    for (int a : {0, 1, 97})
        for (int b : {0, 3, 111})
            CHECK(arnold_map(0, 0, a, b, 256) == std::pair{0, 0});

    CHECK(arnold_map(1, 0, 97, 111, 256) == std::pair{1, 97});
    CHECK(arnold_map(1, 1, 1, 1, 2) == std::pair{0, 1});
}

TEST_CASE("arnold_map is a bijection on the grid") {
    std::mt19937_64 rng(29);
    for (int size : {2, 3, 5, 16, 64}) {
        std::uniform_int_distribution<int> param(0, size - 1);
        const int a = param(rng), b = param(rng);
        std::set<std::pair<int, int>> seen;
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j)
                seen.insert(arnold_map(i, j, a, b, size));
        CHECK(seen.size() == static_cast<std::size_t>(size) * size);
    }
}

TEST_CASE("logistic_real_step") {
    CHECK(logistic_real_step(0.0, 4.0) == 0.0);
    CHECK(logistic_real_step(0.5, 4.0) == 1.0);
    // 3.999 * 0.147 * 0.853 = 0.501438609
    CHECK(logistic_real_step(0.147, 3.999) == doctest::Approx(0.501438609).epsilon(1e-12));
}

TEST_CASE("logistic_int_step") {
    CHECK(logistic_int_step(0.0) == 0.0);
    CHECK(logistic_int_step(128.0) == 256.0);
    CHECK(logistic_int_step(256.0) == 0.0);
}

TEST_CASE("logistic maps preserve their intervals") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> wide(0.0, 256.0);
    std::uniform_real_distribution<double> r_dist(3.57, 4.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const double z = logistic_real_step(unit(rng), r_dist(rng));
        CHECK(z >= 0.0);
        CHECK(z <= 1.0);
        const double s = logistic_int_step(wide(rng));
        CHECK(s >= 0.0);
        CHECK(s <= 256.0);
    }
}

TEST_CASE("quantizers") {
    CHECK(quantize_h1(0.0) == 0);
    CHECK(quantize_h1(0.123456789) == 64); // 123456 mod 256
    CHECK(quantize_h1(256.0) == 0);        // 256e6 divisible by 256
    CHECK(quantize_h2(0.0) == 0);
    CHECK(quantize_h2(0.5) == 80);     // 50000 mod 256
    CHECK(quantize_h2(0.99999) == 159); // 99999 mod 256
    CHECK(quantize_h2(1.0) == 160);    // 100000 mod 256
}

TEST_CASE("weak seed 128 collapses the quantized orbit to zero") {
    double s = 128.0;
    s = logistic_int_step(s);
    CHECK(s == 256.0);
    CHECK(quantize_h1(s) == 0);
    for (int i = 0; i < 32; ++i) {
        s = logistic_int_step(s);
        CHECK(s == 0.0);
        CHECK(quantize_h1(s) == 0);
    }
}
