#include <random>

#include <doctest.h>

#include "ibea/attack.hpp"
#include "ibea/cipher.hpp"
#include "ibea/errors.hpp"
#include "ibea/keyed_oracle.hpp"
#include "ibea/oracle.hpp"
#include "test_support.hpp"

using namespace ibea;
using namespace ibea::attack;
using ibea::cipher::KeyedOracle;
using ibea::testing::random_image;
using ibea::testing::random_key;

TEST_CASE("probe images carry the target sum") {
    const ProbeSet probes = make_probe_images(575, 4, 4);
    CHECK(probes.q1.at(0, 0) == 575);
    for (std::size_t k = 1; k < 16; ++k)
        CHECK(probes.q1.at(k) == 0);
    CHECK(probes.q2.at(0, 0) == 574);
    CHECK(probes.q2.at(0, 1) == 1);
    CHECK(probes.q3.at(0, 0) == 574);
    CHECK(probes.q3.at(0, 2) == 1);
    for (const WideImage* q : {&probes.q1, &probes.q2, &probes.q3})
        CHECK(pixel_sum(*q) == 575);
}

TEST_CASE("probe boundary eta=1 and rejection of eta=0") {
    const ProbeSet probes = make_probe_images(1, 2, 3);
    CHECK(probes.q2.at(0, 0) == 0);
    CHECK(probes.q2.at(0, 1) == 1);
    CHECK_THROWS_AS(make_probe_images(0, 4, 4), ValidationError);
}

TEST_CASE("locate_first_pixel intersects the two difference sets") {
    // Q2 differs from Q1 at (2,3) and (4,4); Q3 differs at (1,1) and (4,4).
    std::mt19937_64 rng(83);
    const Image q1 = random_image(rng, 5, 5);
    std::vector<std::uint8_t> px2 = q1.pixels(), px3 = q1.pixels();
    px2[2 * 5 + 3] ^= 0x55;
    px2[4 * 5 + 4] ^= 0x7f;
    px3[1 * 5 + 1] ^= 0x11;
    px3[4 * 5 + 4] ^= 0x3c;
    const Position uv = locate_first_pixel(q1, Image(5, 5, px2), Image(5, 5, px3));
    CHECK(uv == Position{4, 4});
}

TEST_CASE("locate_first_pixel rejects malformed difference sets") {
    const Image q1 = Image::filled(4, 4, 9);
    SUBCASE("too few differences") {
        std::vector<std::uint8_t> px = q1.pixels();
        px[5] ^= 1;
        CHECK_THROWS_WITH_AS(locate_first_pixel(q1, Image(4, 4, px), q1),
                             doctest::Contains("expected 2"), AttackError);
    }
    SUBCASE("empty intersection") {
        std::vector<std::uint8_t> px2 = q1.pixels(), px3 = q1.pixels();
        px2[1] ^= 1;
        px2[2] ^= 1;
        px3[5] ^= 1;
        px3[6] ^= 1;
        CHECK_THROWS_WITH_AS(locate_first_pixel(q1, Image(4, 4, px2), Image(4, 4, px3)),
                             doctest::Contains("expected exactly 1"), AttackError);
    }
}

TEST_CASE("located position equals the schedule split") {
    std::mt19937_64 rng(89);
    for (int trial = 0; trial < 10; ++trial) {
        const auto key = random_key(rng, 8);
        const long long eta = 1 + std::uniform_int_distribution<long long>(0, 9999)(rng);
        KeyedOracle oracle(key);

        const ProbeSet probes = make_probe_images(eta, 8, 8);
        const Position uv = locate_first_pixel(oracle.encrypt_chosen(probes.q1),
                                               oracle.encrypt_chosen(probes.q2),
                                               oracle.encrypt_chosen(probes.q3));
        const auto sched = cipher::derive_schedule(key, eta, 8, 8);
        CHECK(uv == Position{sched.u, sched.v});
    }
}

TEST_CASE("recover_mask subtracts eta at the located position") {
    std::vector<std::uint8_t> px(16, 7);
    px[2 * 4 + 1] = 10;
    const Image q1(4, 4, std::move(px));

    SUBCASE("eta = 575") {
        const Image mask = recover_mask(q1, 575, {2, 1});
        CHECK(mask.at(2, 1) == 203); // (10 - 575) mod 256
        CHECK(mask.at(0, 0) == 7);
    }
    SUBCASE("eta divisible by 256 changes nothing") {
        CHECK(recover_mask(q1, 512, {2, 1}) == q1);
    }
}

TEST_CASE("recovered mask equals the cipher's keystream image") {
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 10; ++trial) {
        const auto key = random_key(rng, 8);
        const long long eta = 1 + std::uniform_int_distribution<long long>(0, 99999)(rng);
        KeyedOracle oracle(key);

        const ProbeSet probes = make_probe_images(eta, 8, 8);
        const Image q1 = oracle.encrypt_chosen(probes.q1);
        const Image q2 = oracle.encrypt_chosen(probes.q2);
        const Image q3 = oracle.encrypt_chosen(probes.q3);
        const Position uv = locate_first_pixel(q1, q2, q3);
        CHECK(recover_mask(q1, eta, uv) == cipher::build_mask(key, eta, 8, 8));
    }
}

TEST_CASE("unmask") {
    SUBCASE("zero mask is the identity") {
        std::mt19937_64 rng(101);
        const Image img = random_image(rng, 4, 4);
        CHECK(unmask(img, Image::filled(4, 4, 0)) == img);
    }
    SUBCASE("single entry wraps") {
        CHECK(unmask(Image(1, 1, {3}), Image(1, 1, {200})).at(0, 0) == 59);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(unmask(Image::filled(2, 2, 0), Image::filled(2, 3, 0)), DimensionError);
    }
    SUBCASE("unmasking a cipher recovers the permuted image") {
        std::mt19937_64 rng(103);
        const auto key = random_key(rng, 8);
        const Image img = random_image(rng, 8, 8);
        const auto enc = cipher::encrypt(img, key);

        const auto sched = cipher::derive_schedule(key, enc.eta, 8, 8);
        const auto perm = cipher::build_permutation(key, sched, 8, 8);
        const Image permuted_plain = unmask(enc.cipher, cipher::build_mask(key, sched, 8, 8));
        for (std::size_t k = 0; k < 64; ++k)
            CHECK(permuted_plain.at(perm.dest(k)) == img.at(k));
    }
}

TEST_CASE("index images") {
    SUBCASE("2x2 with eta 6") {
        const IndexImages idx = make_index_images(6, 2, 2);
        CHECK(idx.o0.pixels() == std::vector<long long>{0, 1, 2, 3});
        CHECK(idx.o1.pixels() == std::vector<long long>{6, 0, 0, 0});
        CHECK(pixel_sum(idx.o0) == 6);
        CHECK(pixel_sum(idx.o1) == 6);
    }
    SUBCASE("16x16 base pattern before adjustment") {
        const IndexImages idx = make_index_images(1000, 16, 16);
        for (std::size_t k = 1; k < 256; ++k) {
            CHECK(idx.o0.at(k) == static_cast<long long>(k));
            CHECK(idx.o1.at(k) == 0);
        }
        CHECK(pixel_sum(idx.o0) == 1000);
        CHECK(pixel_sum(idx.o1) == 1000);
    }
    SUBCASE("adjusted first pixel may be negative") {
        const IndexImages idx = make_index_images(1, 16, 16);
        CHECK(idx.o0.at(0) == 1 - (255 * 256 / 2)); // 1 - sum(1..255)
    }
    SUBCASE("size cap") {
        CHECK_THROWS_AS(make_index_images(1, 300, 300), ValidationError);
    }
}

TEST_CASE("recover_permutation inverts the cipher's table") {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 10; ++trial) {
        const auto key = random_key(rng, 8);
        const long long eta = 1 + std::uniform_int_distribution<long long>(0, 9999)(rng);
        KeyedOracle oracle(key);

        const auto sched = cipher::derive_schedule(key, eta, 8, 8);
        const Image mask = cipher::build_mask(key, sched, 8, 8);
        const IndexImages idx = make_index_images(eta, 8, 8);
        const auto l0 = recover_permutation(oracle.encrypt_chosen(idx.o0),
                                            oracle.encrypt_chosen(idx.o1), mask,
                                            {sched.u, sched.v}, 8, 8);

        const auto perm = cipher::build_permutation(key, sched, 8, 8);
        for (std::size_t k = 0; k < 64; ++k)
            CHECK(l0[perm.dest(k)] == k);
        // the first plain pixel's slot maps back to index 0
        CHECK(l0[static_cast<std::size_t>(sched.u) * 8 + sched.v] == 0);
    }
}

TEST_CASE("swap-only cipher yields the transposition table") {
    // identity position map plus zero mask: only the (0,0)<->(u,v) swap remains
    std::mt19937_64 rng(109);
    auto key = random_key(rng, 4);
    key.a = 0;
    key.b = 0;
    key.s0[0] = 128.0;
    KeyedOracle oracle(key);

    const long long eta = 575;
    const RecoveredKey rec = recover_equivalent_key(oracle, eta, 4, 4);
    CHECK(rec.mask == Image::filled(4, 4, 0));

    const auto sched = cipher::derive_schedule(key, eta, 4, 4);
    const std::size_t swap_target = static_cast<std::size_t>(sched.u) * 4 + sched.v;
    for (std::size_t t = 0; t < 16; ++t) {
        if (t == 0)
            CHECK(rec.l0[t] == swap_target);
        else if (t == swap_target)
            CHECK(rec.l0[t] == 0);
        else
            CHECK(rec.l0[t] == t);
    }
}

TEST_CASE("attack_decrypt recovers plaintext bit for bit") {
    std::mt19937_64 rng(113);
    for (int trial = 0; trial < 6; ++trial) {
        const auto key = random_key(rng, 16);
        const Image img = random_image(rng, 16, 16, /*nonzero_sum=*/true);
        const auto enc = cipher::encrypt(img, key);

        KeyedOracle inner(key);
        CountingOracle oracle(inner);
        const Image recovered = attack_decrypt(oracle, enc.cipher, enc.eta, 16, 16);
        CHECK(recovered == img);
        CHECK(oracle.query_count() == 5);
    }
}

TEST_CASE("equivalent key decrypts further ciphers with zero extra queries") {
    std::mt19937_64 rng(127);
    const auto key = random_key(rng, 16);
    const Image first = random_image(rng, 16, 16, true);
    const auto enc1 = cipher::encrypt(first, key);

    KeyedOracle inner(key);
    CountingOracle oracle(inner);
    const RecoveredKey equivalent = recover_equivalent_key(oracle, enc1.eta, 16, 16);
    CHECK(oracle.query_count() == 5);
    CHECK(equivalent.decrypt(enc1.cipher) == first);

    // second plaintext with the same pixel sum, same key
    std::vector<std::uint8_t> px = first.pixels();
    std::swap(px[1], px[200]);
    std::swap(px[17], px[99]);
    const Image second(16, 16, std::move(px));
    REQUIRE(pixel_sum(second) == enc1.eta);

    const auto enc2 = cipher::encrypt(second, key);
    CHECK(equivalent.decrypt(enc2.cipher) == second);
    CHECK(oracle.query_count() == 5); // unchanged
}

TEST_CASE("recovered key invariants") {
    std::mt19937_64 rng(131);
    const auto key = random_key(rng, 8);
    KeyedOracle oracle(key);
    const RecoveredKey rec = recover_equivalent_key(oracle, 575, 8, 8);

    // table is a bijection with the first-pixel slot mapping to 0
    std::vector<bool> seen(64, false);
    for (auto v : rec.l0) {
        REQUIRE(v < 64);
        REQUIRE(!seen[v]);
        seen[v] = true;
    }
    CHECK(rec.l0[static_cast<std::size_t>(rec.first_pixel.i) * 8 + rec.first_pixel.j] == 0);
}
