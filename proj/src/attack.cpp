#include "ibea/attack.hpp"

#include <algorithm>

#include "ibea/errors.hpp"

namespace ibea::attack {

namespace {

void require_same_shape(const Image& a, const Image& b, const char* stage) {
    if (a.height() != b.height() || a.width() != b.width())
        throw AttackError(std::string(stage) + ": cipher dimensions disagree");
}

std::vector<std::size_t> differing_positions(const Image& a, const Image& b) {
    std::vector<std::size_t> diff;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a.at(k) != b.at(k))
            diff.push_back(k);
    return diff;
}

} // namespace

ProbeSet make_probe_images(long long eta, int m, int n) {
    if (eta < 1)
        throw ValidationError("make_probe_images: eta must be >= 1");
    if (m < 2 || n < 3)
        throw ValidationError("make_probe_images: need at least 2 rows and 3 columns");

    std::vector<long long> p1(static_cast<std::size_t>(m) * n, 0);
    std::vector<long long> p2 = p1;
    std::vector<long long> p3 = p1;
    p1[0] = eta;
    p2[0] = eta - 1;
    p2[1] = 1;
    p3[0] = eta - 1;
    p3[2] = 1;
    return {WideImage(m, n, std::move(p1)), WideImage(m, n, std::move(p2)),
            WideImage(m, n, std::move(p3))};
}

Position locate_first_pixel(const Image& c1, const Image& c2, const Image& c3) {
    require_same_shape(c1, c2, "locate_first_pixel");
    require_same_shape(c1, c3, "locate_first_pixel");

    const std::vector<std::size_t> d12 = differing_positions(c1, c2);
    const std::vector<std::size_t> d13 = differing_positions(c1, c3);
    if (d12.size() != 2)
        throw AttackError("locate_first_pixel: Q1/Q2 differ at " + std::to_string(d12.size()) +
                          " positions, expected 2 (oracle mismatch)");
    if (d13.size() != 2)
        throw AttackError("locate_first_pixel: Q1/Q3 differ at " + std::to_string(d13.size()) +
                          " positions, expected 2 (oracle mismatch)");

    std::vector<std::size_t> common;
    std::set_intersection(d12.begin(), d12.end(), d13.begin(), d13.end(),
                          std::back_inserter(common));
    if (common.size() != 1)
        throw AttackError("locate_first_pixel: difference sets share " +
                          std::to_string(common.size()) + " positions, expected exactly 1");

    const std::size_t k = common.front();
    return {static_cast<int>(k / c1.width()), static_cast<int>(k % c1.width())};
}

Image recover_mask(const Image& c1, long long eta, Position uv) {
    std::vector<std::uint8_t> mask(c1.pixels());
    const std::size_t k = static_cast<std::size_t>(uv.i) * c1.width() + uv.j;
    mask[k] = mod256(static_cast<long long>(c1.at(k)) - eta);
    return Image(c1.height(), c1.width(), std::move(mask));
}

Image unmask(const Image& cipher, const Image& mask) {
    if (cipher.height() != mask.height() || cipher.width() != mask.width())
        throw DimensionError("unmask: cipher and mask dimensions disagree");
    std::vector<std::uint8_t> out(cipher.size());
    for (std::size_t k = 0; k < cipher.size(); ++k)
        out[k] = mod256(static_cast<long long>(cipher.at(k)) - mask.at(k));
    return Image(cipher.height(), cipher.width(), std::move(out));
}

IndexImages make_index_images(long long eta, int m, int n) {
    const std::size_t count = static_cast<std::size_t>(m) * n;
    if (count > 65536)
        throw ValidationError("make_index_images: M*N > 65536 needs more than two base-256 digits");

    std::vector<long long> low(count), high(count);
    for (std::size_t k = 0; k < count; ++k) {
        low[k] = static_cast<long long>(k % 256);
        high[k] = static_cast<long long>(k / 256);
    }
    // Balance the first pixel so each digit image sums to eta. May leave
    // [0,255]; that is why these are wide images.
    for (auto* px : {&low, &high}) {
        long long rest = 0;
        for (std::size_t k = 1; k < count; ++k)
            rest += (*px)[k];
        (*px)[0] = eta - rest;
    }
    return {WideImage(m, n, std::move(low)), WideImage(m, n, std::move(high))};
}

std::vector<std::uint32_t> recover_permutation(const Image& c0, const Image& c1,
                                               const Image& mask, Position uv, int m, int n) {
    require_same_shape(c0, c1, "recover_permutation");
    require_same_shape(c0, mask, "recover_permutation");
    const std::size_t count = static_cast<std::size_t>(m) * n;
    if (c0.size() != count)
        throw AttackError("recover_permutation: cipher size does not match M*N");

    const Image low = unmask(c0, mask);
    const Image high = unmask(c1, mask);

    // composite = 256*high + low reads the plain linear index that landed
    // at each permuted position; only (u,v) is polluted by the adjusted
    // first pixels.
    std::vector<long long> composite(count);
    for (std::size_t k = 0; k < count; ++k)
        composite[k] = 256LL * high.at(k) + low.at(k);

    const std::size_t wrong = static_cast<std::size_t>(uv.i) * n + uv.j;
    const long long total = static_cast<long long>(count) * (static_cast<long long>(count) - 1) / 2;
    long long others = 0;
    for (std::size_t k = 0; k < count; ++k)
        if (k != wrong)
            others += composite[k];
    composite[wrong] = total - others;

    std::vector<std::uint32_t> l0(count);
    std::vector<bool> seen(count, false);
    for (std::size_t k = 0; k < count; ++k) {
        if (composite[k] < 0 || composite[k] >= static_cast<long long>(count) ||
            seen[static_cast<std::size_t>(composite[k])])
            throw AttackError("recover_permutation: recovered table is not a bijection "
                              "(oracle mismatch)");
        seen[static_cast<std::size_t>(composite[k])] = true;
        l0[k] = static_cast<std::uint32_t>(composite[k]);
    }
    return l0;
}

Image RecoveredKey::decrypt(const Image& cipher) const {
    if (cipher.size() != l0.size())
        throw DimensionError("RecoveredKey::decrypt: cipher size does not match the table");
    const Image permuted = unmask(cipher, mask);
    std::vector<std::uint8_t> plain(cipher.size());
    for (std::size_t t = 0; t < permuted.size(); ++t)
        plain[l0[t]] = permuted.at(t);
    return Image(cipher.height(), cipher.width(), std::move(plain));
}

RecoveredKey recover_equivalent_key(EncryptionOracle& oracle, long long eta, int m, int n) {
    const ProbeSet probes = make_probe_images(eta, m, n);
    const Image q1 = oracle.encrypt_chosen(probes.q1);
    const Image q2 = oracle.encrypt_chosen(probes.q2);
    const Image q3 = oracle.encrypt_chosen(probes.q3);
    if (q1.height() != m || q1.width() != n)
        throw AttackError("recover_equivalent_key: oracle returned wrong dimensions");

    const Position uv = locate_first_pixel(q1, q2, q3);
    Image mask = recover_mask(q1, eta, uv);

    const IndexImages idx = make_index_images(eta, m, n);
    const Image c0 = oracle.encrypt_chosen(idx.o0);
    const Image c1 = oracle.encrypt_chosen(idx.o1);
    std::vector<std::uint32_t> l0 = recover_permutation(c0, c1, mask, uv, m, n);

    return {std::move(mask), std::move(l0), uv, eta};
}

Image attack_decrypt(EncryptionOracle& oracle, const Image& target, long long eta, int m, int n) {
    if (target.height() != m || target.width() != n)
        throw ValidationError("attack_decrypt: target dimensions disagree with M, N");
    return recover_equivalent_key(oracle, eta, m, n).decrypt(target);
}

} // namespace ibea::attack
