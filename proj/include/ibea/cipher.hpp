#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ibea/image.hpp"

namespace ibea::cipher {

// The secret key. a, b drive the position permutation; (x0, y0, mu, n)
// the block split; (z0, r, s0) the two keystream generators. s0 is a
// triple: s0[0] in [0,256) seeds the integer-logistic sequence (integer
// values are accepted as-is as reals), s0[1] and s0[2] in [0,1) offset
// the per-block seeds of the third and fourth sub-image.
struct KeyMaterial {
    int a = 0;
    int b = 0;
    double x0 = 0.0;
    double y0 = 0.0;
    double z0 = 0.0;
    double mu = 0.5;
    double r = 3.99;
    std::array<double, 3> s0 = {0.0, 0.0, 0.0};
    long n = 10000;

    // Range checks everything that does not need the image size.
    // a, b are additionally required to be < N when a schedule is derived.
    void validate() const;

    // Strict JSON object with fields a, b, x0, y0, z0, mu, r, s0, n.
    // Unknown fields are rejected; n may be omitted (defaults to 10^4).
    static KeyMaterial from_json(const std::string& text);
    static KeyMaterial load(const std::string& path);
    std::string to_json() const;
};

// Everything the key schedule derives from (key, eta, M, N): the
// plaintext-coupled Baker seed, the block split (u, v) and the four
// per-block logistic seeds z0(1..4).
struct ScheduleState {
    double baker_x0 = 0.0;
    double baker_y0 = 0.0;
    int u = 1;             // row split, clamped into [1, M-1]
    int v = 1;             // column split, clamped into [1, N-1]
    std::array<double, 4> z0 = {0.0, 0.0, 0.0, 0.0};
    long long eta = 0;
};

// Bijection on linear pixel indices: dest(k) is where plain index k
// lands in the permuted image.
class PermutationMap {
public:
    explicit PermutationMap(std::vector<std::uint32_t> dest);

    std::size_t size() const { return dest_.size(); }
    std::uint32_t dest(std::size_t k) const { return dest_[k]; }
    const std::vector<std::uint32_t>& table() const { return dest_; }

    PermutationMap inverse() const;

private:
    std::vector<std::uint32_t> dest_;
};

// mean = eta/(M*N); Baker seed = ((x0 + mean/256) mod 1, (y0 + mean/256) mod 1);
// (u, v) from n Baker iterations, floor-scaled and clamped; z0(1) =
// (z0 + mean/256) mod 1, z0(2) = (z0(1)+0.5) mod 1, z0(3) = (z0(1)+s0[1]) mod 1,
// z0(4) = (z0(2)+s0[2]) mod 1. Requires a square image and eta >= 0.
ScheduleState derive_schedule(const KeyMaterial& key, long long eta, int m, int n);

// Arnold position for every pixel, composed with the transposition of
// positions (0,0) and (u,v). Plain index 0 always lands at u*N+v.
PermutationMap build_permutation(const KeyMaterial& key, const ScheduleState& sched, int m, int n);

// t_p = h1 of the integer-logistic orbit of s01, seed discarded, 0-based.
std::vector<std::uint8_t> generate_t_sequence(double s01, std::size_t len);

// m_p = h2 of the logistic orbit of z0k, seed discarded, 0-based.
std::vector<std::uint8_t> generate_m_sequence(double z0k, double r, std::size_t len);

// Keystream byte for one pixel:
//   (m*t) mod 256      if m == 255
//   ((m+1)*t) mod 256  otherwise
inline std::uint8_t mask_entry(std::uint8_t m, std::uint8_t t) {
    const long long mm = m;
    return mod256(m == 255 ? mm * t : (mm + 1) * t);
}

// The equivalent additive keystream P: the grid splits at (u,v) into four
// sub-rectangles; within sub-image k with Nk columns, local pixel (i,j)
// indexes both sequences with p = i*Nk + j. The t-sequence is shared and
// re-read from its start per sub-image; the m-sequence restarts from z0(k).
Image build_mask(const KeyMaterial& key, long long eta, int m, int n);
Image build_mask(const KeyMaterial& key, const ScheduleState& sched, int m, int n);

struct EncryptResult {
    Image cipher;
    long long eta;
};

// cipher = (permuted plain + mask) mod 256. Wide inputs are reduced mod
// 256 only at this final addition; eta is their exact sum.
EncryptResult encrypt(const Image& img, const KeyMaterial& key);
EncryptResult encrypt(const WideImage& img, const KeyMaterial& key);

// The same cipher expressed as the literal per-block procedure: permute
// pixel-by-pixel, slice the four sub-images, run both keystreams inline
// over each block, reassemble. Kept as an independent route so the
// mask/permutation decomposition can be checked against it.
Image encrypt_stepwise(const Image& img, const KeyMaterial& key);
Image encrypt_stepwise(const WideImage& img, const KeyMaterial& key);

// Exact inverse given the plaintext pixel sum (side information the
// receiver must obtain out of band).
Image decrypt(const Image& cipher, const KeyMaterial& key, long long eta);

} // namespace ibea::cipher
