#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ibea/image.hpp"
#include "ibea/oracle.hpp"

// Five-chosen-plaintext cryptanalysis of the cipher, written purely
// against the EncryptionOracle interface. This header must stay free of
// any cipher/key includes; the build enforces it by linking the attack
// library against the image library alone.
namespace ibea::attack {

struct Position {
    int i = 0;
    int j = 0;
    bool operator==(const Position&) const = default;
};

// The three localization probes. All share pixel sum eta:
//   q1 = zeros except q1(0,0) = eta
//   q2 = zeros except q2(0,0) = eta-1, q2(0,1) = 1
//   q3 = zeros except q3(0,0) = eta-1, q3(0,2) = 1
struct ProbeSet {
    WideImage q1, q2, q3;
};

// Requires eta >= 1 (q2/q3 carry eta-1), M >= 2 and N >= 3.
ProbeSet make_probe_images(long long eta, int m, int n);

// Intersects the two differing-position sets of (Q1,Q2) and (Q1,Q3).
// Each set must have exactly two elements and the intersection must be a
// single position - the permuted location of the plain first pixel.
Position locate_first_pixel(const Image& c1, const Image& c2, const Image& c3);

// Q1 equals the equivalent mask everywhere except at (u,v), where the
// probe's eta was added in; subtract it back out.
Image recover_mask(const Image& c1, long long eta, Position uv);

// (cipher - mask) mod 256 pixelwise: recovers the permuted image.
Image unmask(const Image& cipher, const Image& mask);

// Base-256 digit images of the row-major linear index, first pixels
// adjusted so each sums to eta. Two digits only, so M*N <= 65536.
struct IndexImages {
    WideImage o0; // low digit: (i*N+j) mod 256
    WideImage o1; // high digit: floor((i*N+j)/256)
};

IndexImages make_index_images(long long eta, int m, int n);

// Unmasks the two index ciphers, reads the digits back together as
// composite = 256*high + low, repairs the (u,v) entry from the known
// total sum of 0..MN-1, and returns the table l0 mapping each permuted
// linear position to its source plain index. Fails unless bijective.
std::vector<std::uint32_t> recover_permutation(const Image& c0, const Image& c1,
                                               const Image& mask, Position uv, int m, int n);

// The equivalent key: enough to decrypt any cipher produced under the
// same secret key from a plaintext with the same pixel sum.
struct RecoveredKey {
    Image mask;
    std::vector<std::uint32_t> l0; // permuted linear position -> plain linear index
    Position first_pixel;          // (u,v)
    long long eta = 0;

    // Unmask + unpermute. No oracle involved.
    Image decrypt(const Image& cipher) const;
};

// The full pipeline: probes -> locate -> mask -> index images ->
// permutation. Exactly five oracle queries.
RecoveredKey recover_equivalent_key(EncryptionOracle& oracle, long long eta, int m, int n);

// recover_equivalent_key followed by RecoveredKey::decrypt on the target.
Image attack_decrypt(EncryptionOracle& oracle, const Image& target, long long eta, int m, int n);

// Out-of-process oracle. Per query it launches the configured command
// (via /bin/sh -c), writes one wide-image text document to the child's
// stdin, and reads one binary PGM from its stdout. A nonzero exit status
// is an oracle error.
class SubprocessOracle final : public EncryptionOracle {
public:
    explicit SubprocessOracle(std::string command);

    Image encrypt_chosen(const WideImage& chosen) override;

    const std::string& command() const { return command_; }

private:
    std::string command_;
};

} // namespace ibea::attack
