#include "ibea/cipher.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ibea/chaos.hpp"
#include "ibea/errors.hpp"

using json = nlohmann::json;

namespace ibea::cipher {

namespace {

double mod1(double x) {
    return x - std::floor(x);
}

int clamp_split(long value, int upper) {
    // floor-scaled coordinate, forced into [1, upper-1] so that all four
    // sub-images are non-empty and the (0,0)<->(u,v) swap is a real swap.
    return static_cast<int>(std::clamp(value, 1L, static_cast<long>(upper - 1)));
}

struct Rect {
    int r0, r1, c0, c1; // rows [r0,r1), cols [c0,c1)
    int rows() const { return r1 - r0; }
    int cols() const { return c1 - c0; }
};

std::array<Rect, 4> split_blocks(int m, int n, int u, int v) {
    return {Rect{0, u, 0, v}, Rect{0, u, v, n}, Rect{u, m, 0, v}, Rect{u, m, v, n}};
}

void require_square(int m, int n) {
    if (m != n)
        throw ValidationError("image must be square, got " + std::to_string(m) + "x" +
                              std::to_string(n));
    if (m < 2)
        throw ValidationError("image must be at least 2x2");
}

} // namespace

void KeyMaterial::validate() const {
    if (a < 0 || b < 0)
        throw ValidationError("key: a and b must be nonnegative");
    if (x0 < 0.0 || x0 > 1.0)
        throw ValidationError("key: x0 must be in [0,1]");
    if (y0 < 0.0 || y0 > 1.0)
        throw ValidationError("key: y0 must be in [0,1]");
    if (z0 < 0.0 || z0 > 1.0)
        throw ValidationError("key: z0 must be in [0,1]");
    if (!(mu > 0.0 && mu < 1.0))
        throw ValidationError("key: mu must be in (0,1) exclusive");
    if (!(r > 3.5699 && r <= 4.0))
        throw ValidationError("key: r must be in (3.5699, 4]");
    if (s0[0] < 0.0 || s0[0] >= 256.0)
        throw ValidationError("key: s0[0] must be in [0,256)");
    if (s0[1] < 0.0 || s0[1] >= 1.0)
        throw ValidationError("key: s0[1] must be in [0,1)");
    if (s0[2] < 0.0 || s0[2] >= 1.0)
        throw ValidationError("key: s0[2] must be in [0,1)");
    if (n < 1)
        throw ValidationError("key: n must be >= 1");
}

KeyMaterial KeyMaterial::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("key file: ") + e.what());
    }
    if (!j.is_object())
        throw FormatError("key file: top level must be an object");

    static const char* known[] = {"a", "b", "x0", "y0", "z0", "mu", "r", "s0", "n"};
    for (const auto& [field, value] : j.items()) {
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return field == k; }) == std::end(known))
            throw ValidationError("key file: unknown field \"" + field + "\"");
    }
    for (const char* field : {"a", "b", "x0", "y0", "z0", "mu", "r", "s0"}) {
        if (!j.contains(field))
            throw ValidationError("key file: missing field \"" + std::string(field) + "\"");
    }

    KeyMaterial key;
    try {
        if (!j["a"].is_number_integer() || !j["b"].is_number_integer())
            throw ValidationError("key file: a and b must be integers");
        key.a = j["a"].get<int>();
        key.b = j["b"].get<int>();
        key.x0 = j["x0"].get<double>();
        key.y0 = j["y0"].get<double>();
        key.z0 = j["z0"].get<double>();
        key.mu = j["mu"].get<double>();
        key.r = j["r"].get<double>();
        if (!j["s0"].is_array() || j["s0"].size() != 3)
            throw ValidationError("key file: s0 must be an array of 3 numbers");
        for (int i = 0; i < 3; ++i)
            key.s0[i] = j["s0"][i].get<double>();
        if (j.contains("n")) {
            if (!j["n"].is_number_integer())
                throw ValidationError("key file: n must be an integer");
            key.n = j["n"].get<long>();
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("key file: ") + e.what());
    }
    key.validate();
    return key;
}

KeyMaterial KeyMaterial::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open key file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string KeyMaterial::to_json() const {
    json j;
    j["a"] = a;
    j["b"] = b;
    j["x0"] = x0;
    j["y0"] = y0;
    j["z0"] = z0;
    j["mu"] = mu;
    j["r"] = r;
    j["s0"] = {s0[0], s0[1], s0[2]};
    j["n"] = n;
    return j.dump(2);
}

PermutationMap::PermutationMap(std::vector<std::uint32_t> dest) : dest_(std::move(dest)) {
    std::vector<bool> seen(dest_.size(), false);
    for (std::uint32_t d : dest_) {
        if (d >= dest_.size() || seen[d])
            throw ValidationError("PermutationMap: table is not a bijection");
        seen[d] = true;
    }
}

PermutationMap PermutationMap::inverse() const {
    std::vector<std::uint32_t> inv(dest_.size());
    for (std::size_t k = 0; k < dest_.size(); ++k)
        inv[dest_[k]] = static_cast<std::uint32_t>(k);
    return PermutationMap(std::move(inv));
}

ScheduleState derive_schedule(const KeyMaterial& key, long long eta, int m, int n) {
    key.validate();
    require_square(m, n);
    if (key.a >= n || key.b >= n)
        throw ValidationError("key: a and b must be < N");
    if (eta < 0)
        throw ValidationError("derive_schedule: eta must be nonnegative");

    const double mean = static_cast<double>(eta) / (static_cast<double>(m) * n);
    const double add = mean / 256.0;

    ScheduleState sched;
    sched.eta = eta;
    sched.baker_x0 = mod1(key.x0 + add);
    sched.baker_y0 = mod1(key.y0 + add);

    const chaos::BakerState end = chaos::baker_iterate(sched.baker_x0, sched.baker_y0, key.mu, key.n);
    sched.u = clamp_split(static_cast<long>(std::floor(m * end.x)), m);
    sched.v = clamp_split(static_cast<long>(std::floor(n * end.y)), n);

    sched.z0[0] = mod1(key.z0 + add);
    sched.z0[1] = mod1(sched.z0[0] + 0.5);
    sched.z0[2] = mod1(sched.z0[0] + key.s0[1]);
    sched.z0[3] = mod1(sched.z0[1] + key.s0[2]);
    return sched;
}

PermutationMap build_permutation(const KeyMaterial& key, const ScheduleState& sched, int m, int n) {
    require_square(m, n);
    const std::size_t count = static_cast<std::size_t>(m) * n;
    const std::uint32_t swap_target = static_cast<std::uint32_t>(sched.u) * n + sched.v;

    std::vector<std::uint32_t> dest(count);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            auto [p, q] = chaos::arnold_map(i, j, key.a, key.b, n);
            std::uint32_t d = static_cast<std::uint32_t>(p) * n + q;
            // Step-2 swap of positions (0,0) and (u,v), applied after the map.
            if (d == 0)
                d = swap_target;
            else if (d == swap_target)
                d = 0;
            dest[static_cast<std::size_t>(i) * n + j] = d;
        }
    }
    return PermutationMap(std::move(dest));
}

std::vector<std::uint8_t> generate_t_sequence(double s01, std::size_t len) {
    std::vector<std::uint8_t> t(len);
    double s = s01;
    for (std::size_t p = 0; p < len; ++p) {
        s = chaos::logistic_int_step(s);
        t[p] = chaos::quantize_h1(s);
    }
    return t;
}

std::vector<std::uint8_t> generate_m_sequence(double z0k, double r, std::size_t len) {
    std::vector<std::uint8_t> mseq(len);
    double z = z0k;
    for (std::size_t p = 0; p < len; ++p) {
        z = chaos::logistic_real_step(z, r);
        mseq[p] = chaos::quantize_h2(z);
    }
    return mseq;
}

Image build_mask(const KeyMaterial& key, const ScheduleState& sched, int m, int n) {
    require_square(m, n);
    const std::size_t count = static_cast<std::size_t>(m) * n;
    const std::vector<std::uint8_t> t = generate_t_sequence(key.s0[0], count);

    std::vector<std::uint8_t> mask(count);
    const auto blocks = split_blocks(m, n, sched.u, sched.v);
    for (int k = 0; k < 4; ++k) {
        const Rect& blk = blocks[k];
        const std::size_t blk_len = static_cast<std::size_t>(blk.rows()) * blk.cols();
        const std::vector<std::uint8_t> mseq = generate_m_sequence(sched.z0[k], key.r, blk_len);
        for (int i = 0; i < blk.rows(); ++i) {
            for (int j = 0; j < blk.cols(); ++j) {
                const std::size_t p = static_cast<std::size_t>(i) * blk.cols() + j;
                const std::size_t pos =
                    static_cast<std::size_t>(blk.r0 + i) * n + (blk.c0 + j);
                mask[pos] = mask_entry(mseq[p], t[p]);
            }
        }
    }
    return Image(m, n, std::move(mask));
}

Image build_mask(const KeyMaterial& key, long long eta, int m, int n) {
    return build_mask(key, derive_schedule(key, eta, m, n), m, n);
}

namespace {

template <class Img>
EncryptResult encrypt_impl(const Img& img, const KeyMaterial& key) {
    const int m = img.height(), n = img.width();
    const long long eta = pixel_sum(img);
    const ScheduleState sched = derive_schedule(key, eta, m, n);
    const PermutationMap perm = build_permutation(key, sched, m, n);
    const Image mask = build_mask(key, sched, m, n);

    // Permute, then add the mask pixelwise. Wide values wrap here.
    std::vector<long long> permuted(img.size());
    for (std::size_t k = 0; k < img.size(); ++k)
        permuted[perm.dest(k)] = img.at(k);
    std::vector<std::uint8_t> out(img.size());
    for (std::size_t k = 0; k < img.size(); ++k)
        out[k] = mod256_add(permuted[k], mask.at(k));
    return {Image(m, n, std::move(out)), eta};
}

template <class Img>
Image encrypt_stepwise_impl(const Img& img, const KeyMaterial& key) {
    const int m = img.height(), n = img.width();
    const ScheduleState sched = derive_schedule(key, pixel_sum(img), m, n);

    // Position permutation, pixel by pixel, then the (0,0)<->(u,v) swap.
    std::vector<long long> permuted(img.size());
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            auto [p, q] = chaos::arnold_map(i, j, key.a, key.b, n);
            permuted[static_cast<std::size_t>(p) * n + q] = img.at(i, j);
        }
    }
    std::swap(permuted[0], permuted[static_cast<std::size_t>(sched.u) * n + sched.v]);

    // Slice out the four sub-images.
    const auto blocks = split_blocks(m, n, sched.u, sched.v);
    std::array<std::vector<long long>, 4> subs;
    for (int k = 0; k < 4; ++k) {
        const Rect& blk = blocks[k];
        subs[k].reserve(static_cast<std::size_t>(blk.rows()) * blk.cols());
        for (int i = blk.r0; i < blk.r1; ++i)
            for (int j = blk.c0; j < blk.c1; ++j)
                subs[k].push_back(permuted[static_cast<std::size_t>(i) * n + j]);
    }

    const std::vector<std::uint8_t> t = generate_t_sequence(key.s0[0], img.size());

    // Encrypt each block with its own logistic orbit, the shared t-sequence
    // read from the start.
    for (int k = 0; k < 4; ++k) {
        double z = sched.z0[k];
        for (std::size_t p = 0; p < subs[k].size(); ++p) {
            z = chaos::logistic_real_step(z, key.r);
            const std::uint8_t mp = chaos::quantize_h2(z);
            const std::uint8_t tp = t[p];
            const long long ks =
                mp == 255 ? static_cast<long long>(mp) * tp : (static_cast<long long>(mp) + 1) * tp;
            subs[k][p] = mod256_add(subs[k][p], ks);
        }
    }

    // Reassemble in the original block order.
    std::vector<std::uint8_t> out(img.size());
    for (int k = 0; k < 4; ++k) {
        const Rect& blk = blocks[k];
        std::size_t p = 0;
        for (int i = blk.r0; i < blk.r1; ++i)
            for (int j = blk.c0; j < blk.c1; ++j)
                out[static_cast<std::size_t>(i) * n + j] =
                    static_cast<std::uint8_t>(subs[k][p++]);
    }
    return Image(m, n, std::move(out));
}

} // namespace

EncryptResult encrypt(const Image& img, const KeyMaterial& key) {
    return encrypt_impl(img, key);
}

EncryptResult encrypt(const WideImage& img, const KeyMaterial& key) {
    return encrypt_impl(img, key);
}

Image encrypt_stepwise(const Image& img, const KeyMaterial& key) {
    return encrypt_stepwise_impl(img, key);
}

Image encrypt_stepwise(const WideImage& img, const KeyMaterial& key) {
    return encrypt_stepwise_impl(img, key);
}

Image decrypt(const Image& cipher, const KeyMaterial& key, long long eta) {
    const int m = cipher.height(), n = cipher.width();
    const ScheduleState sched = derive_schedule(key, eta, m, n);
    const PermutationMap perm = build_permutation(key, sched, m, n);
    const Image mask = build_mask(key, sched, m, n);

    std::vector<std::uint8_t> plain(cipher.size());
    for (std::size_t k = 0; k < cipher.size(); ++k) {
        const std::uint8_t permuted =
            mod256(static_cast<long long>(cipher.at(perm.dest(k))) - mask.at(perm.dest(k)));
        plain[k] = permuted;
    }
    return Image(m, n, std::move(plain));
}

} // namespace ibea::cipher
