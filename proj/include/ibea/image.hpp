#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ibea/errors.hpp"

namespace ibea {

// Floored modulus: result always in [0,255], also for negative x.
// x mod 256 = x - 256*floor(x/256).
inline std::uint8_t mod256(long long x) {
    long long r = x % 256;
    if (r < 0)
        r += 256;
    return static_cast<std::uint8_t>(r);
}

inline std::uint8_t mod256_add(long long a, long long b) {
    return mod256(a + b);
}

// 8-bit grayscale image, M rows by N columns, row-major storage.
// Immutable after construction; all free functions on it are pure.
class Image {
public:
    Image(int height, int width, std::vector<std::uint8_t> pixels);

    static Image filled(int height, int width, std::uint8_t value);

    int height() const { return height_; }  // M
    int width() const { return width_; }    // N
    std::size_t size() const { return pixels_.size(); }

    std::uint8_t at(int i, int j) const {
        return pixels_[static_cast<std::size_t>(i) * width_ + j];
    }
    std::uint8_t at(std::size_t k) const { return pixels_[k]; }

    const std::vector<std::uint8_t>& pixels() const { return pixels_; }

    bool operator==(const Image&) const = default;

private:
    int height_;
    int width_;
    std::vector<std::uint8_t> pixels_;
};

// Image with signed 64-bit pixels. Holds values a byte cannot, e.g. a
// pixel carrying the whole plaintext sum or a negative balancing entry.
class WideImage {
public:
    WideImage(int height, int width, std::vector<long long> pixels);

    static WideImage filled(int height, int width, long long value);
    static WideImage from_image(const Image& img);

    // Fails with ValidationError unless every pixel is in [0,255].
    Image to_image() const;

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return pixels_.size(); }

    long long at(int i, int j) const {
        return pixels_[static_cast<std::size_t>(i) * width_ + j];
    }
    long long at(std::size_t k) const { return pixels_[k]; }

    const std::vector<long long>& pixels() const { return pixels_; }

    bool operator==(const WideImage&) const = default;

private:
    int height_;
    int width_;
    std::vector<long long> pixels_;
};

// Exact integer sum of all pixels, no modular reduction.
long long pixel_sum(const Image& img);
long long pixel_sum(const WideImage& img);

// Binary PGM ("P5"), maxval 255 only. Distinct errors for a malformed
// header, an unsupported maxval and a truncated payload.
Image read_pgm(std::istream& in);
Image read_pgm_file(const std::string& path);
void write_pgm(const Image& img, std::ostream& out);
void write_pgm_file(const Image& img, const std::string& path);

// Wide-image text format: first line "WIDE M N", then M lines of N
// decimal integers separated by single spaces, newline-terminated.
WideImage read_wide_text(std::istream& in);
WideImage read_wide_text_file(const std::string& path);
void write_wide_text(const WideImage& img, std::ostream& out);
void write_wide_text_file(const WideImage& img, const std::string& path);

} // namespace ibea
