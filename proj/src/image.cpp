#include "ibea/image.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace ibea {

namespace {

void check_dims(int height, int width, std::size_t count, const char* what) {
    if (height <= 0 || width <= 0)
        throw ValidationError(std::string(what) + ": dimensions must be positive");
    if (count != static_cast<std::size_t>(height) * static_cast<std::size_t>(width))
        throw ValidationError(std::string(what) + ": pixel count does not match height*width");
}

} // namespace

Image::Image(int height, int width, std::vector<std::uint8_t> pixels)
    : height_(height), width_(width), pixels_(std::move(pixels)) {
    check_dims(height_, width_, pixels_.size(), "Image");
}

Image Image::filled(int height, int width, std::uint8_t value) {
    check_dims(height, width, static_cast<std::size_t>(height) * width, "Image");
    return Image(height, width,
                 std::vector<std::uint8_t>(static_cast<std::size_t>(height) * width, value));
}

WideImage::WideImage(int height, int width, std::vector<long long> pixels)
    : height_(height), width_(width), pixels_(std::move(pixels)) {
    check_dims(height_, width_, pixels_.size(), "WideImage");
}

WideImage WideImage::filled(int height, int width, long long value) {
    check_dims(height, width, static_cast<std::size_t>(height) * width, "WideImage");
    return WideImage(height, width,
                     std::vector<long long>(static_cast<std::size_t>(height) * width, value));
}

WideImage WideImage::from_image(const Image& img) {
    std::vector<long long> px(img.pixels().begin(), img.pixels().end());
    return WideImage(img.height(), img.width(), std::move(px));
}

Image WideImage::to_image() const {
    std::vector<std::uint8_t> px;
    px.reserve(pixels_.size());
    for (long long v : pixels_) {
        if (v < 0 || v > 255)
            throw ValidationError("WideImage::to_image: pixel value " + std::to_string(v) +
                                  " outside [0,255]");
        px.push_back(static_cast<std::uint8_t>(v));
    }
    return Image(height_, width_, std::move(px));
}

long long pixel_sum(const Image& img) {
    long long sum = 0;
    for (std::uint8_t v : img.pixels())
        sum += v;
    return sum;
}

long long pixel_sum(const WideImage& img) {
    long long sum = 0;
    for (long long v : img.pixels())
        sum += v;
    return sum;
}

namespace {

// Reads one whitespace-delimited unsigned decimal token.
long read_header_int(std::istream& in, const char* what) {
    int c = in.get();
    while (c != EOF && std::isspace(c))
        c = in.get();
    if (c == EOF || !std::isdigit(c))
        throw MalformedHeaderError(std::string("PGM header: expected ") + what);
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > std::numeric_limits<int>::max())
            throw MalformedHeaderError(std::string("PGM header: ") + what + " out of range");
        c = in.get();
    }
    if (c != EOF)
        in.unget();
    return value;
}

} // namespace

Image read_pgm(std::istream& in) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5')
        throw MalformedHeaderError("PGM header: missing P5 magic");

    const long width = read_header_int(in, "width");
    const long height = read_header_int(in, "height");
    const long maxval = read_header_int(in, "maxval");
    if (width <= 0 || height <= 0)
        throw MalformedHeaderError("PGM header: non-positive dimensions");
    if (maxval != 255)
        throw UnsupportedMaxvalError("PGM header: maxval " + std::to_string(maxval) +
                                     " unsupported, need 255");

    // Exactly one whitespace byte separates the header from the payload.
    const int sep = in.get();
    if (sep == EOF || !std::isspace(sep))
        throw MalformedHeaderError("PGM header: missing whitespace before payload");

    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<std::uint8_t> px(count);
    in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count)
        throw TruncatedPayloadError("PGM payload: expected " + std::to_string(count) +
                                    " bytes, got " + std::to_string(in.gcount()));
    return Image(static_cast<int>(height), static_cast<int>(width), std::move(px));
}

Image read_pgm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open " + path);
    return read_pgm(in);
}

void write_pgm(const Image& img, std::ostream& out) {
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels().data()),
              static_cast<std::streamsize>(img.size()));
}

void write_pgm_file(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot open " + path + " for writing");
    write_pgm(img, out);
    if (!out)
        throw FormatError("write to " + path + " failed");
}

WideImage read_wide_text(std::istream& in) {
    std::string tag;
    if (!(in >> tag) || tag != "WIDE")
        throw MalformedHeaderError("wide image: missing WIDE tag");
    long long height = 0, width = 0;
    if (!(in >> height >> width) || height <= 0 || width <= 0)
        throw MalformedHeaderError("wide image: bad dimensions");
    const std::size_t count = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    std::vector<long long> px;
    px.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        long long v;
        if (!(in >> v))
            throw TruncatedPayloadError("wide image: expected " + std::to_string(count) +
                                        " values, got " + std::to_string(k));
        px.push_back(v);
    }
    return WideImage(static_cast<int>(height), static_cast<int>(width), std::move(px));
}

WideImage read_wide_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open " + path);
    return read_wide_text(in);
}

void write_wide_text(const WideImage& img, std::ostream& out) {
    out << "WIDE " << img.height() << " " << img.width() << "\n";
    for (int i = 0; i < img.height(); ++i) {
        for (int j = 0; j < img.width(); ++j) {
            if (j > 0)
                out << ' ';
            out << img.at(i, j);
        }
        out << '\n';
    }
}

void write_wide_text_file(const WideImage& img, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw FormatError("cannot open " + path + " for writing");
    write_wide_text(img, out);
    if (!out)
        throw FormatError("write to " + path + " failed");
}

} // namespace ibea
