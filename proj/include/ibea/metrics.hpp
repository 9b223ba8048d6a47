#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "ibea/image.hpp"

namespace ibea::metrics {

// Exact reduced fraction, denominator always positive.
struct Rational {
    long long num = 0;
    long long den = 1;

    static Rational of(long long num, long long den);

    bool operator==(const Rational&) const = default;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
};

using Histogram = std::array<std::uint64_t, 256>;

Histogram histogram(const Image& img);

// (count of 0-bits, count of 1-bits) at the given bit position, 0..7.
std::pair<std::uint64_t, std::uint64_t> bitplane_histogram(const Image& img, int plane);

// Population variance of the bin counts: (1/n) * sum (h_i - mean)^2.
// Accepts any bin count so small illustrative histograms work too.
double histogram_variance(std::span<const std::uint64_t> bins);

// Same quantity as an exact fraction: (n*sum(h^2) - (sum h)^2) / n^2.
Rational histogram_variance_exact(std::span<const std::uint64_t> bins);

// -sum p_i*log2(p_i) over nonzero byte frequencies; in [0,8].
double shannon_entropy(const Image& img);

enum class Direction { horizontal, vertical, diagonal };

// Pearson correlation over all adjacent pixel pairs in the direction.
// Throws UndefinedCorrelationError when either coordinate has zero
// variance (e.g. a constant image).
double adjacent_correlation(const Image& img, Direction dir);

// 100 * (#positions where the images differ) / (M*N)
double npcr(const Image& c1, const Image& c2);

// 100 * mean(|c1 - c2| / 255)
double uaci(const Image& c1, const Image& c2);

// Useful fraction of the work spent quantizing a chaotic iterate with
// floor(x * 10^m) mod D: ceil(log2 D) / (m * ceil(log2 10)).
Rational keystream_utilization(int m, long long d);

// Named scalar results for one image (optionally a pair), serialized
// with fixed field names: entropy, hist_variance, corr_h, corr_v,
// corr_d, npcr, uaci. Correlations are null for degenerate images;
// npcr/uaci are null unless a pair was analyzed.
struct MetricReport {
    int height = 0;
    int width = 0;
    std::string source;
    std::string pair_source;

    double entropy = 0.0;
    double hist_variance = 0.0;
    std::optional<double> corr_h, corr_v, corr_d;
    std::optional<double> npcr, uaci;

    std::string to_json() const;
};

MetricReport analyze(const Image& img, std::string source = {});
void analyze_pair(MetricReport& report, const Image& img, const Image& other,
                  std::string pair_source = {});

} // namespace ibea::metrics
