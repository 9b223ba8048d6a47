#include "ibea/metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

#include <json.hpp>

#include "ibea/errors.hpp"

using json = nlohmann::json;

namespace ibea::metrics {

Rational Rational::of(long long num, long long den) {
    if (den == 0)
        throw ValidationError("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(std::llabs(num), den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational{num, den};
}

std::string Rational::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Histogram histogram(const Image& img) {
    Histogram bins{};
    for (std::uint8_t v : img.pixels())
        ++bins[v];
    return bins;
}

std::pair<std::uint64_t, std::uint64_t> bitplane_histogram(const Image& img, int plane) {
    if (plane < 0 || plane > 7)
        throw ValidationError("bitplane_histogram: plane must be in 0..7");
    std::uint64_t ones = 0;
    for (std::uint8_t v : img.pixels())
        ones += (v >> plane) & 1u;
    return {img.size() - ones, ones};
}

double histogram_variance(std::span<const std::uint64_t> bins) {
    if (bins.empty())
        throw ValidationError("histogram_variance: no bins");
    const double n = static_cast<double>(bins.size());
    double mean = 0.0;
    for (std::uint64_t h : bins)
        mean += static_cast<double>(h);
    mean /= n;
    double acc = 0.0;
    for (std::uint64_t h : bins) {
        const double d = static_cast<double>(h) - mean;
        acc += d * d;
    }
    return acc / n;
}

Rational histogram_variance_exact(std::span<const std::uint64_t> bins) {
    if (bins.empty())
        throw ValidationError("histogram_variance_exact: no bins");
    const long long n = static_cast<long long>(bins.size());
    long long sum = 0, sum_sq = 0;
    for (std::uint64_t h : bins) {
        sum += static_cast<long long>(h);
        sum_sq += static_cast<long long>(h) * static_cast<long long>(h);
    }
    return Rational::of(n * sum_sq - sum * sum, n * n);
}

double shannon_entropy(const Image& img) {
    const Histogram bins = histogram(img);
    const double total = static_cast<double>(img.size());
    double entropy = 0.0;
    for (std::uint64_t h : bins) {
        if (h == 0)
            continue; // 0*log(0) = 0
        const double p = static_cast<double>(h) / total;
        entropy -= p * std::log2(p);
    }
    return entropy;
}

double adjacent_correlation(const Image& img, Direction dir) {
    const int di = dir == Direction::horizontal ? 0 : 1;
    const int dj = dir == Direction::vertical ? 0 : 1;

    long long n = 0;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int i = 0; i + di < img.height(); ++i) {
        for (int j = 0; j + dj < img.width(); ++j) {
            const double x = img.at(i, j);
            const double y = img.at(i + di, j + dj);
            ++n;
            sx += x;
            sy += y;
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
        }
    }
    if (n < 2)
        throw ValidationError("adjacent_correlation: fewer than 2 pixel pairs");
    const double vx = n * sxx - sx * sx;
    const double vy = n * syy - sy * sy;
    if (vx <= 0.0 || vy <= 0.0)
        throw UndefinedCorrelationError("adjacent_correlation: zero variance along one coordinate");
    return (n * sxy - sx * sy) / std::sqrt(vx * vy);
}

namespace {

void require_same_shape(const Image& a, const Image& b, const char* what) {
    if (a.height() != b.height() || a.width() != b.width())
        throw DimensionError(std::string(what) + ": image dimensions disagree");
}

} // namespace

double npcr(const Image& c1, const Image& c2) {
    require_same_shape(c1, c2, "npcr");
    std::uint64_t diff = 0;
    for (std::size_t k = 0; k < c1.size(); ++k)
        diff += c1.at(k) != c2.at(k);
    return 100.0 * static_cast<double>(diff) / static_cast<double>(c1.size());
}

double uaci(const Image& c1, const Image& c2) {
    require_same_shape(c1, c2, "uaci");
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < c1.size(); ++k)
        acc += static_cast<std::uint64_t>(std::llabs(static_cast<long long>(c1.at(k)) - c2.at(k)));
    return 100.0 * static_cast<double>(acc) / (255.0 * static_cast<double>(c1.size()));
}

namespace {

long long ceil_log2(long long v) {
    long long bits = 0;
    long long pow2 = 1;
    while (pow2 < v) {
        pow2 *= 2;
        ++bits;
    }
    return bits;
}

} // namespace

Rational keystream_utilization(int m, long long d) {
    if (m < 1)
        throw ValidationError("keystream_utilization: m must be >= 1");
    if (d < 2)
        throw ValidationError("keystream_utilization: D must be >= 2");
    return Rational::of(ceil_log2(d), m * ceil_log2(10));
}

namespace {

json opt_to_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

} // namespace

std::string MetricReport::to_json() const {
    json j;
    j["source"] = source;
    if (!pair_source.empty())
        j["pair_source"] = pair_source;
    j["M"] = height;
    j["N"] = width;
    j["entropy"] = entropy;
    j["hist_variance"] = hist_variance;
    j["corr_h"] = opt_to_json(corr_h);
    j["corr_v"] = opt_to_json(corr_v);
    j["corr_d"] = opt_to_json(corr_d);
    j["npcr"] = opt_to_json(npcr);
    j["uaci"] = opt_to_json(uaci);
    return j.dump(2);
}

namespace {

std::optional<double> correlation_or_null(const Image& img, Direction dir) {
    try {
        return adjacent_correlation(img, dir);
    } catch (const UndefinedCorrelationError&) {
        return std::nullopt;
    }
}

} // namespace

MetricReport analyze(const Image& img, std::string source) {
    MetricReport report;
    report.height = img.height();
    report.width = img.width();
    report.source = std::move(source);
    report.entropy = shannon_entropy(img);
    const Histogram bins = histogram(img);
    report.hist_variance = histogram_variance(bins);
    report.corr_h = correlation_or_null(img, Direction::horizontal);
    report.corr_v = correlation_or_null(img, Direction::vertical);
    report.corr_d = correlation_or_null(img, Direction::diagonal);
    return report;
}

void analyze_pair(MetricReport& report, const Image& img, const Image& other,
                  std::string pair_source) {
    report.npcr = npcr(img, other);
    report.uaci = uaci(img, other);
    report.pair_source = std::move(pair_source);
}

} // namespace ibea::metrics
