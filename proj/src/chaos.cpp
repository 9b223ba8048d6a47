#include "ibea/chaos.hpp"

#include <cmath>

#include "ibea/errors.hpp"
#include "ibea/image.hpp"

namespace ibea::chaos {

BakerState baker_step(BakerState s, double mu) {
    if (!(mu > 0.0 && mu < 1.0))
        throw ValidationError("baker_step: mu must be in (0,1) exclusive");
    if (s.x <= mu)
        return {s.x / mu, mu * s.y};
    return {(s.x - mu) / (1.0 - mu), (1.0 - mu) * s.y + mu};
}

BakerState baker_iterate(double x0, double y0, double mu, long n) {
    if (n < 1)
        throw ValidationError("baker_iterate: iteration count must be >= 1");
    BakerState s{x0, y0};
    for (long i = 0; i < n; ++i)
        s = baker_step(s, mu);
    return s;
}

std::pair<int, int> arnold_map(int i, int j, int a, int b, int size) {
    const long long p = (static_cast<long long>(i) + static_cast<long long>(b) * j) % size;
    const long long q = (static_cast<long long>(a) * i +
                         (static_cast<long long>(a) * b + 1) * j) %
                        size;
    return {static_cast<int>(p), static_cast<int>(q)};
}

double logistic_real_step(double x, double r) {
    return r * x * (1.0 - x);
}

double logistic_int_step(double x) {
    return 4.0 * x * (256.0 - x) / 256.0;
}

std::uint8_t quantize_h1(double x) {
    return mod256(static_cast<long long>(std::floor(x * 1.0e6)));
}

std::uint8_t quantize_h2(double x) {
    return mod256(static_cast<long long>(std::floor(x * 1.0e5)));
}

} // namespace ibea::chaos
