#pragma once

#include <cstdint>
#include <utility>

namespace ibea::chaos {

struct BakerState {
    double x = 0.0;
    double y = 0.0;
};

// One application of the two-branch Baker map on the unit square:
//   (x/mu, mu*y)                    if 0 <= x <= mu
//   ((x-mu)/(1-mu), (1-mu)*y + mu)  if mu < x <= 1
// x = 0 is folded into the first branch so the map is total on [0,1].
// mu must lie strictly inside (0,1); both endpoints divide by zero.
BakerState baker_step(BakerState s, double mu);

// n-fold composition of baker_step starting from (x0, y0).
BakerState baker_iterate(double x0, double y0, double mu, long n);

// Torus automorphism with matrix [[1, b], [a, a*b+1]] applied to the
// column (i, j), both coordinates reduced mod size. Bijective on
// {0..size-1}^2 (determinant 1) and fixes the origin.
std::pair<int, int> arnold_map(int i, int j, int a, int b, int size);

// r*x*(1-x)
double logistic_real_step(double x, double r);

// 4*x*(256-x)/256, the logistic map rescaled onto [0,256].
double logistic_int_step(double x);

// floor(x*1e6) mod 256
std::uint8_t quantize_h1(double x);

// floor(x*1e5) mod 256
std::uint8_t quantize_h2(double x);

} // namespace ibea::chaos
