#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace verivote {

// Compensated (Kahan-Neumaier) accumulator. Interim probabilities and
// constraint slacks must classify exactly-binding rational inputs as binding,
// so plain left-to-right summation is not good enough.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// Root of a nondecreasing function on [lo, hi]. Requires f(lo) <= 0 <= f(hi);
// converges to the boundary between the sign regions.
double bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                         int iterations = 200);

// Maximizer of f on [lo, hi] by golden-section search. Returns argmax.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  int iterations = 90);

struct Quadrature {
    std::vector<double> nodes;   // on (0,1)
    std::vector<double> weights; // sum to 1
};

// Gauss-Legendre rule mapped to (0,1); cached per order.
const Quadrature& gauss_legendre_01(int order = 256);

// Integral of f over (a,b) with the 256-point rule mapped onto the interval.
double integrate(const std::function<double(double)>& f, double a, double b);

double normal_pdf(double x);
double normal_cdf(double x);
// Inverse standard normal CDF (rational approximation plus one Halley step).
double normal_quantile(double p);

// Deterministic uniform double in [0,1) from a 64-bit generator state; avoids
// std::uniform_real_distribution, whose output is implementation-defined.
template <typename Rng>
double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace verivote
