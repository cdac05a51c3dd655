#pragma once

// Numerical plumbing shared by every module: intervals, adaptive quadrature,
// bracketed root refinement, and a portable seeded uniform stream.

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace confdist {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed interval [lo, hi]; either end may be infinite.
struct Interval {
    double lo = -kInf;
    double hi = kInf;

    bool contains(double x) const noexcept { return x >= lo && x <= hi; }
    bool finite() const noexcept { return lo > -kInf && hi < kInf; }
    bool empty() const noexcept { return !(lo <= hi); }
    double clamp(double x) const noexcept { return x < lo ? lo : (x > hi ? hi : x); }
    Interval intersect(const Interval& o) const noexcept {
        return {lo > o.lo ? lo : o.lo, hi < o.hi ? hi : o.hi};
    }
    std::string str() const;
};

using RealFunction = std::function<double(double)>;

// Adaptive Gauss-Kronrod (15 point) integral of f over [a, b]. Infinite limits
// are allowed. Terminates when the error estimate is below
// max(abs_tol, rel_tol * L1). Throws NumericError on a non-finite result.
double integrate(const RealFunction& f, double a, double b, double abs_tol = 1e-12,
                 double rel_tol = 1e-13);

// Root of f in [lo, hi] given f(lo), f(hi) of opposite sign (or one of them 0).
// Refines to nearly full double precision. Throws NumericError if not bracketed.
double solve_bracketed(const RealFunction& f, double lo, double hi, double f_lo, double f_hi,
                       int max_iter = 200);

// start, start + step, ... up to stop inclusive (within half a step).
// Throws InvalidParameter unless step > 0 and stop >= start.
std::vector<double> step_grid(double start, double stop, double step);

// Deterministic stream of uniforms strictly inside (0, 1). Built on mt19937_64,
// whose output sequence is fixed by the standard, so draws are portable.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : engine_(seed) {}

    double operator()() noexcept {
        // 53 random bits, shifted by half an ulp so 0 and 1 are never produced.
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace confdist
