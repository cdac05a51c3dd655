#include "confdist/numeric.hpp"

#include "confdist/errors.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace confdist {

std::string Interval::str() const {
    std::ostringstream os;
    os << '[' << lo << ", " << hi << ']';
    return os.str();
}

namespace {

// Kronrod 15-point abscissae and weights; the 7-point Gauss rule sits on the odd indices.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const RealFunction& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(mid);
    double kronrod = fc * kKronrod[7];
    double gauss = fc * kGauss[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        const double sum = f(mid - dx) + f(mid + dx);
        kronrod += kKronrod[i] * sum;
        if (i % 2 == 1) gauss += kGauss[i / 2] * sum;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

double integrate_finite(const RealFunction& f, double a, double b, double abs_tol,
                        double rel_tol) {
    constexpr int kMaxSegments = 4000;
    std::priority_queue<Segment> heap;
    Segment first = gk15(f, a, b);
    double total = first.value;
    double error = first.error;
    heap.push(first);
    int segments = 1;
    while (error > std::max(abs_tol, rel_tol * std::abs(total)) && segments < kMaxSegments) {
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        Segment left = gk15(f, worst.a, mid);
        Segment right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++segments;
    }
    // Re-sum to shed the drift of the incremental updates.
    double sum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        heap.pop();
    }
    return sum;
}

}  // namespace

double integrate(const RealFunction& f, double a, double b, double abs_tol, double rel_tol) {
    if (std::isnan(a) || std::isnan(b)) throw NumericError("integrate: NaN limit");
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a, abs_tol, rel_tol);

    double result;
    if (std::isfinite(a) && std::isfinite(b)) {
        result = integrate_finite(f, a, b, abs_tol, rel_tol);
    } else if (std::isfinite(a)) {
        // x = a + t / (1 - t), t in [0, 1)
        auto g = [&](double t) {
            const double u = 1.0 - t;
            return f(a + t / u) / (u * u);
        };
        result = integrate_finite(g, 0.0, 1.0, abs_tol, rel_tol);
    } else if (std::isfinite(b)) {
        auto g = [&](double t) {
            const double u = 1.0 - t;
            return f(b - t / u) / (u * u);
        };
        result = integrate_finite(g, 0.0, 1.0, abs_tol, rel_tol);
    } else {
        // x = t / (1 - t^2), t in (-1, 1)
        auto g = [&](double t) {
            const double u = 1.0 - t * t;
            return f(t / u) * (1.0 + t * t) / (u * u);
        };
        result = integrate_finite(g, -1.0, 1.0, abs_tol, rel_tol);
    }
    if (!std::isfinite(result)) throw NumericError("integrate: non-finite result");
    return result;
}

std::vector<double> step_grid(double start, double stop, double step) {
    if (!std::isfinite(start) || !std::isfinite(stop) || !(step > 0.0) || !std::isfinite(step))
        throw InvalidParameter("grid: need finite start/stop and step > 0");
    if (stop < start) throw InvalidParameter("grid: stop must be >= start");
    const double count = std::floor((stop - start) / step + 0.5);
    if (count > 1e7) throw InvalidParameter("grid: more than 1e7 points");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count) + 1);
    for (std::size_t k = 0; k <= static_cast<std::size_t>(count); ++k)
        out.push_back(start + static_cast<double>(k) * step);
    return out;
}

double solve_bracketed(const RealFunction& f, double lo, double hi, double f_lo, double f_hi,
                       int max_iter) {
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if (std::isnan(f_lo) || std::isnan(f_hi) || (f_lo > 0.0) == (f_hi > 0.0)) {
        std::ostringstream os;
        os << "root not bracketed on [" << lo << ", " << hi << "]: f(lo)=" << f_lo
           << " f(hi)=" << f_hi;
        throw NumericError(os.str());
    }
    std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
    auto r = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi,
                                               boost::math::tools::eps_tolerance<double>(50),
                                               iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace confdist
