#include "mpdo/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mpdo/errors.hpp"

namespace mpdo {
namespace {

void check_coords(std::span<const double> x) {
    if (x.empty()) throw ConfigError("region: empty exponent point");
    for (double v : x)
        if (!(v > 0)) throw ConfigError("region: exponent coordinates must be positive");
}

void check_coords(std::span<const Rat> x) {
    if (x.empty()) throw ConfigError("region: empty exponent point");
    for (const Rat& v : x)
        if (!(rat(0, 1) < v)) throw ConfigError("region: exponent coordinates must be positive");
}

void check_subset_size(std::size_t n) {
    if (n > 20) throw ConfigError("region: subset enumeration capped at 20 coordinates");
}

Verdict classify(double margin, double guard) {
    if (std::abs(margin) <= guard) return Verdict::Boundary;
    return margin > 0 ? Verdict::In : Verdict::Out;
}

} // namespace

Rat rat(long long num, long long den) {
    if (den == 0) throw ConfigError("rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    return Rat{g ? num / g : 0, g ? den / g : 1};
}

Rat operator+(const Rat& a, const Rat& b) { return rat(a.num * b.den + b.num * a.den, a.den * b.den); }
Rat operator-(const Rat& a, const Rat& b) { return rat(a.num * b.den - b.num * a.den, a.den * b.den); }
bool operator<(const Rat& a, const Rat& b) { return a.num * b.den < b.num * a.den; }
bool operator<=(const Rat& a, const Rat& b) { return a.num * b.den <= b.num * a.den; }
bool operator==(const Rat& a, const Rat& b) { return a.num * b.den == b.num * a.den; }

Verdict in_region_sum_form(std::span<const double> x, double alpha, double guard) {
    check_coords(x);
    if (!(alpha > 0)) throw ConfigError("region: alpha must be positive");
    double s = 0;
    for (double v : x) s += std::max(v, 0.5);
    return classify(alpha - s, guard);
}

bool in_region_sum_form_exact(std::span<const Rat> x, const Rat& alpha) {
    check_coords(x);
    Rat s = rat(0, 1);
    const Rat half = rat(1, 2);
    for (const Rat& v : x) s = s + std::max(v, half, [](const Rat& a, const Rat& b) { return a < b; });
    return s < alpha;
}

Verdict in_region_subset_form(std::span<const double> x, double alpha, double guard) {
    check_coords(x);
    check_subset_size(x.size());
    if (!(alpha > 0)) throw ConfigError("region: alpha must be positive");
    // worst margin over all subsets decides membership
    double worst = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << x.size()); ++mask) {
        double s = x.size() * 0.5;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (mask & (1u << i)) s += x[i] - 0.5;
        worst = std::min(worst, alpha - s);
    }
    return classify(worst, guard);
}

bool in_region_subset_form_exact(std::span<const Rat> x, const Rat& alpha) {
    check_coords(x);
    check_subset_size(x.size());
    const Rat half = rat(1, 2);
    for (std::uint32_t mask = 0; mask < (1u << x.size()); ++mask) {
        Rat s = rat(static_cast<long long>(x.size()), 2);
        for (std::size_t i = 0; i < x.size(); ++i)
            if (mask & (1u << i)) s = s + (x[i] - half);
        if (!(s < alpha)) return false;
    }
    return true;
}

Verdict subset_smoothness_condition(std::span<const double> x, double s, int d, double guard) {
    check_coords(x);
    check_subset_size(x.size());
    if (!(s > 0) || d <= 0) throw ConfigError("region: smoothness and dimension must be positive");
    double inv_p = 0;
    for (double v : x) inv_p += v;
    double worst = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << x.size()); ++mask) {
        double rhs = s / d;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (mask & (1u << i)) rhs += x[i] - 0.5;
        worst = std::min(worst, rhs - (inv_p - 0.5));
    }
    return classify(worst, guard);
}

AdmissibleResult symbol_class_admissible(std::span<const double> x, double rho, double delta,
                                         double order, int d) {
    check_coords(x);
    if (rho < 0 || rho > 1) throw ConfigError("region: rho must lie in [0, 1]");
    if (delta < 0 || delta >= 1) throw ConfigError("region: delta must lie in [0, 1)");
    if (order > 0) throw ConfigError("region: order must be nonpositive");
    if (d <= 0) throw ConfigError("region: dimension must be positive");

    const double n = double(x.size());
    double sum_max = 0;
    for (double v : x) sum_max += std::max(v, 0.5);

    AdmissibleResult res;
    if (rho == 1.0) {
        // no cap on s: any s beyond both thresholds works
        res.admissible = true;
        res.witness_s = std::max(n * d / 2.0, d * sum_max) + 1.0;
        return res;
    }
    const double s_cap = -order / (1.0 - rho); // largest s the order constraint allows
    if (!(s_cap > n * d / 2.0)) {
        res.reason = "smoothness cap does not clear n d / 2";
        return res;
    }
    if (!(sum_max < s_cap / d)) {
        res.reason = "exponent point outside the region at the smoothness cap";
        return res;
    }
    res.admissible = true;
    res.witness_s = s_cap;
    return res;
}

Verdict comparison_condition(std::span<const double> x, double order, int d, double guard) {
    check_coords(x);
    if (d <= 0) throw ConfigError("region: dimension must be positive");
    double sum_max = 0, inv_p = 0;
    for (double v : x) {
        sum_max += std::max(v, 0.5);
        inv_p += v;
    }
    const double margin = -order / d + std::min(inv_p, 0.5) - sum_max;
    // non-strict: zero margin satisfies the condition but sits in the band
    return classify(margin, guard);
}

bool comparison_condition_exact(std::span<const Rat> x, const Rat& order, long long d) {
    check_coords(x);
    if (d <= 0) throw ConfigError("region: dimension must be positive");
    const Rat half = rat(1, 2);
    Rat sum_max = rat(0, 1), inv_p = rat(0, 1);
    for (const Rat& v : x) {
        sum_max = sum_max + (half < v ? v : half);
        inv_p = inv_p + v;
    }
    const Rat lhs = sum_max;
    const Rat rhs = rat(-order.num, order.den * d) + (inv_p < half ? inv_p : half);
    return lhs <= rhs;
}

} // namespace mpdo
