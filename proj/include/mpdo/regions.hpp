#pragma once

#include <span>
#include <string>

#include <cstdint>

namespace mpdo {

// Exact rational scalar for boundary-safe region sweeps.
struct Rat {
    long long num = 0;
    long long den = 1;
};
Rat rat(long long num, long long den);
Rat operator+(const Rat& a, const Rat& b);
Rat operator-(const Rat& a, const Rat& b);
bool operator<(const Rat& a, const Rat& b);
bool operator<=(const Rat& a, const Rat& b);
bool operator==(const Rat& a, const Rat& b);

// Floating-point memberships carry a guard band: points within `guard` of the
// defining boundary report Boundary instead of a side.
enum class Verdict { In, Out, Boundary };

// sum_i max(x_i, 1/2) < alpha (strict), coordinates x_i = 1/p_i.
Verdict in_region_sum_form(std::span<const double> x, double alpha, double guard = 1e-12);
bool in_region_sum_form_exact(std::span<const Rat> x, const Rat& alpha);

// For every index subset I: sum_{i in I} (x_i - 1/2) + n/2 < alpha.
// Enumerates all 2^n subsets; n capped at 20.
Verdict in_region_subset_form(std::span<const double> x, double alpha, double guard = 1e-12);
bool in_region_subset_form_exact(std::span<const Rat> x, const Rat& alpha);

// For every index subset I (including empty):
//   sum_i x_i - 1/2 < s/d + sum_{i in I} (x_i - 1/2).
Verdict subset_smoothness_condition(std::span<const double> x, double s, int d,
                                    double guard = 1e-12);

// Feasibility of the derivative-decay symbol class at the exponent point:
// admissible iff some s satisfies s > n d / 2, order <= (rho - 1) s, and the
// sum-form membership at alpha = s / d.  rho = 1 imposes no cap on s.
struct AdmissibleResult {
    bool admissible = false;
    double witness_s = 0;
    std::string reason; // set when not admissible
};
AdmissibleResult symbol_class_admissible(std::span<const double> x, double rho, double delta,
                                         double order, int d);

// Non-strict comparison region sum_i max(x_i, 1/2) <= -order/d + min(1/p, 1/2).
Verdict comparison_condition(std::span<const double> x, double order, int d,
                             double guard = 1e-12);
bool comparison_condition_exact(std::span<const Rat> x, const Rat& order, long long d);

} // namespace mpdo
