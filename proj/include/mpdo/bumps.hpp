#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "mpdo/grid.hpp"

namespace mpdo {

// Smooth radial cutoff: exactly 1 on [0, r0], exactly 0 on [r1, inf),
// monotone C-infinity transition in between (normalized integral of
// exp(-1/t)exp(-1/(1-t))), tabulated once with cubic Hermite interpolation.
class RadialProfile {
public:
    RadialProfile() : RadialProfile(1.0, 2.0) {}
    RadialProfile(double plateau_radius, double support_radius);

    double operator()(double r) const;
    double derivative(double r) const; // d/dr; 0 outside the transition band

    double plateau() const { return r0_; }
    double support() const { return r1_; }

private:
    double r0_, r1_;
};

inline double radius_of(std::span<const double> v) {
    double s = 0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

// The two dyadic cutoff families. Scalar pair on one R^d block:
// phi_hat plateau 1 / support 2, psi_hat(r) = phi_hat(r) - phi_hat(2r),
// so supp psi_hat = [1/2, 2]. Multilinear pair radial in the full |xivec|:
// Phi_hat plateau 1/2 / support 1, Psi_hat = Phi_hat(.) - Phi_hat(2.),
// so supp Psi_hat = [1/4, 1]. All arguments here are radii.
class BumpFamily {
public:
    BumpFamily();

    double phi_hat(double r) const { return scalar_(r); }
    double psi_hat(double r) const { return scalar_(r) - scalar_(2 * r); }
    // phi_hat_k / psi_hat_k: the family member at scale 2^k.
    double phi_hat_k(int k, double r) const { return scalar_(std::ldexp(r, -k)); }
    double psi_hat_k(int k, double r) const { return psi_hat(std::ldexp(r, -k)); }

    double Phi_hat(double r) const { return multi_(r); }
    double Psi_hat(double r) const { return multi_(r) - multi_(2 * r); }
    double Psi_hat_j(int j, double r) const { return Psi_hat(std::ldexp(r, -j)); }
    // Low piece of the dyadic partition. Taken at the doubled argument so the
    // telescoping closes: partition_low + sum_{j=0..J} Psi_hat_j equals
    // Phi_hat(2^-J r) exactly, which is 1 for r <= 2^{J-1}.
    double partition_low(double r) const { return multi_(2 * r); }

    const RadialProfile& scalar_profile() const { return scalar_; }
    const RadialProfile& multi_profile() const { return multi_; }

private:
    RadialProfile scalar_;
    RadialProfile multi_;
};

// Shared immutable instance; profiles are fixed by the construction above.
const BumpFamily& bumps();

// Sampled cutoffs on a grid. Scalar pair lives on one block (arity 1),
// multilinear pair on the full product (arity n). Frequency-domain tagged.
std::pair<SampledFunction, SampledFunction> make_scalar_pair(const Grid& g);
std::pair<SampledFunction, SampledFunction> make_multilinear_pair(const Grid& g);

// One window of a tensor-factor term: a scalar-family member at dyadic
// scale 2^scale, either the band (origin-excluded) or the low-pass.
struct FactorWindow {
    bool origin_excluded = false;
    int scale = 0;

    double lo() const { return origin_excluded ? std::ldexp(1.0, scale - 1) : 0.0; }
    double hi() const { return std::ldexp(1.0, scale + 1); }
};

double window_value(const FactorWindow& w, double r);

// One term of the factored annular window: level j, one window per input
// block plus one for the output frequency -(xi_1 + ... + xi_n).
struct FactorTerm {
    int level = 0;
    std::vector<FactorWindow> windows; // size n+1, last = output slot
    double weight = 1.0;
};

// Decomposes the annular window Psi_hat(2^-j .) against band-limited inputs:
// the returned terms satisfy
//   sum_t weight_t * Psi_hat(2^-j xivec) * prod_i w_t,i(|xi_i|) * w_t,n+1(|sum xi_i|)
//     = Psi_hat(2^-j xivec)
// at every grid frequency point, and every term keeps at least two
// origin-excluded windows. cushion / cushion_out < 0 pick the defaults
// 4 + ceil(log2(n sqrt(n))) and ceil(log2 n) + 2.
std::vector<FactorTerm> factorize_band(const Grid& g, int j, int cushion = -1,
                                       int cushion_out = -1);

} // namespace mpdo
