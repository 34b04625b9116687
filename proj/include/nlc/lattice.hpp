#pragma once

#include <functional>
#include <vector>

#include "nlc/nested_code.hpp"

namespace nlc {

// Step size and modulus of the lattice map v -> gamma * (v - (p-1)/2).
struct LatticeParams {
    double gamma;
    PrimeModulus p;

    LatticeParams(double gamma_, PrimeModulus p_) : gamma(gamma_), p(p_) {
        if (!(gamma > 0)) throw std::invalid_argument("LatticeParams: gamma must be positive");
    }
    double shift() const { return double(p.value() - 1) / 2.0; }
    // The p-point alphabet gamma * (Z_p - (p-1)/2), ascending.
    std::vector<double> alphabet() const;
};

using LatticePoint = std::vector<double>;

// coords[i] = gamma * (v[i] - (p-1)/2); bijection Z_p^n -> S' grid.
LatticePoint to_lattice_point(const LatticeParams& params, const ZpVector& v);

// Exact inverse on the S' grid; throws if a coordinate is off-grid
// (tolerance 1e-9 relative to gamma) or outside [0, p).
ZpVector from_lattice_point(const LatticeParams& params, const LatticePoint& x);

// Membership in the mod-p replicated lattice: true iff w = x/gamma + (p-1)/2
// is integral and (w mod p) passes the Z_p membership test. Non-grid points
// return false.
bool mod_lattice_member(const LatticeParams& params,
                        const std::function<bool(const ZpVector&)>& in_code,
                        const std::vector<double>& x);

// gamma * ((aG + m dG + B) - (p-1)/2); always lands in S'.
LatticePoint g_map(const LatticeParams& params, const GeneratorNestedCode& code,
                   const ZpVector& a, const BinIndex& m);

}  // namespace nlc
