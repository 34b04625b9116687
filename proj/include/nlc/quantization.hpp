#pragma once

#include "nlc/lattice.hpp"
#include "nlc/measures.hpp"

namespace nlc {

// Dyadic quantizer with p cells of width gamma and unbounded end cells:
//   A_0 = (-inf, a_0], A_i = (a_{i-1}, a_i], A_{p-1} = (a_{p-2}, inf),
// representative points a_i = -gamma(p-1)/2 + gamma*i (the lattice alphabet).
class DyadicQuantizer {
  public:
    DyadicQuantizer(double gamma, PrimeModulus p) : params_(gamma, p) {}
    explicit DyadicQuantizer(LatticeParams params) : params_(params) {}

    const LatticeParams& params() const { return params_; }
    double gamma() const { return params_.gamma; }
    uint32_t p() const { return params_.p.value(); }
    std::vector<double> points() const { return params_.alphabet(); }

    // Cell index of u; boundary points a_i belong to the lower cell.
    uint32_t cell_index(double u) const;
    double quantize(double u) const;

  private:
    LatticeParams params_;
};

// Pushforward of a finite measure under quantization of one axis.
FiniteMeasure quantize_joint(const FiniteMeasure& P, const DyadicQuantizer& q, int axis);

// sign(x) * min(l, |x|)
double clip_value(double x, double l);

// Product-grid joint measure on R^2, used as the finite stand-in for a
// continuous joint. Masses are stored row-major over (xs, ys).
class GridJoint2D {
  public:
    GridJoint2D(std::vector<double> xs, std::vector<double> ys, std::vector<double> mass);

    // Discretized bivariate normal (unit marginals, correlation rho) on a
    // points x points grid spanning +-span_sigma.
    static GridJoint2D gaussian(double rho, size_t points = 2001, double span_sigma = 5.0);

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }
    double mass(size_t i, size_t j) const { return m_[i * ys_.size() + j]; }

    double mi_bits() const;

    // Quantizes both axes with q; the result lives on the q.points() grid.
    GridJoint2D quantize_both(const DyadicQuantizer& q) const;

    // Clamps one axis to [-l, l], merging tail mass into the endpoints.
    GridJoint2D clip_axis(int axis, double l) const;

    // Upper bound on the Prokhorov distance between this joint and its
    // quantize_both image, via the displacement coupling of the pushforward.
    double quantization_prokhorov_bound(const DyadicQuantizer& q) const;

    // Only for small grids (<= 'limit' nonzero atoms).
    FiniteMeasure to_measure(size_t limit = 4096) const;

  private:
    std::vector<double> xs_, ys_;
    std::vector<double> m_;
};

struct RefinementStep {
    int n;
    double gamma;
    uint32_t p;
    double mi_bits;
    double prokhorov_to_ref;
};

// gamma_n = 2^-n with p_n the smallest prime above 2^(2n) (at least 3,
// capped at 1021 for runtime).
std::vector<std::pair<double, PrimeModulus>> dyadic_schedule(int steps);

std::vector<RefinementStep> mi_refinement_sweep(
    const GridJoint2D& reference, const std::vector<std::pair<double, PrimeModulus>>& schedule);

struct ClipStep {
    double level;
    double mi_bits;
};

std::vector<ClipStep> clipping_sweep(const GridJoint2D& reference, const std::vector<double>& levels,
                                     int axis = 1);

}  // namespace nlc
