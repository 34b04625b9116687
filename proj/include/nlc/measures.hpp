#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace nlc {

struct Atom {
    std::vector<double> point;
    double mass;
};

// Finite-support probability measure on R^d. Masses sum to 1 (1e-12) and
// atom points are pairwise distinct.
class FiniteMeasure {
  public:
    FiniteMeasure(int dim, std::vector<Atom> atoms);

    int dim() const { return dim_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    size_t size() const { return atoms_.size(); }

    // Mass at the given point, 0 if absent (coordinates matched to 1e-12).
    double mass_at(const std::vector<double>& pt) const;

    // Projection onto one coordinate axis (merges coinciding projections).
    FiniteMeasure marginal(int axis) const;

    // Product measure on R^(d1+d2).
    static FiniteMeasure product(const FiniteMeasure& a, const FiniteMeasure& b);

    std::string to_table() const;
    static FiniteMeasure from_table(const std::string& text);

  private:
    int dim_;
    std::vector<Atom> atoms_;
};

// Empirical measure of a real sequence; masses are multiples of 1/n.
FiniteMeasure empirical_measure(const std::vector<double>& x);

// Empirical joint of two equal-length sequences (d = 2).
FiniteMeasure empirical_joint(const std::vector<double>& x, const std::vector<double>& y);

// Exact Prokhorov distance for finite-support measures: bisection over eps
// with the defining condition checked over every subset of the joint
// support (exact for supports up to 22 atoms). Larger supports fall back to
// a greedy-coupling upper bound (documented caveat: upper bound, not exact).
double prokhorov_distance(const FiniteMeasure& a, const FiniteMeasure& b);

// Total variation distance on the joint support (test aid; dominates pi).
double total_variation(const FiniteMeasure& a, const FiniteMeasure& b);

// Weak* typicality: pi(empirical(x), P) < eps.
bool is_typical(const std::vector<double>& x, const FiniteMeasure& P, double eps);
bool is_jointly_typical(const std::vector<double>& x, const std::vector<double>& y,
                        const FiniteMeasure& P_XY, double eps);

// sum P(a) log2(P(a)/Q(a)) in bits; +infinity when P has mass outside
// supp(Q). Atoms matched by coordinates (1e-12).
double kl_divergence(const FiniteMeasure& P, const FiniteMeasure& Q);

// I(X;Y) = D(P_XY || P_X x P_Y) in bits, on a d=2 measure.
double mutual_information(const FiniteMeasure& P_XY);

double entropy_bits(const FiniteMeasure& P);

// Repeated typicality tests against a fixed model on a fixed finite
// universe of support points. Precomputes the eps-neighborhood structure so
// each test is a single pass over the subset lattice; equivalent to
// is_typical up to ties at the bisection boundary (which the metric's
// infimum ignores).
class TypicalityTester {
  public:
    TypicalityTester(const FiniteMeasure& model, std::vector<std::vector<double>> universe, double eps);

    size_t universe_size() const { return universe_.size(); }
    const std::vector<std::vector<double>>& universe() const { return universe_; }
    size_t index_of(const std::vector<double>& pt) const;

    struct Scratch {
        std::vector<double> subset_mass;
    };

    // counts[i] = occurrences of universe atom i; n = total count.
    bool typical(const uint32_t* counts, uint32_t n, Scratch& scratch) const;
    bool typical(const std::vector<uint32_t>& counts, uint32_t n, Scratch& scratch) const {
        return typical(counts.data(), n, scratch);
    }

  private:
    std::vector<std::vector<double>> universe_;
    double eps_;
    std::vector<double> model_subset_mass_;  // 2^m subset sums of the model
    std::vector<uint32_t> neigh_;            // subset -> open eps-neighborhood subset
};

}  // namespace nlc
