#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "nlc/quantization.hpp"

using namespace nlc;

namespace {

double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Finely discretized standard normal as a d=1 measure.
FiniteMeasure discrete_gaussian(size_t points, double span) {
    std::vector<Atom> atoms;
    double total = 0;
    for (size_t i = 0; i < points; ++i) {
        double x = -span + 2 * span * double(i) / double(points - 1);
        double w = std::exp(-0.5 * x * x);
        atoms.push_back({{x}, w});
        total += w;
    }
    for (auto& a : atoms) a.mass /= total;
    return FiniteMeasure(1, std::move(atoms));
}

}  // namespace

TEST_CASE("cell assignment and representatives") {
    DyadicQuantizer q(1.0, PrimeModulus(3));
    // Representatives are the lattice alphabet {-1, 0, 1}.
    CHECK(q.points() == std::vector<double>{-1.0, 0.0, 1.0});
    // Cells are (-inf,-1], (-1,0], (0,inf) with representatives -1, 0, 1.
    CHECK(q.quantize(0.4) == 1.0);
    CHECK(q.quantize(0.7) == 1.0);
    CHECK(q.quantize(-0.7) == 0.0);
    CHECK(q.quantize(0.5) == 1.0);
    // Boundary points belong to the lower-indexed cell.
    CHECK(q.quantize(-1.0) == -1.0);
    CHECK(q.quantize(0.0) == 0.0);
    CHECK(q.quantize(-1.2) == -1.0);
    // Unbounded end cells.
    CHECK(q.quantize(123.0) == 1.0);
    CHECK(q.quantize(-123.0) == -1.0);
    // Representative points are fixed points.
    for (double v : q.points()) CHECK(q.quantize(v) == v);
}

TEST_CASE("quantization is idempotent") {
    DyadicQuantizer q(0.5, PrimeModulus(5));
    for (double u = -3.0; u <= 3.0; u += 0.093) CHECK(q.quantize(q.quantize(u)) == q.quantize(u));
}

TEST_CASE("Gaussian cell masses match the normal CDF") {
    // gamma=1, p=3 on a standard normal: cells (-inf,-1], (-1,0], (0,inf)
    // carry masses Phi(-1), Phi(0)-Phi(-1), 1-Phi(0).
    DyadicQuantizer q(1.0, PrimeModulus(3));
    FiniteMeasure g = discrete_gaussian(20001, 8.0);
    FiniteMeasure gq = quantize_joint(g, q, 0);
    REQUIRE(gq.size() == 3);
    double lo = gq.mass_at({-1.0}), mid = gq.mass_at({0.0}), hi = gq.mass_at({1.0});
    CHECK(lo + mid + hi == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(lo == doctest::Approx(phi(-1.0)).epsilon(1e-3));
    CHECK(mid == doctest::Approx(phi(0.0) - phi(-1.0)).epsilon(1e-3));
    CHECK(hi == doctest::Approx(1.0 - phi(0.0)).epsilon(1e-3));
}

TEST_CASE("quantizing an axis preserves total mass and other axes") {
    DyadicQuantizer q(1.0, PrimeModulus(3));
    FiniteMeasure joint(2, {{{0.4, 7.0}, 0.5}, {{0.6, 8.0}, 0.25}, {{-2.0, 7.0}, 0.25}});
    FiniteMeasure out = quantize_joint(joint, q, 0);
    double total = 0;
    for (const auto& a : out.atoms()) total += a.mass;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.mass_at({1.0, 7.0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(out.mass_at({1.0, 8.0}) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(out.mass_at({-1.0, 7.0}) == doctest::Approx(0.25).epsilon(1e-12));
    // Already-on-grid support is untouched.
    FiniteMeasure ongrid(2, {{{-1.0, 1.0}, 0.5}, {{1.0, 0.0}, 0.5}});
    FiniteMeasure out2 = quantize_joint(ongrid, q, 0);
    CHECK(out2.mass_at({-1.0, 1.0}) == 0.5);
    CHECK(out2.mass_at({1.0, 0.0}) == 0.5);
}

TEST_CASE("clipping saturates at the level") {
    CHECK(clip_value(0.4, 1.0) == 0.4);
    CHECK(clip_value(2.5, 1.0) == 1.0);
    CHECK(clip_value(-2.5, 1.0) == -1.0);
    CHECK(clip_value(-0.2, 1.0) == -0.2);
    CHECK(clip_value(0.0, 0.5) == 0.0);
}

TEST_CASE("dyadic schedule halves gamma and squares the modulus with a cap") {
    auto sched = dyadic_schedule(7);
    REQUIRE(sched.size() == 7);
    std::vector<uint32_t> expect_p{3, 5, 17, 67, 257, 1021, 1021};
    for (int i = 0; i < 7; ++i) {
        CHECK(sched[size_t(i)].first == doctest::Approx(std::pow(2.0, -i)).epsilon(1e-15));
        CHECK(sched[size_t(i)].second.value() == expect_p[size_t(i)]);
    }
}

TEST_CASE("refinement sweep on a correlated Gaussian is monotone") {
    GridJoint2D ref = GridJoint2D::gaussian(0.8, 301, 5.0);
    auto steps = mi_refinement_sweep(ref, dyadic_schedule(4));
    REQUIRE(steps.size() == 4);
    for (size_t i = 1; i < steps.size(); ++i)
        CHECK(steps[i].mi_bits >= steps[i - 1].mi_bits - 1e-9);
    // Quantized information never exceeds the reference.
    for (const auto& s : steps) CHECK(s.mi_bits <= ref.mi_bits() + 1e-9);
    // The quantization displacement bound shrinks as gamma shrinks.
    for (size_t i = 1; i < steps.size(); ++i)
        CHECK(steps[i].prokhorov_to_ref <= steps[i - 1].prokhorov_to_ref + 1e-12);
}

TEST_CASE("independent joint carries zero information at every resolution") {
    std::vector<double> xs{-1.0, 0.0, 1.0};
    std::vector<double> mass(9, 1.0 / 9.0);
    GridJoint2D indep(xs, xs, mass);
    CHECK(indep.mi_bits() == doctest::Approx(0.0).epsilon(1e-12));
    auto steps = mi_refinement_sweep(indep, dyadic_schedule(3));
    for (const auto& s : steps) CHECK(s.mi_bits == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("already-coarse joints are resolved exactly once gamma is fine enough") {
    // Support on {-1,0,1}^2: the gamma=1, p=3 grid reproduces it exactly, and
    // finer grids keep the information constant at the true value.
    std::vector<double> xs{-1.0, 0.0, 1.0};
    std::vector<double> mass{0.25, 0.05, 0.03, 0.05, 0.24, 0.05, 0.03, 0.05, 0.25};
    GridJoint2D joint(xs, xs, mass);
    double truth = joint.mi_bits();
    auto steps = mi_refinement_sweep(joint, dyadic_schedule(3));
    for (const auto& s : steps) CHECK(s.mi_bits == doctest::Approx(truth).epsilon(1e-9));
}

TEST_CASE("clipping sweep converges to the reference information") {
    GridJoint2D ref = GridJoint2D::gaussian(0.8, 401, 5.0);
    auto steps = clipping_sweep(ref, {1, 2, 4, 8});
    REQUIRE(steps.size() == 4);
    double truth = ref.mi_bits();
    double prev_gap = 1e9;
    for (const auto& s : steps) {
        double gap = std::abs(s.mi_bits - truth);
        CHECK(gap <= prev_gap + 1e-12);
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.01);
}
