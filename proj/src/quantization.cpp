#include "nlc/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace nlc {

uint32_t DyadicQuantizer::cell_index(double u) const {
    double a0 = -gamma() * (double(p() - 1) / 2.0);
    // u <= a_i  <=>  i >= (u - a0)/gamma; the 1e-9 slack keeps grid points
    // computed with rounding noise on their own cell boundary.
    double v = (u - a0) / gamma();
    double i = std::ceil(v - 1e-9);
    if (i < 0) return 0;
    if (i > double(p() - 1)) return p() - 1;
    return uint32_t(i);
}

double DyadicQuantizer::quantize(double u) const {
    uint32_t i = cell_index(u);
    return gamma() * (double(i) - params_.shift());
}

FiniteMeasure quantize_joint(const FiniteMeasure& P, const DyadicQuantizer& q, int axis) {
    if (axis < 0 || axis >= P.dim()) throw std::invalid_argument("quantize_joint: bad axis");
    std::map<std::vector<double>, double> merged;
    for (const Atom& a : P.atoms()) {
        std::vector<double> pt = a.point;
        pt[size_t(axis)] = q.quantize(pt[size_t(axis)]);
        merged[pt] += a.mass;
    }
    std::vector<Atom> atoms;
    atoms.reserve(merged.size());
    for (auto& kv : merged) atoms.push_back({kv.first, kv.second});
    return FiniteMeasure(P.dim(), std::move(atoms));
}

double clip_value(double x, double l) {
    if (!(l > 0)) throw std::invalid_argument("clip_value: l must be positive");
    return x < 0 ? -std::min(l, -x) : std::min(l, x);
}

GridJoint2D::GridJoint2D(std::vector<double> xs, std::vector<double> ys, std::vector<double> mass)
    : xs_(std::move(xs)), ys_(std::move(ys)), m_(std::move(mass)) {
    if (m_.size() != xs_.size() * ys_.size())
        throw std::invalid_argument("GridJoint2D: mass size mismatch");
}

GridJoint2D GridJoint2D::gaussian(double rho, size_t points, double span_sigma) {
    std::vector<double> xs(points);
    double step = 2.0 * span_sigma / double(points - 1);
    for (size_t i = 0; i < points; ++i) xs[i] = -span_sigma + double(i) * step;
    std::vector<double> ys = xs;
    std::vector<double> m(points * points);
    double det = 1.0 - rho * rho;
    double total = 0;
    for (size_t i = 0; i < points; ++i) {
        for (size_t j = 0; j < points; ++j) {
            double x = xs[i], y = ys[j];
            double e = (x * x - 2 * rho * x * y + y * y) / (2 * det);
            double v = std::exp(-e);
            m[i * points + j] = v;
            total += v;
        }
    }
    for (double& v : m) v /= total;
    return GridJoint2D(std::move(xs), std::move(ys), std::move(m));
}

double GridJoint2D::mi_bits() const {
    size_t nx = xs_.size(), ny = ys_.size();
    std::vector<double> px(nx, 0.0), py(ny, 0.0);
    for (size_t i = 0; i < nx; ++i)
        for (size_t j = 0; j < ny; ++j) {
            double v = m_[i * ny + j];
            px[i] += v;
            py[j] += v;
        }
    double mi = 0;
    for (size_t i = 0; i < nx; ++i) {
        if (px[i] <= 0) continue;
        for (size_t j = 0; j < ny; ++j) {
            double v = m_[i * ny + j];
            if (v <= 0) continue;
            mi += v * std::log2(v / (px[i] * py[j]));
        }
    }
    return mi;
}

GridJoint2D GridJoint2D::quantize_both(const DyadicQuantizer& q) const {
    size_t nx = xs_.size(), ny = ys_.size();
    uint32_t p = q.p();
    std::vector<uint32_t> ix(nx), iy(ny);
    for (size_t i = 0; i < nx; ++i) ix[i] = q.cell_index(xs_[i]);
    for (size_t j = 0; j < ny; ++j) iy[j] = q.cell_index(ys_[j]);
    std::vector<double> out(size_t(p) * p, 0.0);
    for (size_t i = 0; i < nx; ++i) {
        size_t row = size_t(ix[i]) * p;
        const double* src = &m_[i * ny];
        for (size_t j = 0; j < ny; ++j) out[row + iy[j]] += src[j];
    }
    return GridJoint2D(q.points(), q.points(), std::move(out));
}

GridJoint2D GridJoint2D::clip_axis(int axis, double l) const {
    const std::vector<double>& ax = axis == 0 ? xs_ : ys_;
    std::vector<double> coords;
    std::vector<size_t> map_idx(ax.size());
    // Clamped coordinate list keeps interior points and merges tails at +-l.
    for (size_t i = 0; i < ax.size(); ++i) {
        double c = clip_value(ax[i], l);
        if (coords.empty() || std::abs(coords.back() - c) > 1e-15) coords.push_back(c);
        map_idx[i] = coords.size() - 1;
    }
    size_t nx = xs_.size(), ny = ys_.size();
    if (axis == 0) {
        std::vector<double> out(coords.size() * ny, 0.0);
        for (size_t i = 0; i < nx; ++i)
            for (size_t j = 0; j < ny; ++j) out[map_idx[i] * ny + j] += m_[i * ny + j];
        return GridJoint2D(std::move(coords), ys_, std::move(out));
    }
    std::vector<double> out(nx * coords.size(), 0.0);
    for (size_t i = 0; i < nx; ++i)
        for (size_t j = 0; j < ny; ++j) out[i * coords.size() + map_idx[j]] += m_[i * ny + j];
    return GridJoint2D(xs_, std::move(coords), std::move(out));
}

double GridJoint2D::quantization_prokhorov_bound(const DyadicQuantizer& q) const {
    size_t nx = xs_.size(), ny = ys_.size();
    std::vector<double> dx(nx), dy(ny);
    for (size_t i = 0; i < nx; ++i) dx[i] = xs_[i] - q.quantize(xs_[i]);
    for (size_t j = 0; j < ny; ++j) dy[j] = ys_[j] - q.quantize(ys_[j]);
    std::vector<std::pair<double, double>> disp;  // (distance, mass)
    disp.reserve(nx * ny);
    for (size_t i = 0; i < nx; ++i)
        for (size_t j = 0; j < ny; ++j) {
            double v = m_[i * ny + j];
            if (v <= 0) continue;
            disp.push_back({std::hypot(dx[i], dy[j]), v});
        }
    std::sort(disp.begin(), disp.end());
    // Ky Fan functional of the pushforward coupling: smallest eps with mass
    // displaced farther than eps at most eps.
    std::vector<double> suffix(disp.size() + 1, 0.0);
    for (size_t t = disp.size(); t > 0; --t) suffix[t - 1] = suffix[t] + disp[t - 1].second;
    double best = 1.0;
    for (size_t t = 0; t <= disp.size(); ++t) {
        double d = t == 0 ? 0.0 : disp[t - 1].first;  // eps >= d excludes items 0..t-1
        double tail = suffix[t];
        best = std::min(best, std::max(d, tail));
    }
    return best;
}

FiniteMeasure GridJoint2D::to_measure(size_t limit) const {
    std::vector<Atom> atoms;
    size_t ny = ys_.size();
    for (size_t i = 0; i < xs_.size(); ++i)
        for (size_t j = 0; j < ny; ++j) {
            double v = m_[i * ny + j];
            if (v <= 0) continue;
            if (atoms.size() >= limit) throw std::invalid_argument("GridJoint2D::to_measure: too many atoms");
            atoms.push_back({{xs_[i], ys_[j]}, v});
        }
    return FiniteMeasure(2, std::move(atoms));
}

std::vector<std::pair<double, PrimeModulus>> dyadic_schedule(int steps) {
    if (steps <= 0) throw std::invalid_argument("dyadic_schedule: steps must be positive");
    std::vector<std::pair<double, PrimeModulus>> out;
    for (int n = 0; n < steps; ++n) {
        double gamma = std::ldexp(1.0, -n);
        uint64_t lower = n == 0 ? 2 : (uint64_t(1) << (2 * n));
        PrimeModulus p = smallest_prime_above(lower);
        if (p.value() > 1021) p = PrimeModulus(1021);  // runtime cap
        out.push_back({gamma, p});
    }
    return out;
}

std::vector<RefinementStep> mi_refinement_sweep(
    const GridJoint2D& reference, const std::vector<std::pair<double, PrimeModulus>>& schedule) {
    if (schedule.empty()) throw std::invalid_argument("mi_refinement_sweep: empty schedule");
    std::vector<RefinementStep> out;
    int n = 0;
    for (const auto& [gamma, p] : schedule) {
        DyadicQuantizer q(gamma, p);
        GridJoint2D quantized = reference.quantize_both(q);
        out.push_back({n, gamma, p.value(), quantized.mi_bits(),
                       reference.quantization_prokhorov_bound(q)});
        ++n;
    }
    return out;
}

std::vector<ClipStep> clipping_sweep(const GridJoint2D& reference, const std::vector<double>& levels,
                                     int axis) {
    std::vector<ClipStep> out;
    for (double l : levels) out.push_back({l, reference.clip_axis(axis, l).mi_bits()});
    return out;
}

}  // namespace nlc
