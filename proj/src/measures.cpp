#include "nlc/measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>

namespace nlc {

namespace {

constexpr double kCoordTol = 1e-12;
constexpr double kMassTol = 1e-12;

bool same_point(const std::vector<double>& a, const std::vector<double>& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > kCoordTol) return false;
    return true;
}

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace

FiniteMeasure::FiniteMeasure(int dim, std::vector<Atom> atoms) : dim_(dim), atoms_(std::move(atoms)) {
    if (dim_ <= 0) throw std::invalid_argument("FiniteMeasure: dimension must be positive");
    double total = 0;
    for (const Atom& a : atoms_) {
        if (int(a.point.size()) != dim_) throw std::invalid_argument("FiniteMeasure: atom dimension mismatch");
        if (!(a.mass > 0) || a.mass > 1 + kMassTol)
            throw std::invalid_argument("FiniteMeasure: atom mass must be in (0,1]");
        total += a.mass;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("FiniteMeasure: masses sum to " + std::to_string(total));
    for (size_t i = 0; i < atoms_.size(); ++i)
        for (size_t j = i + 1; j < atoms_.size(); ++j)
            if (same_point(atoms_[i].point, atoms_[j].point))
                throw std::invalid_argument("FiniteMeasure: duplicate atom points");
}

double FiniteMeasure::mass_at(const std::vector<double>& pt) const {
    for (const Atom& a : atoms_)
        if (same_point(a.point, pt)) return a.mass;
    return 0.0;
}

FiniteMeasure FiniteMeasure::marginal(int axis) const {
    if (axis < 0 || axis >= dim_) throw std::invalid_argument("marginal: bad axis");
    std::vector<Atom> out;
    for (const Atom& a : atoms_) {
        std::vector<double> pt{a.point[size_t(axis)]};
        bool found = false;
        for (Atom& o : out)
            if (same_point(o.point, pt)) {
                o.mass += a.mass;
                found = true;
                break;
            }
        if (!found) out.push_back({pt, a.mass});
    }
    return FiniteMeasure(1, std::move(out));
}

FiniteMeasure FiniteMeasure::product(const FiniteMeasure& a, const FiniteMeasure& b) {
    std::vector<Atom> out;
    out.reserve(a.size() * b.size());
    for (const Atom& x : a.atoms())
        for (const Atom& y : b.atoms()) {
            std::vector<double> pt = x.point;
            pt.insert(pt.end(), y.point.begin(), y.point.end());
            out.push_back({std::move(pt), x.mass * y.mass});
        }
    return FiniteMeasure(a.dim() + b.dim(), std::move(out));
}

std::string FiniteMeasure::to_table() const {
    std::ostringstream os;
    char buf[64];
    for (const Atom& a : atoms_) {
        for (double c : a.point) {
            std::snprintf(buf, sizeof buf, "%.17g ", c);
            os << buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g\n", a.mass);
        os << buf;
    }
    return os.str();
}

FiniteMeasure FiniteMeasure::from_table(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::vector<Atom> atoms;
    int dim = -1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<double> vals;
        double v;
        while (ls >> v) vals.push_back(v);
        if (vals.size() < 2) throw std::runtime_error("measure table: bad line: " + line);
        if (dim < 0) dim = int(vals.size()) - 1;
        if (int(vals.size()) != dim + 1) throw std::runtime_error("measure table: ragged line: " + line);
        Atom a;
        a.point.assign(vals.begin(), vals.end() - 1);
        a.mass = vals.back();
        atoms.push_back(std::move(a));
    }
    if (dim < 0) throw std::runtime_error("measure table: empty input");
    return FiniteMeasure(dim, std::move(atoms));
}

FiniteMeasure empirical_measure(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("empirical_measure: empty sequence");
    std::vector<Atom> atoms;
    double w = 1.0 / double(x.size());
    for (double v : x) {
        bool found = false;
        for (Atom& a : atoms)
            if (std::abs(a.point[0] - v) <= kCoordTol) {
                a.mass += w;
                found = true;
                break;
            }
        if (!found) atoms.push_back({{v}, w});
    }
    return FiniteMeasure(1, std::move(atoms));
}

FiniteMeasure empirical_joint(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("empirical_joint: length mismatch");
    if (x.empty()) throw std::invalid_argument("empirical_joint: empty sequences");
    std::vector<Atom> atoms;
    double w = 1.0 / double(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        std::vector<double> pt{x[i], y[i]};
        bool found = false;
        for (Atom& a : atoms)
            if (same_point(a.point, pt)) {
                a.mass += w;
                found = true;
                break;
            }
        if (!found) atoms.push_back({std::move(pt), w});
    }
    return FiniteMeasure(2, std::move(atoms));
}

namespace {

struct JointSupport {
    std::vector<std::vector<double>> points;
    std::vector<double> pa, qa;  // masses of a and b on the union support
};

JointSupport union_support(const FiniteMeasure& a, const FiniteMeasure& b) {
    JointSupport s;
    for (const Atom& x : a.atoms()) {
        s.points.push_back(x.point);
        s.pa.push_back(x.mass);
        s.qa.push_back(0.0);
    }
    for (const Atom& y : b.atoms()) {
        bool found = false;
        for (size_t i = 0; i < s.points.size(); ++i)
            if (same_point(s.points[i], y.point)) {
                s.qa[i] = y.mass;
                found = true;
                break;
            }
        if (!found) {
            s.points.push_back(y.point);
            s.pa.push_back(0.0);
            s.qa.push_back(y.mass);
        }
    }
    return s;
}

// Exact feasibility of the Prokhorov condition at a given eps over every
// subset of the union support.
bool prokhorov_feasible(const JointSupport& s, const std::vector<double>& ps,
                        const std::vector<double>& qs, double eps) {
    size_t m = s.points.size();
    std::vector<uint32_t> nb(m, 0);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            if (euclid(s.points[i], s.points[j]) < eps) nb[i] |= uint32_t(1) << j;
    size_t full = size_t(1) << m;
    std::vector<uint32_t> neigh(full, 0);
    for (size_t S = 1; S < full; ++S) {
        size_t low = S & (~S + 1);
        neigh[S] = neigh[S & (S - 1)] | nb[size_t(std::countr_zero(uint32_t(low)))];
    }
    const double tol = 1e-12;
    for (size_t S = 1; S < full; ++S) {
        if (ps[S] > qs[neigh[S]] + eps + tol) return false;
        if (qs[S] > ps[neigh[S]] + eps + tol) return false;
    }
    return true;
}

std::vector<double> subset_sums(const std::vector<double>& mass) {
    size_t m = mass.size();
    size_t full = size_t(1) << m;
    std::vector<double> s(full, 0.0);
    for (size_t S = 1; S < full; ++S) {
        size_t low = S & (~S + 1);
        s[S] = s[S & (S - 1)] + mass[size_t(std::countr_zero(uint32_t(low)))];
    }
    return s;
}

// Upper bound for large supports: greedy nearest-first coupling, then the
// Ky Fan functional of that coupling. Not exact; only reached when the
// union support exceeds 22 atoms.
double prokhorov_greedy_bound(const JointSupport& s) {
    size_t m = s.points.size();
    if (m * m > 100000000ULL) throw std::invalid_argument("prokhorov_distance: support too large");
    struct Pair {
        double d;
        uint32_t i, j;
    };
    std::vector<Pair> pairs;
    pairs.reserve(m * m);
    for (uint32_t i = 0; i < m; ++i) {
        if (s.pa[i] <= 0) continue;
        for (uint32_t j = 0; j < m; ++j) {
            if (s.qa[j] <= 0) continue;
            pairs.push_back({euclid(s.points[i], s.points[j]), i, j});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d < b.d; });
    std::vector<double> pr = s.pa, qr = s.qa;
    std::vector<std::pair<double, double>> moved;  // (distance, mass)
    for (const Pair& pr2 : pairs) {
        double t = std::min(pr[pr2.i], qr[pr2.j]);
        if (t <= 0) continue;
        pr[pr2.i] -= t;
        qr[pr2.j] -= t;
        moved.push_back({pr2.d, t});
    }
    // Ky Fan: smallest eps with coupled mass at distance > eps at most eps.
    double tail = 0;
    for (auto& mv : moved) tail += mv.second;
    // moved is sorted by distance; scan thresholds from below.
    double best = 1.0;
    double below = 0;
    size_t idx = 0;
    std::vector<double> cands{0.0};
    for (auto& mv : moved) cands.push_back(mv.first);
    for (double eps : cands) {
        while (idx < moved.size() && moved[idx].first <= eps) below += moved[idx++].second;
        double tail_mass = tail - below;
        double need = std::max(eps, tail_mass);
        best = std::min(best, need);
    }
    return std::min(best, 1.0);
}

}  // namespace

double prokhorov_distance(const FiniteMeasure& a, const FiniteMeasure& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("prokhorov_distance: dimension mismatch");
    JointSupport s = union_support(a, b);
    bool identical = true;
    for (size_t i = 0; i < s.points.size(); ++i)
        if (std::abs(s.pa[i] - s.qa[i]) > kMassTol) {
            identical = false;
            break;
        }
    if (identical) return 0.0;
    if (s.points.size() > 22) return prokhorov_greedy_bound(s);

    std::vector<double> ps = subset_sums(s.pa);
    std::vector<double> qs = subset_sums(s.qa);
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-9) {
        double mid = 0.5 * (lo + hi);
        if (prokhorov_feasible(s, ps, qs, mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double total_variation(const FiniteMeasure& a, const FiniteMeasure& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("total_variation: dimension mismatch");
    JointSupport s = union_support(a, b);
    double tv = 0;
    for (size_t i = 0; i < s.points.size(); ++i) tv += std::abs(s.pa[i] - s.qa[i]);
    return 0.5 * tv;
}

bool is_typical(const std::vector<double>& x, const FiniteMeasure& P, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("is_typical: eps must be positive");
    if (eps >= 1.0) return true;
    return prokhorov_distance(empirical_measure(x), P) < eps;
}

bool is_jointly_typical(const std::vector<double>& x, const std::vector<double>& y,
                        const FiniteMeasure& P_XY, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("is_jointly_typical: eps must be positive");
    if (eps >= 1.0) return true;
    return prokhorov_distance(empirical_joint(x, y), P_XY) < eps;
}

double kl_divergence(const FiniteMeasure& P, const FiniteMeasure& Q) {
    double d = 0;
    for (const Atom& a : P.atoms()) {
        double q = Q.mass_at(a.point);
        if (q <= 0) return std::numeric_limits<double>::infinity();
        d += a.mass * std::log2(a.mass / q);
    }
    return d;
}

double mutual_information(const FiniteMeasure& P_XY) {
    if (P_XY.dim() != 2) throw std::invalid_argument("mutual_information: need d=2 measure");
    FiniteMeasure px = P_XY.marginal(0);
    FiniteMeasure py = P_XY.marginal(1);
    double mi = 0;
    for (const Atom& a : P_XY.atoms()) {
        double mx = px.mass_at({a.point[0]});
        double my = py.mass_at({a.point[1]});
        mi += a.mass * std::log2(a.mass / (mx * my));
    }
    return mi;
}

double entropy_bits(const FiniteMeasure& P) {
    double h = 0;
    for (const Atom& a : P.atoms()) h -= a.mass * std::log2(a.mass);
    return h;
}

TypicalityTester::TypicalityTester(const FiniteMeasure& model,
                                   std::vector<std::vector<double>> universe, double eps)
    : universe_(std::move(universe)), eps_(eps) {
    size_t m = universe_.size();
    if (m == 0 || m > 22) throw std::invalid_argument("TypicalityTester: universe size must be 1..22");
    if (!(eps > 0)) throw std::invalid_argument("TypicalityTester: eps must be positive");

    std::vector<double> qmass(m, 0.0);
    for (const Atom& a : model.atoms()) {
        bool found = false;
        for (size_t i = 0; i < m; ++i)
            if (same_point(universe_[i], a.point)) {
                qmass[i] = a.mass;
                found = true;
                break;
            }
        if (!found) throw std::invalid_argument("TypicalityTester: model atom outside universe");
    }
    model_subset_mass_ = subset_sums(qmass);

    std::vector<uint32_t> nb(m, 0);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            if (euclid(universe_[i], universe_[j]) < eps_) nb[i] |= uint32_t(1) << j;
    size_t full = size_t(1) << m;
    neigh_.assign(full, 0);
    for (size_t S = 1; S < full; ++S) {
        size_t low = S & (~S + 1);
        neigh_[S] = neigh_[S & (S - 1)] | nb[size_t(std::countr_zero(uint32_t(low)))];
    }
}

size_t TypicalityTester::index_of(const std::vector<double>& pt) const {
    for (size_t i = 0; i < universe_.size(); ++i)
        if (same_point(universe_[i], pt)) return i;
    throw std::invalid_argument("TypicalityTester: point outside universe");
}

bool TypicalityTester::typical(const uint32_t* counts, uint32_t n, Scratch& scratch) const {
    if (eps_ >= 1.0) return true;
    size_t m = universe_.size();
    size_t full = size_t(1) << m;
    std::vector<double>& ps = scratch.subset_mass;
    ps.resize(full);
    ps[0] = 0.0;
    double inv_n = 1.0 / double(n);
    for (size_t S = 1; S < full; ++S) {
        size_t low = S & (~S + 1);
        ps[S] = ps[S & (S - 1)] + double(counts[size_t(std::countr_zero(uint32_t(low)))]) * inv_n;
    }
    const double tol = 1e-12;
    const std::vector<double>& qs = model_subset_mass_;
    for (size_t S = 1; S < full; ++S) {
        uint32_t nS = neigh_[S];
        if (ps[S] > qs[nS] + eps_ + tol) return false;
        if (qs[S] > ps[nS] + eps_ + tol) return false;
    }
    return true;
}

}  // namespace nlc
