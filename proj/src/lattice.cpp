#include "nlc/lattice.hpp"

#include <cmath>

namespace nlc {

std::vector<double> LatticeParams::alphabet() const {
    std::vector<double> a(p.value());
    for (uint32_t i = 0; i < p.value(); ++i) a[i] = gamma * (double(i) - shift());
    return a;
}

LatticePoint to_lattice_point(const LatticeParams& params, const ZpVector& v) {
    if (v.modulus() != params.p) throw std::invalid_argument("to_lattice_point: modulus mismatch");
    LatticePoint x(v.size());
    for (size_t i = 0; i < v.size(); ++i) x[i] = params.gamma * (double(v[i]) - params.shift());
    return x;
}

ZpVector from_lattice_point(const LatticeParams& params, const LatticePoint& x) {
    ZpVector v(params.p, x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        double w = x[i] / params.gamma + params.shift();
        double r = std::round(w);
        if (std::abs(w - r) > 1e-9) throw std::domain_error("from_lattice_point: coordinate not on grid");
        if (r < -0.5 || r > double(params.p.value()) - 0.5)
            throw std::domain_error("from_lattice_point: coordinate outside S'");
        v[i] = uint32_t(r);
    }
    return v;
}

bool mod_lattice_member(const LatticeParams& params,
                        const std::function<bool(const ZpVector&)>& in_code,
                        const std::vector<double>& x) {
    uint32_t p = params.p.value();
    ZpVector v(params.p, x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        double w = x[i] / params.gamma + params.shift();
        double r = std::round(w);
        if (std::abs(w - r) > 1e-9) return false;
        long long ri = (long long)(r);
        long long m = ri % (long long)(p);
        if (m < 0) m += p;
        v[i] = uint32_t(m);
    }
    return in_code(v);
}

LatticePoint g_map(const LatticeParams& params, const GeneratorNestedCode& code,
                   const ZpVector& a, const BinIndex& m) {
    return to_lattice_point(params, code.codeword(a, m));
}

}  // namespace nlc
