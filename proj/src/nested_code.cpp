#include "nlc/nested_code.hpp"

#include <sstream>

namespace nlc {

GeneratorNestedCode::GeneratorNestedCode(ZpMatrix G, ZpMatrix dG, ZpVector B)
    : G_(std::move(G)), dG_(std::move(dG)), B_(std::move(B)) {
    if (G_.modulus() != dG_.modulus() || G_.modulus() != B_.modulus())
        throw std::invalid_argument("GeneratorNestedCode: modulus mismatch");
    if (G_.cols() != dG_.cols() || G_.cols() != B_.size())
        throw std::invalid_argument("GeneratorNestedCode: length mismatch");
}

ZpVector GeneratorNestedCode::codeword(const ZpVector& a, const BinIndex& m) const {
    return vec_mat_mul(a, G_) + vec_mat_mul(m, dG_) + B_;
}

size_t GeneratorNestedCode::stacked_rank() const { return rank(G_.stacked(dG_)); }

GeneratorNestedCode GeneratorNestedCode::sample(PrimeModulus p, CodeDims dims, Rng& rng) {
    ZpMatrix G = ZpMatrix::uniform(p, dims.l, dims.n, rng);
    ZpMatrix dG = ZpMatrix::uniform(p, dims.k, dims.n, rng);
    ZpVector B = ZpVector::uniform(p, dims.n, rng);
    return GeneratorNestedCode(std::move(G), std::move(dG), std::move(B));
}

namespace {

void put_ints(std::ostringstream& os, const std::vector<uint32_t>& v) {
    for (size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    os << "\n";
}

std::vector<uint32_t> get_ints(std::istringstream& is, size_t count) {
    std::vector<uint32_t> v(count);
    for (auto& x : v)
        if (!(is >> x)) throw std::runtime_error("code record: truncated input");
    return v;
}

}  // namespace

std::string GeneratorNestedCode::to_text() const {
    CodeDims d = dims();
    std::ostringstream os;
    os << "generator\n" << modulus().value() << "\n" << d.n << " " << d.k << " " << d.l << "\n";
    put_ints(os, G_.entries());
    put_ints(os, dG_.entries());
    put_ints(os, B_.entries());
    return os.str();
}

GeneratorNestedCode GeneratorNestedCode::from_text(const std::string& text) {
    std::istringstream is(text);
    std::string kind;
    uint32_t pv;
    size_t n, k, l;
    if (!(is >> kind >> pv >> n >> k >> l) || kind != "generator")
        throw std::runtime_error("code record: bad generator header");
    PrimeModulus p(pv);
    std::istringstream rest(text.substr(size_t(is.tellg())));
    ZpMatrix G(p, l, n, get_ints(rest, l * n));
    ZpMatrix dG(p, k, n, get_ints(rest, k * n));
    ZpVector B(p, get_ints(rest, n));
    return GeneratorNestedCode(std::move(G), std::move(dG), std::move(B));
}

ParityNestedCode::ParityNestedCode(ZpMatrix H, ZpMatrix dH, ZpVector c, ZpVector dc)
    : H_(std::move(H)), dH_(std::move(dH)), c_(std::move(c)), dc_(std::move(dc)) {
    if (H_.modulus() != dH_.modulus() || H_.modulus() != c_.modulus() || H_.modulus() != dc_.modulus())
        throw std::invalid_argument("ParityNestedCode: modulus mismatch");
    if (H_.cols() != dH_.cols()) throw std::invalid_argument("ParityNestedCode: length mismatch");
    if (H_.rows() != c_.size() || dH_.rows() != dc_.size())
        throw std::invalid_argument("ParityNestedCode: bias length mismatch");
}

Membership ParityNestedCode::membership(const ZpVector& u) const {
    if (mat_vec_mul(H_, u) != c_) return Membership::neither;
    if (mat_vec_mul(dH_, u) != dc_) return Membership::outer;
    return Membership::inner;
}

BinIndex ParityNestedCode::bin_index(const ZpVector& u) const {
    if (mat_vec_mul(H_, u) != c_) throw std::invalid_argument("bin_index: u is not an outer codeword");
    return mat_vec_mul(dH_, u);
}

AffineSolutionSet ParityNestedCode::outer_solutions() const { return solve_affine(H_, c_); }

AffineSolutionSet ParityNestedCode::bin_solutions(const BinIndex& m) const {
    ZpMatrix stacked = H_.stacked(dH_);
    ZpVector rhs(modulus(), c_.size() + m.size());
    for (size_t i = 0; i < c_.size(); ++i) rhs[i] = c_[i];
    for (size_t i = 0; i < m.size(); ++i) rhs[c_.size() + i] = m[i];
    return solve_affine(stacked, rhs);
}

ParityNestedCode ParityNestedCode::sample(PrimeModulus p, CodeDims dims, Rng& rng) {
    ZpMatrix H = ZpMatrix::uniform(p, dims.l, dims.n, rng);
    ZpMatrix dH = ZpMatrix::uniform(p, dims.k, dims.n, rng);
    ZpVector c = ZpVector::uniform(p, dims.l, rng);
    ZpVector dc = ZpVector::uniform(p, dims.k, rng);
    return ParityNestedCode(std::move(H), std::move(dH), std::move(c), std::move(dc));
}

std::string ParityNestedCode::to_text() const {
    CodeDims d = dims();
    std::ostringstream os;
    os << "parity\n" << modulus().value() << "\n" << d.n << " " << d.k << " " << d.l << "\n";
    put_ints(os, H_.entries());
    put_ints(os, dH_.entries());
    put_ints(os, c_.entries());
    put_ints(os, dc_.entries());
    return os.str();
}

ParityNestedCode ParityNestedCode::from_text(const std::string& text) {
    std::istringstream is(text);
    std::string kind;
    uint32_t pv;
    size_t n, k, l;
    if (!(is >> kind >> pv >> n >> k >> l) || kind != "parity")
        throw std::runtime_error("code record: bad parity header");
    PrimeModulus p(pv);
    std::istringstream rest(text.substr(size_t(is.tellg())));
    ZpMatrix H(p, l, n, get_ints(rest, l * n));
    ZpMatrix dH(p, k, n, get_ints(rest, k * n));
    ZpVector c(p, get_ints(rest, l));
    ZpVector dc(p, get_ints(rest, k));
    return ParityNestedCode(std::move(H), std::move(dH), std::move(c), std::move(dc));
}

}  // namespace nlc
