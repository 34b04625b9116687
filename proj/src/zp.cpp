#include "nlc/zp.hpp"

#include <algorithm>

namespace nlc {

bool is_prime(uint64_t x) {
    if (x < 2) return false;
    if (x < 4) return true;
    if (x % 2 == 0) return false;
    for (uint64_t d = 3; d * d <= x; d += 2)
        if (x % d == 0) return false;
    return true;
}

PrimeModulus::PrimeModulus(uint32_t p) : p_(p) {
    if (p < 3) throw std::invalid_argument("PrimeModulus: need odd prime >= 3");
    if (p % 2 == 0) throw std::invalid_argument("PrimeModulus: p must be odd");
    if (!is_prime(p)) throw std::invalid_argument("PrimeModulus: " + std::to_string(p) + " is not prime");
}

PrimeModulus smallest_prime_above(uint64_t x) {
    if (x < 2) throw std::invalid_argument("smallest_prime_above: x must be >= 2");
    uint64_t c = x + 1;
    if (c % 2 == 0) ++c;  // skip even candidates (and 2 itself)
    while (!is_prime(c)) c += 2;
    if (c > 0x7fffffffULL) throw std::overflow_error("smallest_prime_above: result too large");
    return PrimeModulus(uint32_t(c));
}

ZpVector::ZpVector(PrimeModulus p, std::vector<uint32_t> entries) : p_(p), e_(std::move(entries)) {
    for (uint32_t v : e_)
        if (v >= p_.value()) throw std::invalid_argument("ZpVector: entry out of range");
}

ZpVector ZpVector::operator+(const ZpVector& o) const {
    if (p_ != o.p_) throw std::invalid_argument("ZpVector: modulus mismatch");
    if (size() != o.size()) throw std::invalid_argument("ZpVector: length mismatch");
    ZpVector r(p_, size());
    uint32_t p = p_.value();
    for (size_t i = 0; i < size(); ++i) {
        uint32_t s = e_[i] + o.e_[i];
        r.e_[i] = s >= p ? s - p : s;
    }
    return r;
}

ZpVector ZpVector::operator-(const ZpVector& o) const {
    if (p_ != o.p_) throw std::invalid_argument("ZpVector: modulus mismatch");
    if (size() != o.size()) throw std::invalid_argument("ZpVector: length mismatch");
    ZpVector r(p_, size());
    uint32_t p = p_.value();
    for (size_t i = 0; i < size(); ++i)
        r.e_[i] = e_[i] >= o.e_[i] ? e_[i] - o.e_[i] : e_[i] + p - o.e_[i];
    return r;
}

ZpVector ZpVector::uniform(PrimeModulus p, size_t n, Rng& rng) {
    ZpVector v(p, n);
    for (size_t i = 0; i < n; ++i) v[i] = uint32_t(rng.next_below(p.value()));
    return v;
}

ZpMatrix::ZpMatrix(PrimeModulus p, size_t rows, size_t cols, std::vector<uint32_t> entries)
    : p_(p), rows_(rows), cols_(cols), e_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("ZpMatrix: dimensions must be positive");
    if (e_.size() != rows * cols) throw std::invalid_argument("ZpMatrix: entry count mismatch");
    for (uint32_t v : e_)
        if (v >= p_.value()) throw std::invalid_argument("ZpMatrix: entry out of range");
}

ZpMatrix ZpMatrix::stacked(const ZpMatrix& o) const {
    if (p_ != o.p_ || cols_ != o.cols_) throw std::invalid_argument("ZpMatrix::stacked: shape mismatch");
    ZpMatrix r(p_, rows_ + o.rows_, cols_);
    std::copy(e_.begin(), e_.end(), r.e_.begin());
    std::copy(o.e_.begin(), o.e_.end(), r.e_.begin() + ptrdiff_t(e_.size()));
    return r;
}

ZpMatrix ZpMatrix::uniform(PrimeModulus p, size_t rows, size_t cols, Rng& rng) {
    ZpMatrix m(p, rows, cols);
    for (auto it = m.e_.begin(); it != m.e_.end(); ++it) *it = uint32_t(rng.next_below(p.value()));
    return m;
}

ZpVector vec_mat_mul(const ZpVector& u, const ZpMatrix& G) {
    if (u.modulus() != G.modulus()) throw std::invalid_argument("vec_mat_mul: modulus mismatch");
    if (u.size() != G.rows()) throw std::invalid_argument("vec_mat_mul: dimension mismatch");
    uint64_t p = G.modulus().value();
    ZpVector r(G.modulus(), G.cols());
    std::vector<uint64_t> acc(G.cols(), 0);
    for (size_t i = 0; i < G.rows(); ++i) {
        uint64_t s = u[i];
        if (s == 0) continue;
        for (size_t j = 0; j < G.cols(); ++j) acc[j] += s * G.at(i, j);
    }
    for (size_t j = 0; j < G.cols(); ++j) r[j] = uint32_t(acc[j] % p);
    return r;
}

ZpVector mat_vec_mul(const ZpMatrix& M, const ZpVector& u) {
    if (u.modulus() != M.modulus()) throw std::invalid_argument("mat_vec_mul: modulus mismatch");
    if (u.size() != M.cols()) throw std::invalid_argument("mat_vec_mul: dimension mismatch");
    uint64_t p = M.modulus().value();
    ZpVector r(M.modulus(), M.rows());
    for (size_t i = 0; i < M.rows(); ++i) {
        uint64_t acc = 0;
        for (size_t j = 0; j < M.cols(); ++j) acc += uint64_t(M.at(i, j)) * u[j];
        r[i] = uint32_t(acc % p);
    }
    return r;
}

namespace {

uint32_t mod_pow(uint64_t b, uint64_t e, uint64_t p) {
    uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return uint32_t(r);
}

uint32_t mod_inv(uint32_t a, uint32_t p) { return mod_pow(a, p - 2, p); }

// Row-reduces [M | rhs] in place. Returns pivot column list. rhs may be null.
std::vector<size_t> row_reduce(std::vector<std::vector<uint32_t>>& m, uint32_t p) {
    size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t pr = r;
        while (pr < rows && m[pr][c] == 0) ++pr;
        if (pr == rows) continue;
        std::swap(m[r], m[pr]);
        uint64_t inv = mod_inv(m[r][c], p);
        for (size_t j = c; j < cols; ++j) m[r][j] = uint32_t(m[r][j] * inv % p);
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            uint64_t f = m[i][c];
            for (size_t j = c; j < cols; ++j) {
                uint64_t v = m[i][j] + (p - uint32_t(f * m[r][j] % p));
                m[i][j] = uint32_t(v % p);
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

size_t rank(const ZpMatrix& M) {
    uint32_t p = M.modulus().value();
    std::vector<std::vector<uint32_t>> m(M.rows(), std::vector<uint32_t>(M.cols()));
    for (size_t i = 0; i < M.rows(); ++i)
        for (size_t j = 0; j < M.cols(); ++j) m[i][j] = M.at(i, j);
    return row_reduce(m, p).size();
}

AffineSolutionSet::AffineSolutionSet(const ZpMatrix& H, const ZpVector& c)
    : p_(H.modulus()), n_(H.cols()), consistent_(true), rank_(0), particular_(H.modulus(), H.cols()) {
    if (H.modulus() != c.modulus()) throw std::invalid_argument("solve_affine: modulus mismatch");
    if (H.rows() != c.size()) throw std::invalid_argument("solve_affine: H.rows != c.length");
    uint32_t p = p_.value();
    size_t rows = H.rows(), cols = n_;

    // Augmented RREF.
    std::vector<std::vector<uint32_t>> m(rows, std::vector<uint32_t>(cols + 1));
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) m[i][j] = H.at(i, j);
        m[i][cols] = c[i];
    }
    std::vector<size_t> pivots = row_reduce(m, p);
    if (!pivots.empty() && pivots.back() == cols) {
        consistent_ = false;  // pivot in the rhs column
        rank_ = pivots.size() - 1;
        return;
    }
    rank_ = pivots.size();

    std::vector<bool> is_pivot(cols, false);
    for (size_t c2 : pivots) is_pivot[c2] = true;

    for (size_t i = 0; i < pivots.size(); ++i) particular_[pivots[i]] = m[i][cols];

    // One kernel basis vector per free column, in column order: free column f
    // set to 1, pivot columns get the negated column entries.
    for (size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        ZpVector b(p_, cols);
        b[f] = 1;
        for (size_t i = 0; i < pivots.size(); ++i)
            b[pivots[i]] = m[i][f] == 0 ? 0 : p - m[i][f];
        kernel_.push_back(std::move(b));
    }
}

uint64_t AffineSolutionSet::count() const {
    if (!consistent_) return 0;
    uint64_t r = 1;
    for (size_t i = 0; i < kernel_.size(); ++i) {
        if (r > (uint64_t(1) << 62) / p_.value()) throw std::overflow_error("AffineSolutionSet::count overflow");
        r *= p_.value();
    }
    return r;
}

AffineSolutionSet::Iterator::Iterator(const AffineSolutionSet* set, bool done)
    : set_(set), coeff_(set->kernel_.size(), 0), current_(set->p_, set->n_), done_(done) {
    if (!done_) recompute();
}

void AffineSolutionSet::Iterator::recompute() {
    current_ = set_->particular_;
    for (size_t i = 0; i < coeff_.size(); ++i) {
        if (coeff_[i] == 0) continue;
        uint32_t p = set_->p_.value();
        const ZpVector& b = set_->kernel_[i];
        for (size_t j = 0; j < current_.size(); ++j)
            current_[j] = uint32_t((current_[j] + uint64_t(coeff_[i]) * b[j]) % p);
    }
}

void AffineSolutionSet::Iterator::advance() {
    uint32_t p = set_->p_.value();
    // Lexicographic order with the last coefficient fastest.
    size_t i = coeff_.size();
    while (i > 0) {
        --i;
        if (++coeff_[i] < p) {
            recompute();
            return;
        }
        coeff_[i] = 0;
    }
    done_ = true;
}

std::vector<ZpVector> AffineSolutionSet::all() const {
    std::vector<ZpVector> out;
    for (Iterator it = begin(); !it.done(); it.advance()) out.push_back(it.value());
    return out;
}

AffineSolutionSet solve_affine(const ZpMatrix& H, const ZpVector& c) { return AffineSolutionSet(H, c); }

}  // namespace nlc
