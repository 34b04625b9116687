#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlc/rng.hpp"

namespace nlc {

// Odd prime modulus for all code constructions. p = 2 is rejected because
// the lattice map needs the integer shift (p-1)/2.
class PrimeModulus {
  public:
    explicit PrimeModulus(uint32_t p);
    uint32_t value() const { return p_; }
    friend bool operator==(PrimeModulus a, PrimeModulus b) { return a.p_ == b.p_; }
    friend bool operator!=(PrimeModulus a, PrimeModulus b) { return a.p_ != b.p_; }

  private:
    uint32_t p_;
};

bool is_prime(uint64_t x);

// Least odd prime strictly greater than x; requires x >= 2.
PrimeModulus smallest_prime_above(uint64_t x);

// Vector over Z_p, entries canonical in [0, p).
class ZpVector {
  public:
    ZpVector(PrimeModulus p, size_t n) : p_(p), e_(n, 0) {}
    ZpVector(PrimeModulus p, std::vector<uint32_t> entries);

    PrimeModulus modulus() const { return p_; }
    size_t size() const { return e_.size(); }
    uint32_t operator[](size_t i) const { return e_[i]; }
    uint32_t& operator[](size_t i) { return e_[i]; }
    const std::vector<uint32_t>& entries() const { return e_; }

    ZpVector operator+(const ZpVector& o) const;
    ZpVector operator-(const ZpVector& o) const;
    bool operator==(const ZpVector& o) const { return p_ == o.p_ && e_ == o.e_; }

    static ZpVector uniform(PrimeModulus p, size_t n, Rng& rng);

  private:
    PrimeModulus p_;
    std::vector<uint32_t> e_;
};

// Dense row-major matrix over Z_p.
class ZpMatrix {
  public:
    ZpMatrix(PrimeModulus p, size_t rows, size_t cols)
        : p_(p), rows_(rows), cols_(cols), e_(rows * cols, 0) {
        if (rows == 0 || cols == 0) throw std::invalid_argument("ZpMatrix: dimensions must be positive");
    }
    ZpMatrix(PrimeModulus p, size_t rows, size_t cols, std::vector<uint32_t> entries);

    PrimeModulus modulus() const { return p_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    uint32_t at(size_t r, size_t c) const { return e_[r * cols_ + c]; }
    uint32_t& at(size_t r, size_t c) { return e_[r * cols_ + c]; }
    const std::vector<uint32_t>& entries() const { return e_; }

    // Rows of this stacked above rows of o.
    ZpMatrix stacked(const ZpMatrix& o) const;

    static ZpMatrix uniform(PrimeModulus p, size_t rows, size_t cols, Rng& rng);

  private:
    PrimeModulus p_;
    size_t rows_, cols_;
    std::vector<uint32_t> e_;
};

// result[j] = sum_i u[i] * G[i][j] mod p
ZpVector vec_mat_mul(const ZpVector& u, const ZpMatrix& G);

// result[i] = sum_j M[i][j] * u[j] mod p (parity-check application Hu)
ZpVector mat_vec_mul(const ZpMatrix& M, const ZpVector& u);

// Rank over Z_p by exact Gaussian elimination.
size_t rank(const ZpMatrix& M);

// Solution set of H u = c over Z_p, as particular solution plus kernel
// basis. Enumeration walks kernel coefficients lexicographically, so the
// order is deterministic. Empty set (consistent() == false) signals an
// inconsistent system.
class AffineSolutionSet {
  public:
    AffineSolutionSet(const ZpMatrix& H, const ZpVector& c);

    bool consistent() const { return consistent_; }
    size_t rank() const { return rank_; }
    // p^(n - rank) when consistent, 0 otherwise. Throws on overflow past 2^63.
    uint64_t count() const;
    const ZpVector& particular() const { return particular_; }
    const std::vector<ZpVector>& kernel_basis() const { return kernel_; }

    class Iterator {
      public:
        bool done() const { return done_; }
        const ZpVector& value() const { return current_; }
        void advance();

      private:
        friend class AffineSolutionSet;
        Iterator(const AffineSolutionSet* set, bool done);
        const AffineSolutionSet* set_;
        std::vector<uint32_t> coeff_;
        ZpVector current_;
        bool done_;
        void recompute();
    };
    Iterator begin() const { return Iterator(this, !consistent_); }

    // Collects all solutions; intended for small systems only.
    std::vector<ZpVector> all() const;

  private:
    PrimeModulus p_;
    size_t n_;
    bool consistent_;
    size_t rank_;
    ZpVector particular_;
    std::vector<ZpVector> kernel_;
};

AffineSolutionSet solve_affine(const ZpMatrix& H, const ZpVector& c);

}  // namespace nlc
