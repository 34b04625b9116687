#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "nlc/zp.hpp"

namespace nlc {

struct CodeDims {
    size_t n;  // block length
    size_t k;  // bin index length (message)
    size_t l;  // inner code dimension / outer parity rows
};

// Bin index m in Z_p^k.
using BinIndex = ZpVector;

// Nested pair (C_i, C_o) in generator form:
//   C_o = { aG + m dG + B },  C_i = { aG + B },  bin m = { aG + m dG + B : a }.
class GeneratorNestedCode {
  public:
    GeneratorNestedCode(ZpMatrix G, ZpMatrix dG, ZpVector B);

    const ZpMatrix& G() const { return G_; }
    const ZpMatrix& dG() const { return dG_; }
    const ZpVector& B() const { return B_; }
    PrimeModulus modulus() const { return B_.modulus(); }
    CodeDims dims() const { return {B_.size(), dG_.rows(), G_.rows()}; }

    // aG + m dG + B mod p.
    ZpVector codeword(const ZpVector& a, const BinIndex& m) const;

    // rank of the stacked [G; dG]; full rank means the bins partition C_o.
    size_t stacked_rank() const;

    static GeneratorNestedCode sample(PrimeModulus p, CodeDims dims, Rng& rng);

    std::string to_text() const;
    static GeneratorNestedCode from_text(const std::string& text);

  private:
    ZpMatrix G_, dG_;
    ZpVector B_;
};

enum class Membership { neither, outer, inner };

// Nested pair in parity-check form:
//   C_o = { u : Hu = c },  C_i = { u : Hu = c, dHu = dc },  bin m = { u : Hu = c, dHu = m }.
class ParityNestedCode {
  public:
    ParityNestedCode(ZpMatrix H, ZpMatrix dH, ZpVector c, ZpVector dc);

    const ZpMatrix& H() const { return H_; }
    const ZpMatrix& dH() const { return dH_; }
    const ZpVector& c() const { return c_; }
    const ZpVector& dc() const { return dc_; }
    PrimeModulus modulus() const { return c_.modulus(); }
    CodeDims dims() const { return {H_.cols(), dH_.rows(), H_.rows()}; }

    Membership membership(const ZpVector& u) const;

    // m = dH u; throws if u is not an outer codeword.
    BinIndex bin_index(const ZpVector& u) const;

    // Solution set of the outer system Hu = c.
    AffineSolutionSet outer_solutions() const;
    // Solution set of the bin system [H; dH] u = [c; m].
    AffineSolutionSet bin_solutions(const BinIndex& m) const;

    static ParityNestedCode sample(PrimeModulus p, CodeDims dims, Rng& rng);

    std::string to_text() const;
    static ParityNestedCode from_text(const std::string& text);

  private:
    ZpMatrix H_, dH_;
    ZpVector c_, dc_;
};

}  // namespace nlc
