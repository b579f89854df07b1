#pragma once

#include <map>

#include "vxa/voa.hpp"
#include "vxa/zhu.hpp"

namespace vxa {

// Element of the loop Lie algebra attached to (V, g): finite sums of a(q)
// with a in V and q in sector(a)/T + Z. Exponents are stored doubled (q2 =
// 2q) so both integer and half-integer loops use one integer type. Sums are
// kept in the normal form of the quotient by D = d/dt x 1 + 1 x L(-1):
// states avoid the image of L(-1) via the rewrite (L(-1)a)(q) = -q a(q-1),
// and 1(q) = 0 unless q = -1.
using LoopSum = std::map<int, SparseVector>;  // q2 -> state

class LoopSpace {
  public:
    LoopSpace(const Voa& voa, int max_weight);
    const Voa& voa() const { return voa_; }

    bool exponent_legal(int sector, int q2) const;

    LoopSum normalize(const SparseVector& a, int q2) const;
    LoopSum normalize(const LoopSum& x) const;

    // [a(q2/2), b(p2/2)] = sum_i C(q2/2, i) (a_i b)((q2+p2)/2 - i), normalized.
    LoopSum bracket(const SparseVector& a, int a_q2, const SparseVector& b, int b_q2) const;
    LoopSum bracket(const LoopSum& x, const LoopSum& y) const;

    // degree (doubled) of a homogeneous a(q2/2): 2 wt(a) - q2 - 2.
    int degree2(const SparseVector& a_homog, int q2) const;
    // true when every term of the normalized sum has the given degree
    bool pure_degree(const LoopSum& x, int deg2) const;

    // Degree-0 sums map onto the algebra: a(wt a - 1) -> class of a.
    SparseVector project_degree0(const LoopSum& x, const Presentation& pres) const;

    static LoopSum scaled(const LoopSum& x, const Scalar& c);
    static LoopSum sum(const LoopSum& x, const LoopSum& y);
    static bool is_zero(const LoopSum& x);

  private:
    struct ImageRow {
        SparseVector image;     // reduced image of L(-1), pivot = top index
        SparseVector preimage;  // state mapping onto `image`
    };

    const Voa& voa_;
    int max_weight_;
    // per weight: rref of L(-1)(V_{w-1}) with tracked preimages, keyed by pivot
    std::vector<std::map<int, ImageRow>> image_rows_;
};

}  // namespace vxa
