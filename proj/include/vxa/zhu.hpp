#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vxa/voa.hpp"

namespace vxa {

// Level n = l + i/T of the filtration, with l >= 0 and 0 <= i < T.
struct Level {
    int l = 0;
    int i = 0;
    int T = 1;

    bool operator==(const Level&) const = default;
    Scalar n() const { return Scalar(l) + make_scalar(i, T); }
    bool has_predecessor() const { return l > 0 || i > 0; }
    Level predecessor() const;
    std::string str() const;
};

Level parse_level(const std::string& text, int T);

// delta_i(r) for 0 <= r <= T: 1 if i >= r or r = T, else 0.
int delta_fn(int i, int r, int T);

// Parameters of the residue product attached to a sector-r vector of weight
// wt at the given level: coefficient series (1+z)^exponent, denominator
// z^denom. For r != 0 the denominator power carries one more unit than the
// two delta terms; this is what makes the zero mode of every such product
// vanish on the level-n lowest-weight spaces and keeps the vacuum class
// nonzero (see tests and the n = 0 specialization).
struct ResidueParams {
    Scalar exponent;
    int denom;
};
ResidueParams circle_params(int wt, int r, const Level& lvl);

// sum_{j>=0} C(exponent, j) u_{j-denom} v (finite; u homogeneous).
SparseVector residue_product(const Voa& voa, const SparseVector& u_homog, const SparseVector& v,
                             const Scalar& exponent, int denom);

// u homogeneous in V^r: the defining product of the relation space.
SparseVector circle_product(const Voa& voa, const SparseVector& u, const SparseVector& v,
                            const Level& lvl);

// The algebra product: zero on sectors r > 0, the level-l filtration product
// on V^0. Extended bilinearly over inhomogeneous u.
SparseVector star_product(const Voa& voa, const SparseVector& u, const SparseVector& v,
                          const Level& lvl);

struct OElement {
    SparseVector vec;
    std::string desc;
    int sector = 0;
};

// Spanning elements of the relation space supported in weight <= W:
// L(-1)u + L(0)u, and the residue family with numerator shift k and extra
// denominator power m for 0 <= k <= m <= depth.
std::vector<OElement> o_spanning_elements(const Voa& voa, const Level& lvl, int W, int depth);

struct Presentation {
    Level lvl;
    int W = 0;
    int depth = 0;
    SubspaceBasis relations;
    std::vector<int> class_ids;  // quotient representatives (monomial ids)
    std::unordered_map<int, int> class_pos;
    std::vector<int> dims_per_weight;
    int identity_class = -1;
    // structure constants for product-safe pairs, coordinates over class positions
    std::map<std::pair<int, int>, SparseVector> table;

    bool pair_safe(int wt_a, int wt_b) const { return wt_a + wt_b + 2 * lvl.l <= W; }
    // reduce a vector supported in weight <= W to quotient coordinates
    SparseVector to_classes(const Voa& voa, const SparseVector& v) const;
    SparseVector class_state(int pos) const { return SparseVector(class_ids[pos]); }
};

Presentation build_algebra(const Voa& voa, const Level& lvl, int W, int depth, int jobs = 1);

// Negative-control fixture: returns a copy with one structure constant
// altered, which the associativity check must catch.
Presentation perturb_presentation(const Presentation& pres);

struct CheckResult {
    std::string name;
    std::string params;
    bool pass = true;
    bool skipped = false;
    std::string reason;
    std::string witness;
    long cases = 0;

    static CheckResult skip(std::string name, std::string params, std::string why) {
        CheckResult r;
        r.name = std::move(name);
        r.params = std::move(params);
        r.skipped = true;
        r.reason = std::move(why);
        return r;
    }
};

CheckResult check_associativity(const Voa& voa, const Presentation& pres);
CheckResult check_identity(const Voa& voa, const Presentation& pres);
CheckResult check_center(const Voa& voa, const Presentation& pres);
CheckResult check_ideal(const Voa& voa, const Presentation& pres,
                        const std::vector<OElement>& elements);
// Nonzero-sector collapse: every V^r (r != 0) basis vector of weight <= W
// reduces to zero, and the vacuum-insertion certificate produces a nonzero
// multiple of v under L(-1) -> -L(0) rewriting alone.
CheckResult check_sector_collapse(const Voa& voa, const Presentation& pres);
CheckResult check_surjection(const Voa& voa, const Level& lvl, int W, int depth);
CheckResult check_anti_isomorphism(const Voa& voa, const Presentation& pres,
                                   const std::vector<OElement>& elements);
CheckResult check_commutator_formula(const Voa& voa, const Presentation& pres);

}  // namespace vxa
