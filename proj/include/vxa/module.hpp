#pragma once

#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "vxa/loop.hpp"
#include "vxa/voa.hpp"
#include "vxa/zhu.hpp"

namespace vxa {

enum class ModuleFamily { fock, fock_twisted, virasoro_verma };

ModuleFamily parse_module_family(const std::string&);
std::string module_family_str(ModuleFamily);

// Concrete graded modules with exact mode actions. Degrees and mode indices
// are stored doubled (half-integer steps for the twisted boson). Basis
// vectors are monomials in negative generator modes over the bottom vector:
// parts2 holds the doubled magnitudes, weakly decreasing.
//
// Composite state modes are built recursively from the generator action via
// the component form of twisted associativity, with memoized results; no
// normal-ordering correction constants are imported. Outputs that would pass
// the built degree window throw instead of wrapping.
class GradedModule {
  public:
    // param: highest weight of the bottom vector (fock: a(0)-eigenvalue;
    // virasoro_verma: L(0)-eigenvalue; ignored for the twisted boson).
    GradedModule(const Voa& voa, ModuleFamily fam, Scalar param, int max_deg2);

    const Voa& voa() const { return voa_; }
    ModuleFamily family() const { return fam_; }
    const Scalar& param() const { return param_; }
    int max_deg2() const { return max_deg2_; }

    int size() const { return static_cast<int>(basis_.size()); }
    int deg2(int mid) const { return degs_[mid]; }
    const std::vector<int>& parts2(int mid) const { return basis_[mid]; }
    const std::vector<int>& piece(int d2) const;
    int piece_dim(int d2) const { return static_cast<int>(piece(d2).size()); }
    int bottom_id() const { return 0; }

    bool mode_legal(int sector, int x2) const;

    // generator operator with doubled index: boson a(m2/2), Virasoro L(m2/2)
    SparseVector gen_op(int m2, int mid) const;
    SparseVector gen_op(int m2, const SparseVector& w) const;

    // state mode (u)_{x2/2} on a basis vector / vector; u a state of the voa
    SparseVector state_mode(int u_id, int x2, int mid) const;
    SparseVector state_mode(const SparseVector& u, int x2, const SparseVector& w) const;

    // o_{p2/2}(v) = v_{wt v - 1 - p} for homogeneous v: shifts degree by +p.
    SparseVector o_p(const SparseVector& v_homog, int p2, const SparseVector& w) const;
    // o(v) summed over homogeneous components (degree preserving).
    SparseVector zero_mode(const SparseVector& v, const SparseVector& w) const;

    SparseVector loop_action(const LoopSum& x, const SparseVector& w) const;

    std::string label(int mid) const;

  private:
    SparseVector state_mode_uncached(int u_id, int x2, int mid) const;
    SparseVector gen_op_mono(int m2, int mid) const;
    int intern(const std::vector<int>& parts2) const;

    const Voa& voa_;
    ModuleFamily fam_;
    Scalar param_;
    int max_deg2_;
    std::vector<std::vector<int>> basis_;
    std::vector<int> degs_;
    std::map<std::vector<int>, int> ids_;
    std::map<int, std::vector<int>> pieces_;

    mutable std::unordered_map<long long, SparseVector> memo_;
    mutable std::mutex memo_mu_;
};

// Joint kernel of the degree-lowering loop operators at the given level:
// strict keeps vectors killed by all operators of degree < -n, the variant
// behind strict=false also imposes degree -n.
struct OmegaSubspace {
    Level lvl;
    int D2 = 0;
    bool strict = true;
    std::map<int, std::vector<SparseVector>> pieces;  // d2 -> canonical basis rows

    int dim(int d2) const {
        auto it = pieces.find(d2);
        return it == pieces.end() ? 0 : static_cast<int>(it->second.size());
    }
    int total_dim() const;
};

OmegaSubspace omega_extract(const GradedModule& M, const Level& lvl, int D2, int voa_W,
                            bool strict = true);

// The weight-(u,v) contraction vector for the displayed boundary case: its
// zero mode reproduces o_p(u) o_{-p}(v) on the level-n kernel. k runs over
// 0..l subject to 0 <= p <= n.
struct ContractionCase {
    int k = 0;
    int p2 = 0;  // doubled shift
    SparseVector w;
};
bool contraction_legal(const Voa& voa, int r, int k, const Level& lvl, int* p2_out);
ContractionCase contraction_element(const Voa& voa, const SparseVector& u_homog,
                                    const SparseVector& v_homog, int k, const Level& lvl);

CheckResult check_representation(const Voa& voa, const Presentation& pres,
                                 const GradedModule& M, const OmegaSubspace& omega);
CheckResult check_contraction(const Voa& voa, const GradedModule& M, const Level& lvl,
                              int max_weight, int D2, int voa_W);
CheckResult check_layers(const GradedModule& M, const Level& lvl, int D2, int voa_W);
// Commutator consistency of the constructed composite actions:
// [a(p), b(q)] = sum_i C(p, i) (a_i b)(p+q-i) on pieces <= D2.
CheckResult check_module_commutators(const Voa& voa, const GradedModule& M, int max_weight,
                                     int D2);
// Exact component identity of twisted vertex operators on pieces <= D2.
CheckResult check_mode_identity(const Voa& voa, const GradedModule& M, int u_id, int v_id, int p,
                                int sbar2, int tbar2, int D2);

// o_0(omega)-eigenvalue on the bottom vector.
Scalar bottom_conformal_scalar(const GradedModule& M);

}  // namespace vxa
