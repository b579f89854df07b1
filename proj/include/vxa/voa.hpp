#pragma once

#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "vxa/sparse.hpp"

namespace vxa {

enum class Family { heisenberg, virasoro };

// Built-in vertex algebras: the rank-1 free boson M(1) with generator a of
// weight 1, and the universal Virasoro vacuum algebra with generator L of
// weight 2 and rational central charge. The twist is the identity (T=1) or,
// for the boson, the order-2 sign flip a -> -a (T=2).
struct VoaSpec {
    Family family = Family::heisenberg;
    Scalar central_charge = Scalar(1);  // boson always has c = 1
    int twist_order = 1;                // 1 or 2
};

// A PBW monomial is a weakly increasing list of negative generator modes,
// applied right-to-left to the vacuum: modes[0] is the leftmost (outermost)
// factor. Boson modes are <= -1, Virasoro modes are <= -2.
using Monomial = std::vector<int>;

class Voa {
  public:
    // All monomials of weight <= weight_cap are enumerated and indexed in
    // (weight, lex) order at construction; intermediate results of the mode
    // calculus must stay under the cap.
    Voa(VoaSpec spec, int weight_cap);

    const VoaSpec& spec() const { return spec_; }
    int T() const { return spec_.twist_order; }
    int weight_cap() const { return cap_; }
    int generator_weight() const { return spec_.family == Family::heisenberg ? 1 : 2; }

    int basis_size() const { return static_cast<int>(monos_.size()); }
    const Monomial& modes(int id) const { return monos_[id]; }
    int weight(int id) const { return weights_[id]; }
    int sector(int id) const { return sectors_[id]; }
    int id_of(const Monomial& m) const;

    std::vector<int> basis_up_to(int W) const;
    std::vector<int> sector_basis(int r, int W) const;

    int vacuum_id() const { return 0; }
    SparseVector vacuum() const { return SparseVector(0); }
    SparseVector state(const Monomial& m, const Scalar& c = Scalar(1)) const;
    SparseVector omega() const;  // conformal vector

    // Weight/sector of the (wt, r)-homogeneous vector v; false if mixed.
    bool homogeneous(const SparseVector& v, int* wt = nullptr, int* r = nullptr) const;
    // Split into (weight, sector)-homogeneous parts, keyed by (wt, r).
    std::map<std::pair<int, int>, SparseVector> homogeneous_parts(const SparseVector& v) const;
    int top_weight(const SparseVector& v) const;

    // Generator mode a(j) resp. L(j) acting on a monomial state.
    SparseVector gen_mode(int j, int id) const;
    SparseVector gen_mode(int j, const SparseVector& v) const;

    // u_m v, extended bilinearly. Memoized per (monomial, m, monomial).
    SparseVector mode(int u_id, int m, int v_id) const;
    SparseVector mode(const SparseVector& u, int m, const SparseVector& v) const;

    SparseVector virasoro_op(int m, const SparseVector& v) const;  // L(m) v
    SparseVector translate(const SparseVector& v) const;           // L(-1) v
    // e^{L(1)} (-1)^{L(0)} v
    SparseVector phi(const SparseVector& v) const;
    // The automorphism g (sign per sector).
    SparseVector apply_twist(const SparseVector& v) const;

    std::string label(int id) const;
    std::string describe(const SparseVector& v) const;

  private:
    SparseVector mode_uncached(int u_id, int m, int v_id) const;
    SparseVector gen_mode_mono(int j, int id) const;

    VoaSpec spec_;
    int cap_;
    std::vector<Monomial> monos_;
    std::vector<int> weights_;
    std::vector<int> sectors_;
    std::map<Monomial, int> ids_;

    mutable std::unordered_map<long long, SparseVector> mode_memo_;
    mutable std::unordered_map<long long, SparseVector> gen_memo_;
    mutable std::mutex memo_mu_;
};

}  // namespace vxa
