#include "vxa/module.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "vxa/binomial.hpp"

namespace vxa {

ModuleFamily parse_module_family(const std::string& s) {
    if (s == "fock") return ModuleFamily::fock;
    if (s == "fock_twisted") return ModuleFamily::fock_twisted;
    if (s == "virasoro_verma") return ModuleFamily::virasoro_verma;
    throw std::invalid_argument("module: unknown family '" + s + "'");
}

std::string module_family_str(ModuleFamily f) {
    switch (f) {
        case ModuleFamily::fock: return "fock";
        case ModuleFamily::fock_twisted: return "fock_twisted";
        case ModuleFamily::virasoro_verma: return "virasoro_verma";
    }
    return "?";
}

namespace {

// partitions of total into parts from the allowed step set, weakly
// decreasing, parts2 values
void enumerate_parts(int total, int max_part, int step, int min_part, std::vector<int>& acc,
                     std::vector<std::vector<int>>& out) {
    if (total == 0) {
        out.push_back(acc);
        return;
    }
    for (int part = std::min(total, max_part); part >= min_part; part -= step) {
        if ((part - min_part) % step != 0) continue;
        acc.push_back(part);
        enumerate_parts(total - part, part, step, min_part, acc, out);
        acc.pop_back();
    }
}

long long pack3(int a, int b, int c) {
    return (static_cast<long long>(a) << 44) ^
           (static_cast<long long>(b + (1 << 21)) << 22) ^ static_cast<long long>(c);
}

}  // namespace

GradedModule::GradedModule(const Voa& voa, ModuleFamily fam, Scalar param, int max_deg2)
    : voa_(voa), fam_(fam), param_(std::move(param)), max_deg2_(max_deg2) {
    bool ok = (fam == ModuleFamily::fock && voa.spec().family == Family::heisenberg &&
               voa.T() == 1) ||
              (fam == ModuleFamily::fock_twisted && voa.spec().family == Family::heisenberg &&
               voa.T() == 2) ||
              (fam == ModuleFamily::virasoro_verma && voa.spec().family == Family::virasoro);
    if (!ok) throw std::invalid_argument("module: family incompatible with the algebra/twist");

    // allowed parts2: fock/virasoro_verma: even >= 2; twisted boson: odd >= 1
    int step = 2;
    int min_part = fam == ModuleFamily::fock_twisted ? 1 : 2;
    for (int d2 = 0; d2 <= max_deg2_; ++d2) {
        if (fam != ModuleFamily::fock_twisted && d2 % 2 == 1) continue;
        std::vector<std::vector<int>> level;
        std::vector<int> acc;
        enumerate_parts(d2, d2, step, min_part, acc, level);
        std::sort(level.begin(), level.end());
        for (auto& parts : level) {
            int id = static_cast<int>(basis_.size());
            ids_.emplace(parts, id);
            degs_.push_back(d2);
            pieces_[d2].push_back(id);
            basis_.push_back(std::move(parts));
        }
    }
}

const std::vector<int>& GradedModule::piece(int d2) const {
    static const std::vector<int> kEmpty;
    auto it = pieces_.find(d2);
    return it == pieces_.end() ? kEmpty : it->second;
}

int GradedModule::intern(const std::vector<int>& parts2) const {
    auto it = ids_.find(parts2);
    if (it == ids_.end())
        throw std::out_of_range("module: vector leaves the built degree window");
    return it->second;
}

bool GradedModule::mode_legal(int sector, int x2) const {
    if (voa_.T() == 1) return x2 % 2 == 0;
    return ((x2 % 2) + 2) % 2 == sector;
}

SparseVector GradedModule::gen_op_mono(int m2, int mid) const {
    const std::vector<int>& parts = basis_[mid];
    if (fam_ != ModuleFamily::virasoro_verma) {
        // free boson modes: [a(p), a(q)] = p delta_{p+q,0}
        if (fam_ == ModuleFamily::fock && m2 == 0) return Scalar(param_) * SparseVector(mid);
        if (m2 < 0) {
            std::vector<int> next = parts;
            next.insert(std::lower_bound(next.begin(), next.end(), -m2,
                                         [](int a, int b) { return a > b; }),
                        -m2);
            return SparseVector(intern(next));
        }
        int mult = static_cast<int>(std::count(parts.begin(), parts.end(), m2));
        if (mult == 0) return {};
        std::vector<int> next;
        next.reserve(parts.size() - 1);
        bool dropped = false;
        for (int p : parts) {
            if (!dropped && p == m2) {
                dropped = true;
                continue;
            }
            next.push_back(p);
        }
        return SparseVector(intern(next), make_scalar(m2, 2) * mult);
    }

    // Virasoro: straighten L(j), j = m2/2
    int j = m2 / 2;
    if (parts.empty()) {
        if (j > 0) return {};
        if (j == 0) return Scalar(param_) * SparseVector(mid);
        std::vector<int> next{-m2};
        return SparseVector(intern(next));
    }
    int k1 = parts[0] / 2;  // leftmost factor L(-k1)
    if (j <= -k1) {
        std::vector<int> next;
        next.reserve(parts.size() + 1);
        next.push_back(-m2);
        next.insert(next.end(), parts.begin(), parts.end());
        return SparseVector(intern(next));
    }
    std::vector<int> rest(parts.begin() + 1, parts.end());
    int rest_id = intern(rest);
    SparseVector result = Scalar(j + k1) * gen_op(2 * (j - k1), rest_id);
    if (j == k1) {
        long long jj = j;
        Scalar central = voa_.spec().central_charge * Scalar(static_cast<long>(jj * jj * jj - jj));
        central /= 12;
        result.add_scaled(SparseVector(rest_id), central);
    }
    result = result + gen_op(-2 * k1, gen_op(m2, rest_id));
    return result;
}

SparseVector GradedModule::gen_op(int m2, int mid) const {
    // legality of the index parity
    if (fam_ == ModuleFamily::fock_twisted) {
        if (m2 % 2 == 0) throw std::invalid_argument("module: even boson mode in twisted sector");
    } else if (((m2 % 2) + 2) % 2 != 0) {
        throw std::invalid_argument("module: half-integer mode on untwisted module");
    }
    return gen_op_mono(m2, mid);
}

SparseVector GradedModule::gen_op(int m2, const SparseVector& w) const {
    SparseVector out;
    for (const auto& [mid, c] : w.e) out.add_scaled(gen_op(m2, mid), c);
    return out;
}

// (a_p u')_x via the component form of twisted associativity, with
// sbar = sector(a)/T and tbar = x - sbar:
//   (a_p u')_x = sum_{m>=0} (-1)^m C(p,m)
//                  [ a_{p+sbar-m} u'_{tbar+m} - (-1)^p u'_{p+tbar-m} a_{sbar+m} ]
//              - sum_{m>=1} C(sbar,m) (a_{p+m} u')_{x-m}
SparseVector GradedModule::state_mode_uncached(int u_id, int x2, int mid) const {
    const Monomial& u = voa_.modes(u_id);
    if (u.empty()) return x2 == -2 ? SparseVector(mid) : SparseVector{};
    int h = voa_.generator_weight();
    auto gen_state_mode = [&](int y2, const SparseVector& w) {
        // generator state mode index -> operator index: a_y = a(y) (boson),
        // omega_y = L(y-1) (Virasoro)
        return gen_op(y2 - 2 * (h - 1), w);
    };
    if (static_cast<int>(u.size()) == 1 && u[0] == -h)
        return gen_state_mode(x2, SparseVector(mid));

    int op_index = u[0];
    int p = op_index + (h - 1);
    Monomial rest(u.begin() + 1, u.end());
    int rest_id = voa_.id_of(rest);
    int wt_rest = voa_.weight(u_id) + op_index;
    int rho = (fam_ == ModuleFamily::fock_twisted) ? 1 : 0;  // generator sector
    int sbar2 = rho;
    int tbar2 = x2 - sbar2;
    int d2 = degs_[mid];

    SparseVector result;
    // stream bounds: targets below degree 0 vanish
    int mb1 = (d2 + 2 * wt_rest - tbar2 - 2) / 2;
    int mb2 = (d2 + 2 * h - sbar2 - 2) / 2;
    int mb3 = h + wt_rest - p - 1;
    int sign_p = int_sign_pow(p);
    Scalar binom_p(1);
    for (int m = 0; m <= std::max(mb1, mb2); ++m) {
        if (m > 0) {
            binom_p *= (p - (m - 1));
            binom_p /= m;
        }
        Scalar c = (m % 2 == 0) ? binom_p : -binom_p;
        if (c == 0) continue;
        if (m <= mb1) {
            SparseVector inner = state_mode(rest_id, tbar2 + 2 * m, mid);
            if (!inner.zero())
                result.add_scaled(gen_state_mode(2 * p + sbar2 - 2 * m, inner), c);
        }
        if (m <= mb2) {
            SparseVector aw = gen_state_mode(sbar2 + 2 * m, SparseVector(mid));
            if (!aw.zero()) {
                SparseVector term;
                for (const auto& [wid, cw] : aw.e)
                    term.add_scaled(state_mode(rest_id, 2 * p + tbar2 - 2 * m, wid), cw);
                result.add_scaled(term, -Scalar(sign_p) * c);
            }
        }
    }
    if (sbar2 != 0) {
        Scalar sbar = make_scalar(sbar2, 2);
        for (int m = 1; m <= mb3; ++m) {
            Scalar c = rat_binomial(sbar, m);
            if (c == 0) continue;
            SparseVector au = voa_.mode(voa_.state(Monomial{-h}), p + m, SparseVector(rest_id));
            if (au.zero()) continue;
            SparseVector term;
            for (const auto& [vid, cv] : au.e)
                term.add_scaled(state_mode(vid, x2 - 2 * m, mid), cv);
            result.add_scaled(term, -c);
        }
    }
    return result;
}

SparseVector GradedModule::state_mode(int u_id, int x2, int mid) const {
    if (!mode_legal(voa_.sector(u_id), x2))
        throw std::invalid_argument("module: mode index incompatible with sector of " +
                                    voa_.label(u_id));
    int target = degs_[mid] + 2 * voa_.weight(u_id) - x2 - 2;
    if (target < 0) return {};
    if (target > max_deg2_)
        throw std::out_of_range("module: action output above the built degree window");
    long long key = pack3(u_id, x2, mid);
    {
        std::lock_guard<std::mutex> lk(memo_mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    SparseVector result = state_mode_uncached(u_id, x2, mid);
    for (const auto& [rid, c] : result.e) {
        if (degs_[rid] != target)
            throw std::logic_error("module: action broke the degree grading");
    }
    std::lock_guard<std::mutex> lk(memo_mu_);
    return memo_.emplace(key, std::move(result)).first->second;
}

SparseVector GradedModule::state_mode(const SparseVector& u, int x2,
                                      const SparseVector& w) const {
    SparseVector out;
    for (const auto& [uid, cu] : u.e) {
        for (const auto& [wid, cw] : w.e) {
            out.add_scaled(state_mode(uid, x2, wid), cu * cw);
        }
    }
    return out;
}

SparseVector GradedModule::o_p(const SparseVector& v_homog, int p2, const SparseVector& w) const {
    int wt = 0;
    if (!voa_.homogeneous(v_homog, &wt))
        throw std::invalid_argument("module: o_p needs a homogeneous vector");
    return state_mode(v_homog, 2 * wt - 2 - p2, w);
}

SparseVector GradedModule::zero_mode(const SparseVector& v, const SparseVector& w) const {
    SparseVector out;
    for (const auto& [key, part] : voa_.homogeneous_parts(v)) {
        out = out + state_mode(part, 2 * key.first - 2, w);
    }
    return out;
}

SparseVector GradedModule::loop_action(const LoopSum& x, const SparseVector& w) const {
    SparseVector out;
    for (const auto& [q2, vec] : x) {
        for (const auto& [key, part] : voa_.homogeneous_parts(vec)) {
            out = out + state_mode(part, q2, w);
        }
    }
    return out;
}

std::string GradedModule::label(int mid) const {
    const std::vector<int>& parts = basis_[mid];
    if (parts.empty()) return "|0>";
    const char* gen = fam_ == ModuleFamily::virasoro_verma ? "L" : "a";
    std::ostringstream os;
    for (std::size_t t = 0; t < parts.size();) {
        std::size_t run = t;
        while (run < parts.size() && parts[run] == parts[t]) ++run;
        os << gen << "(-";
        if (parts[t] % 2 == 0)
            os << parts[t] / 2;
        else
            os << parts[t] << "/2";
        os << ")";
        if (run - t > 1) os << "^" << (run - t);
        t = run;
    }
    os << "|0>";
    return os.str();
}

int OmegaSubspace::total_dim() const {
    int n = 0;
    for (const auto& [d2, rows] : pieces) n += static_cast<int>(rows.size());
    return n;
}

OmegaSubspace omega_extract(const GradedModule& M, const Level& lvl, int D2, int voa_W,
                            bool strict) {
    const Voa& voa = M.voa();
    OmegaSubspace omega;
    omega.lvl = lvl;
    omega.D2 = D2;
    omega.strict = strict;
    int n2 = 2 * lvl.l + (lvl.T == 2 ? lvl.i : 0) * (2 / lvl.T);
    // n2 = doubled level; for T=1: 2l, for T=2: 2l + i
    for (int d2 = 0; d2 <= D2; ++d2) {
        const auto& piece = M.piece(d2);
        if (piece.empty()) continue;
        int dim = static_cast<int>(piece.size());
        RatMatrix rows;
        for (int v_id : voa.basis_up_to(voa_W)) {
            if (v_id == voa.vacuum_id()) continue;
            int wt = voa.weight(v_id);
            int r = voa.sector(v_id);
            // shift2 = 2wt - x2 - 2 must be < -n2 (strict) or <= -n2,
            // and the target degree d2 + shift2 must be >= 0
            int x2_min = 2 * wt - 2 + n2 + (strict ? 1 : 0);
            int x2_max = 2 * wt - 2 + d2;
            for (int x2 = x2_min; x2 <= x2_max; ++x2) {
                if (!M.mode_legal(r, x2)) continue;
                int target = d2 + 2 * wt - x2 - 2;
                const auto& target_piece = M.piece(target);
                if (target_piece.empty()) continue;
                std::map<int, int> target_pos;
                for (std::size_t t = 0; t < target_piece.size(); ++t)
                    target_pos[target_piece[t]] = static_cast<int>(t);
                RatMatrix block(target_piece.size(), std::vector<Scalar>(dim, Scalar(0)));
                bool nonzero = false;
                for (int col = 0; col < dim; ++col) {
                    SparseVector image = M.state_mode(v_id, x2, piece[col]);
                    for (const auto& [rid, c] : image.e) {
                        block[target_pos.at(rid)][col] = c;
                        nonzero = true;
                    }
                }
                if (!nonzero) continue;
                for (auto& row : block) rows.push_back(std::move(row));
            }
        }
        std::vector<SparseVector> basis_rows;
        if (rows.empty()) {
            for (int col = 0; col < dim; ++col) basis_rows.emplace_back(piece[col]);
        } else {
            auto kernel = nullspace_dense(rows, dim);
            SubspaceBasis canon;
            for (const auto& x : kernel) {
                SparseVector v;
                for (int col = 0; col < dim; ++col) {
                    if (x[col] != 0) v.set(piece[col], x[col]);
                }
                canon.insert(v);
            }
            for (const auto& [piv, row] : canon.rows()) basis_rows.push_back(row);
        }
        if (!basis_rows.empty()) omega.pieces[d2] = std::move(basis_rows);
    }
    return omega;
}

bool contraction_legal(const Voa&, int r, int k, const Level& lvl, int* p2_out) {
    // p = l + delta_i(T-r) - k - r/T, needs 0 <= p <= n (doubled: r/T -> r for T=2)
    int T = lvl.T;
    int p2 = 2 * lvl.l + 2 * delta_fn(lvl.i, T - r, T) - 2 * k - (T == 2 ? r : 0);
    int n2 = 2 * lvl.l + (T == 2 ? lvl.i : 0);
    if (p2_out) *p2_out = p2;
    return p2 >= 0 && p2 <= n2;
}

ContractionCase contraction_element(const Voa& voa, const SparseVector& u_homog,
                                    const SparseVector& v_homog, int k, const Level& lvl) {
    int wt_u = 0, r = 0, wt_v = 0, r_v = 0;
    if (!voa.homogeneous(u_homog, &wt_u, &r) || !voa.homogeneous(v_homog, &wt_v, &r_v))
        throw std::invalid_argument("contraction: inhomogeneous input");
    if ((r + r_v) % voa.T() != 0)
        throw std::invalid_argument("contraction: sectors must pair to zero");
    if (k < 0 || k > lvl.l) throw std::out_of_range("contraction: k outside 0..l");
    ContractionCase out;
    out.k = k;
    if (!contraction_legal(voa, r, k, lvl, &out.p2))
        throw std::out_of_range("contraction: shift outside 0..n");
    int base = 2 * lvl.l + delta_fn(lvl.i, r, lvl.T) + delta_fn(lvl.i, lvl.T - r, lvl.T);
    Scalar exponent =
        Scalar(wt_u + lvl.l - 1 + delta_fn(lvl.i, r, lvl.T)) + make_scalar(r, lvl.T);
    for (int m = 0; m <= k; ++m) {
        Scalar c = rat_binomial(Scalar(base - 1 + m - k), m);
        if (m % 2 == 1) c = -c;
        if (c == 0) continue;
        out.w.add_scaled(residue_product(voa, u_homog, v_homog, exponent, base - k + m), c);
    }
    return out;
}

CheckResult check_representation(const Voa& voa, const Presentation& pres,
                                 const GradedModule& M, const OmegaSubspace& omega) {
    CheckResult res;
    res.name = "representation";
    res.params = "level=" + pres.lvl.str() + ", W=" + std::to_string(pres.W) +
                 ", module=" + module_family_str(M.family());
    auto elements = o_spanning_elements(voa, pres.lvl, pres.W, pres.depth);
    for (const auto& [d2, rows] : omega.pieces) {
        for (const auto& row : rows) {
            for (const auto& o : elements) {
                if (o.sector != 0) continue;  // zero modes live on the fixed sector
                ++res.cases;
                if (!M.zero_mode(o.vec, row).zero()) {
                    res.pass = false;
                    res.witness = "o(" + o.desc + ") != 0 at degree " + std::to_string(d2);
                    return res;
                }
            }
        }
    }
    // multiplicativity on the fixed sector
    for (std::size_t a = 0; a < pres.class_ids.size(); ++a) {
        if (voa.sector(pres.class_ids[a]) != 0) continue;
        for (std::size_t b = 0; b < pres.class_ids.size(); ++b) {
            if (voa.sector(pres.class_ids[b]) != 0) continue;
            if (!pres.pair_safe(voa.weight(pres.class_ids[a]), voa.weight(pres.class_ids[b])))
                continue;
            SparseVector sa(pres.class_ids[a]);
            SparseVector sb(pres.class_ids[b]);
            SparseVector prod = star_product(voa, sa, sb, pres.lvl);
            for (const auto& [d2, rows] : omega.pieces) {
                for (const auto& row : rows) {
                    ++res.cases;
                    SparseVector lhs = M.zero_mode(prod, row);
                    SparseVector rhs = M.zero_mode(sa, M.zero_mode(sb, row));
                    if (!(lhs == rhs)) {
                        res.pass = false;
                        res.witness = "o(a*b) != o(a)o(b) for a=" +
                                      voa.label(pres.class_ids[a]) +
                                      ", b=" + voa.label(pres.class_ids[b]) + " at degree " +
                                      std::to_string(d2);
                        return res;
                    }
                }
            }
        }
    }
    return res;
}

CheckResult check_contraction(const Voa& voa, const GradedModule& M, const Level& lvl,
                              int max_weight, int D2, int voa_W) {
    CheckResult res;
    res.name = "contraction";
    res.params = "level=" + lvl.str() + ", module=" + module_family_str(M.family());
    OmegaSubspace omega = omega_extract(M, lvl, D2, voa_W, true);
    int T = voa.T();
    for (int r = 0; r < T; ++r) {
        int r_pair = (T - r) % T;
        for (int u_id : voa.sector_basis(r, max_weight)) {
            for (int v_id : voa.sector_basis(r_pair, max_weight)) {
                for (int k = 0; k <= lvl.l; ++k) {
                    if (!contraction_legal(voa, r, k, lvl, nullptr)) continue;
                    SparseVector u(u_id), v(v_id);
                    ContractionCase cc = contraction_element(voa, u, v, k, lvl);
                    for (const auto& [d2, rows] : omega.pieces) {
                        for (const auto& row : rows) {
                            ++res.cases;
                            SparseVector lhs = M.o_p(u, cc.p2, M.o_p(v, -cc.p2, row));
                            SparseVector rhs = M.zero_mode(cc.w, row);
                            if (!(lhs == rhs)) {
                                res.pass = false;
                                std::ostringstream os;
                                os << "u=" << voa.label(u_id) << ", v=" << voa.label(v_id)
                                   << ", k=" << k << ", degree " << d2;
                                res.witness = os.str();
                                return res;
                            }
                        }
                    }
                }
            }
        }
    }
    if (res.cases == 0)
        return CheckResult::skip(res.name, res.params, "no admissible shifts at this level");
    return res;
}

CheckResult check_layers(const GradedModule& M, const Level& lvl, int D2, int voa_W) {
    CheckResult res;
    res.name = "layers";
    res.params = "level=" + lvl.str() + ", module=" + module_family_str(M.family());
    OmegaSubspace omega = omega_extract(M, lvl, D2, voa_W, true);
    int n2 = 2 * lvl.l + (lvl.T == 2 ? lvl.i : 0);
    for (int d2 = 0; d2 <= D2; ++d2) {
        int full = M.piece_dim(d2);
        if (full == 0) continue;
        ++res.cases;
        int got = omega.dim(d2);
        int expect = d2 <= n2 ? full : 0;
        if (got != expect) {
            res.pass = false;
            std::ostringstream os;
            os << "degree " << d2 << "/2: kernel dim " << got << ", expected " << expect;
            res.witness = os.str();
            return res;
        }
    }
    return res;
}

CheckResult check_module_commutators(const Voa& voa, const GradedModule& M, int max_weight,
                                     int D2) {
    CheckResult res;
    res.name = "module-commutators";
    res.params = "module=" + module_family_str(M.family()) +
                 ", weight<=" + std::to_string(max_weight);
    auto ids = voa.basis_up_to(max_weight);
    for (int a_id : ids) {
        if (a_id == voa.vacuum_id()) continue;
        int wa = voa.weight(a_id), ra = voa.sector(a_id);
        for (int b_id : ids) {
            if (b_id == voa.vacuum_id()) continue;
            int wb = voa.weight(b_id), rb = voa.sector(b_id);
            // shift range keeps everything inside the built window
            for (int sa2 = -4; sa2 <= 4; ++sa2) {
                int p2 = 2 * wa - 2 - sa2;  // operator a(p) with degree shift sa2/...
                if (!M.mode_legal(ra, p2)) continue;
                for (int sb2 = -4; sb2 <= 4; ++sb2) {
                    int q2 = 2 * wb - 2 - sb2;
                    if (!M.mode_legal(rb, q2)) continue;
                    for (int d2 = 0; d2 <= D2; ++d2) {
                        for (int mid : M.piece(d2)) {
                            ++res.cases;
                            SparseVector base(mid);
                            SparseVector sa(a_id), sb(b_id);
                            SparseVector lhs =
                                M.state_mode(sa, p2, M.state_mode(sb, q2, base)) -
                                M.state_mode(sb, q2, M.state_mode(sa, p2, base));
                            SparseVector rhs;
                            Scalar p = make_scalar(p2, 2);
                            for (int i = 0; i <= wa + wb - 1; ++i) {
                                Scalar c = rat_binomial(p, i);
                                if (c == 0) continue;
                                SparseVector ab = voa.mode(a_id, i, b_id);
                                if (ab.zero()) continue;
                                for (const auto& [key, part] : voa.homogeneous_parts(ab)) {
                                    rhs.add_scaled(
                                        M.state_mode(part, p2 + q2 - 2 * i, base), c);
                                }
                            }
                            if (!(lhs == rhs)) {
                                res.pass = false;
                                std::ostringstream os;
                                os << "a=" << voa.label(a_id) << "(p2=" << p2 << ")"
                                   << ", b=" << voa.label(b_id) << "(q2=" << q2 << ")"
                                   << " on " << M.label(mid);
                                res.witness = os.str();
                                return res;
                            }
                        }
                    }
                }
            }
        }
    }
    return res;
}

CheckResult check_mode_identity(const Voa& voa, const GradedModule& M, int u_id, int v_id, int p,
                                int sbar2, int tbar2, int D2) {
    CheckResult res;
    res.name = "mode-identity";
    {
        std::ostringstream os;
        os << "module=" << module_family_str(M.family()) << ", u=" << voa.label(u_id)
           << ", v=" << voa.label(v_id) << ", p=" << p << ", s=" << sbar2 << "/2, t=" << tbar2
           << "/2";
        res.params = os.str();
    }
    if (!M.mode_legal(voa.sector(u_id), sbar2) || !M.mode_legal(voa.sector(v_id), tbar2))
        return CheckResult::skip(res.name, res.params, "incompatible fractional indices");
    int wu = voa.weight(u_id), wv = voa.weight(v_id);
    for (int d2 = 0; d2 <= D2; ++d2) {
        for (int mid : M.piece(d2)) {
            ++res.cases;
            SparseVector base(mid);
            SparseVector lhs, rhs;
            // sum_m (-1)^m C(p,m) (u_{p+s-m} v_{t+m} - (-1)^p v_{p+t-m} u_{s+m})
            int mb_v = (d2 + 2 * wv - tbar2 - 2) / 2;       // v_{t+m} base != 0
            int mb_u = (d2 + 2 * wu - sbar2 - 2) / 2;       // u_{s+m} base != 0
            Scalar binom_p(1);
            int sign_p = int_sign_pow(p);
            for (int m = 0; m <= std::max(mb_v, mb_u); ++m) {
                if (m > 0) {
                    binom_p *= (p - (m - 1));
                    binom_p /= m;
                }
                Scalar c = (m % 2 == 0) ? binom_p : -binom_p;
                if (c == 0) continue;
                if (m <= mb_v) {
                    SparseVector inner = M.state_mode(v_id, tbar2 + 2 * m, mid);
                    if (!inner.zero())
                        lhs.add_scaled(
                            M.state_mode(SparseVector(u_id), 2 * p + sbar2 - 2 * m, inner), c);
                }
                if (m <= mb_u) {
                    SparseVector inner = M.state_mode(u_id, sbar2 + 2 * m, mid);
                    if (!inner.zero())
                        lhs.add_scaled(
                            M.state_mode(SparseVector(v_id), 2 * p + tbar2 - 2 * m, inner),
                            -Scalar(sign_p) * c);
                }
            }
            // sum_m C(s,m) (u_{p+m} v)_{s+t-m}
            Scalar sbar = make_scalar(sbar2, 2);
            for (int m = 0; m <= wu + wv - p - 1; ++m) {
                Scalar c = rat_binomial(sbar, m);
                if (c == 0) continue;
                SparseVector upv = voa.mode(u_id, p + m, v_id);
                if (upv.zero()) continue;
                for (const auto& [key, part] : voa.homogeneous_parts(upv)) {
                    rhs.add_scaled(M.state_mode(part, sbar2 + tbar2 - 2 * m, base), c);
                }
            }
            if (!(lhs == rhs)) {
                res.pass = false;
                res.witness = "piece degree " + std::to_string(d2) + "/2, vector " +
                              M.label(mid);
                return res;
            }
        }
    }
    return res;
}

Scalar bottom_conformal_scalar(const GradedModule& M) {
    SparseVector bottom(M.bottom_id());
    SparseVector image = M.zero_mode(M.voa().omega(), bottom);
    return image.coeff(M.bottom_id());
}

}  // namespace vxa
