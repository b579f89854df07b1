#include "vxa/zhu.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "vxa/binomial.hpp"
#include "vxa/util.hpp"

namespace vxa {

Level Level::predecessor() const {
    if (i > 0) return Level{l, i - 1, T};
    if (l > 0) return Level{l - 1, T - 1, T};
    throw std::logic_error("level: no predecessor below 0");
}

std::string Level::str() const {
    std::ostringstream os;
    if (i == 0) {
        os << l;
    } else if (l == 0) {
        os << i << "/" << T;
    } else {
        os << l << "+" << i << "/" << T;
    }
    return os.str();
}

namespace {

bool parse_int(const std::string& s, int* out) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    try {
        *out = std::stoi(s);
    } catch (...) {
        return false;
    }
    return true;
}

}  // namespace

Level parse_level(const std::string& text, int T) {
    auto fail = [&]() -> Level {
        throw std::invalid_argument("level: cannot parse '" + text + "' for twist order " +
                                    std::to_string(T));
    };
    auto plus = text.find('+');
    std::string first = text.substr(0, plus);
    std::string second = plus == std::string::npos ? "" : text.substr(plus + 1);
    Level lvl;
    lvl.T = T;
    auto parse_frac = [&](const std::string& s) -> int {
        auto slash = s.find('/');
        int num = 0, den = 0;
        if (slash == std::string::npos || !parse_int(s.substr(0, slash), &num) ||
            !parse_int(s.substr(slash + 1), &den))
            fail();
        if (den != T || num < 0 || num >= T) fail();
        return num;
    };
    if (second.empty()) {
        if (first.find('/') != std::string::npos) {
            lvl.l = 0;
            lvl.i = parse_frac(first);
        } else if (!parse_int(first, &lvl.l)) {
            fail();
        }
    } else {
        if (!parse_int(first, &lvl.l)) fail();
        lvl.i = parse_frac(second);
    }
    return lvl;
}

int delta_fn(int i, int r, int T) {
    if (r < 0 || r > T) throw std::out_of_range("delta: r outside 0..T");
    if (r == T) return 1;
    return i >= r ? 1 : 0;
}

ResidueParams circle_params(int wt, int r, const Level& lvl) {
    ResidueParams p;
    p.exponent = Scalar(wt - 1 + delta_fn(lvl.i, r, lvl.T) + lvl.l) + make_scalar(r, lvl.T);
    p.denom = 2 * lvl.l + delta_fn(lvl.i, r, lvl.T) + delta_fn(lvl.i, lvl.T - r, lvl.T) +
              (r != 0 ? 1 : 0);
    return p;
}

SparseVector residue_product(const Voa& voa, const SparseVector& u_homog, const SparseVector& v,
                             const Scalar& exponent, int denom) {
    int wt_u = 0;
    if (!voa.homogeneous(u_homog, &wt_u))
        throw std::invalid_argument("residue_product: u not homogeneous");
    SparseVector out;
    if (u_homog.zero() || v.zero()) return out;
    int jmax = wt_u + voa.top_weight(v) + denom - 1;
    Scalar binom(1);
    for (int j = 0; j <= jmax; ++j) {
        if (j > 0) {
            binom *= (exponent - (j - 1));
            binom /= j;
        }
        if (binom == 0) continue;
        out.add_scaled(voa.mode(u_homog, j - denom, v), binom);
    }
    return out;
}

SparseVector circle_product(const Voa& voa, const SparseVector& u, const SparseVector& v,
                            const Level& lvl) {
    int wt = 0, r = 0;
    if (!voa.homogeneous(u, &wt, &r))
        throw std::invalid_argument("circle_product: u not homogeneous");
    ResidueParams p = circle_params(wt, r, lvl);
    return residue_product(voa, u, v, p.exponent, p.denom);
}

SparseVector star_product(const Voa& voa, const SparseVector& u, const SparseVector& v,
                          const Level& lvl) {
    SparseVector out;
    for (const auto& [key, part] : voa.homogeneous_parts(u)) {
        auto [wt, r] = key;
        if (r != 0) continue;  // u in V^r, r > 0: product is zero
        for (int m = 0; m <= lvl.l; ++m) {
            Scalar c = rat_binomial(Scalar(m + lvl.l), lvl.l);
            if (m % 2 == 1) c = -c;
            out.add_scaled(residue_product(voa, part, v, Scalar(wt + lvl.l), lvl.l + m + 1), c);
        }
    }
    return out;
}

std::vector<OElement> o_spanning_elements(const Voa& voa, const Level& lvl, int W, int depth) {
    std::vector<OElement> out;
    // L(-1)u + L(0)u for homogeneous u with support of the result <= W
    for (int id : voa.basis_up_to(W - 1)) {
        SparseVector u(id);
        SparseVector vec = voa.translate(u);
        vec.add_scaled(u, Scalar(voa.weight(id)));
        if (vec.zero()) continue;
        OElement e;
        e.vec = std::move(vec);
        e.sector = voa.sector(id);
        e.desc = "L(-1)u+L(0)u, u=" + voa.label(id);
        out.push_back(std::move(e));
    }
    // residue family: numerator shift k, denominator shift m, 0 <= k <= m <= depth
    struct Task {
        int u_id, v_id, k, m;
    };
    std::vector<Task> tasks;
    for (int u_id : voa.basis_up_to(W)) {
        int wt_u = voa.weight(u_id);
        int r = voa.sector(u_id);
        int base = circle_params(wt_u, r, lvl).denom;
        for (int v_id : voa.basis_up_to(W)) {
            int top0 = wt_u + voa.weight(v_id) + base - 1;
            for (int m = 0; m <= depth; ++m) {
                if (top0 + m > W) break;
                for (int k = 0; k <= m; ++k) tasks.push_back({u_id, v_id, k, m});
            }
        }
    }
    std::vector<SparseVector> vals(tasks.size());
    parallel_for(tasks.size(), 1, [&](std::size_t t) {
        const Task& task = tasks[t];
        ResidueParams p = circle_params(voa.weight(task.u_id), voa.sector(task.u_id), lvl);
        vals[t] = residue_product(voa, SparseVector(task.u_id), SparseVector(task.v_id),
                                  p.exponent + task.k, p.denom + task.m);
    });
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        if (vals[t].zero()) continue;
        OElement e;
        e.vec = std::move(vals[t]);
        e.sector = (voa.sector(tasks[t].u_id) + voa.sector(tasks[t].v_id)) % voa.T();
        std::ostringstream os;
        os << "res(u=" << voa.label(tasks[t].u_id) << ", v=" << voa.label(tasks[t].v_id)
           << ", k=" << tasks[t].k << ", m=" << tasks[t].m << ")";
        e.desc = os.str();
        out.push_back(std::move(e));
    }
    return out;
}

SparseVector Presentation::to_classes(const Voa&, const SparseVector& v) const {
    SparseVector red = relations.reduce(v);
    SparseVector out;
    for (const auto& [id, c] : red.e) {
        auto it = class_pos.find(id);
        if (it == class_pos.end())
            throw std::logic_error("presentation: reduced vector leaves the cutoff window");
        out.set(it->second, c);
    }
    return out;
}

Presentation build_algebra(const Voa& voa, const Level& lvl, int W, int depth, int jobs) {
    Presentation p;
    p.lvl = lvl;
    p.W = W;
    p.depth = depth;
    // Nonzero sectors collapse through vacuum-insertion vectors supported up
    // to wt + denom - 1, so relations are generated with that much headroom
    // and cut back to the <=W window. Rows with pivot inside the window are
    // supported inside it, which keeps every reported dimension an upper
    // bound of the true filtration dimension.
    int headroom = voa.T() == 2 ? circle_params(0, 1, lvl).denom - 1 : 0;
    auto elems = o_spanning_elements(voa, lvl, W + headroom, depth);
    SubspaceBasis full;
    for (const auto& e : elems) full.insert(e.vec);
    int window_top = -1;
    for (int id : voa.basis_up_to(W)) window_top = std::max(window_top, id);
    for (const auto& [piv, row] : full.rows()) {
        if (piv <= window_top) p.relations.insert(row);
    }

    for (int id : voa.basis_up_to(W)) {
        if (p.relations.has_pivot(id)) continue;
        p.class_pos[id] = static_cast<int>(p.class_ids.size());
        p.class_ids.push_back(id);
    }
    p.dims_per_weight.assign(W + 1, 0);
    for (int id : p.class_ids) p.dims_per_weight[voa.weight(id)]++;
    if (auto it = p.class_pos.find(voa.vacuum_id()); it != p.class_pos.end())
        p.identity_class = it->second;

    std::vector<std::pair<int, int>> pairs;
    for (std::size_t a = 0; a < p.class_ids.size(); ++a) {
        for (std::size_t b = 0; b < p.class_ids.size(); ++b) {
            if (p.pair_safe(voa.weight(p.class_ids[a]), voa.weight(p.class_ids[b])))
                pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    }
    std::vector<SparseVector> vals(pairs.size());
    parallel_for(pairs.size(), jobs, [&](std::size_t t) {
        auto [a, b] = pairs[t];
        SparseVector prod = star_product(voa, SparseVector(p.class_ids[a]),
                                         SparseVector(p.class_ids[b]), lvl);
        vals[t] = p.to_classes(voa, prod);
    });
    for (std::size_t t = 0; t < pairs.size(); ++t) p.table.emplace(pairs[t], std::move(vals[t]));
    return p;
}

Presentation perturb_presentation(const Presentation& pres) {
    Presentation p = pres;
    for (auto& [key, val] : p.table) {
        auto [a, b] = key;
        if (a == p.identity_class || b == p.identity_class) continue;
        if (val.zero()) continue;
        val.e[0].second += 1;
        return p;
    }
    // fall back to any entry
    for (auto& [key, val] : p.table) {
        val.set(0, val.coeff(0) + 1);
        return p;
    }
    return p;
}

namespace {

std::string triple_witness(const Voa& voa, const Presentation& p, int a, int b, int c) {
    std::ostringstream os;
    os << "a=" << voa.label(p.class_ids[a]) << ", b=" << voa.label(p.class_ids[b])
       << ", c=" << voa.label(p.class_ids[c]);
    return os.str();
}

// product of a class-coordinate vector by a class on the given side, via the
// table; nullopt when a needed entry is missing (pair not product-safe).
std::optional<SparseVector> table_mul(const Presentation& p, const SparseVector& coords, int cls,
                                      bool class_on_right) {
    SparseVector out;
    for (const auto& [k, c] : coords.e) {
        auto key = class_on_right ? std::make_pair(k, cls) : std::make_pair(cls, k);
        auto it = p.table.find(key);
        if (it == p.table.end()) return std::nullopt;
        out.add_scaled(it->second, c);
    }
    return out;
}

}  // namespace

CheckResult check_associativity(const Voa& voa, const Presentation& pres) {
    CheckResult res;
    res.name = "associativity";
    res.params = "level=" + pres.lvl.str() + ", W=" + std::to_string(pres.W);
    int ncls = static_cast<int>(pres.class_ids.size());
    for (int a = 0; a < ncls; ++a) {
        for (int b = 0; b < ncls; ++b) {
            auto ab = pres.table.find({a, b});
            if (ab == pres.table.end()) continue;
            for (int c = 0; c < ncls; ++c) {
                auto bc = pres.table.find({b, c});
                if (bc == pres.table.end()) continue;
                auto left = table_mul(pres, ab->second, c, true);
                auto right = table_mul(pres, bc->second, a, false);
                if (!left || !right) continue;
                ++res.cases;
                if (!(*left == *right)) {
                    res.pass = false;
                    res.witness = triple_witness(voa, pres, a, b, c);
                    return res;
                }
            }
        }
    }
    return res;
}

CheckResult check_identity(const Voa& voa, const Presentation& pres) {
    CheckResult res;
    res.name = "identity";
    res.params = "level=" + pres.lvl.str() + ", W=" + std::to_string(pres.W);
    if (pres.identity_class < 0) {
        res.pass = false;
        res.witness = "vacuum class collapsed to zero";
        return res;
    }
    int e = pres.identity_class;
    for (std::size_t a = 0; a < pres.class_ids.size(); ++a) {
        SparseVector expect(static_cast<int>(a));
        auto left = pres.table.find({e, static_cast<int>(a)});
        auto right = pres.table.find({static_cast<int>(a), e});
        if (left != pres.table.end()) {
            ++res.cases;
            if (!(left->second == expect)) {
                res.pass = false;
                res.witness = "1 * " + voa.label(pres.class_ids[a]);
                return res;
            }
        }
        if (right != pres.table.end()) {
            ++res.cases;
            if (!(right->second == expect)) {
                res.pass = false;
                res.witness = voa.label(pres.class_ids[a]) + " * 1";
                return res;
            }
        }
    }
    return res;
}

CheckResult check_center(const Voa& voa, const Presentation& pres) {
    CheckResult res;
    res.name = "center";
    res.params = "level=" + pres.lvl.str() + ", W=" + std::to_string(pres.W);
    SparseVector omega = voa.omega();
    for (std::size_t a = 0; a < pres.class_ids.size(); ++a) {
        int wt_a = voa.weight(pres.class_ids[a]);
        if (!pres.pair_safe(2, wt_a)) continue;
        SparseVector rep = pres.class_state(static_cast<int>(a));
        SparseVector lhs = pres.to_classes(voa, star_product(voa, omega, rep, pres.lvl));
        SparseVector rhs = pres.to_classes(voa, star_product(voa, rep, omega, pres.lvl));
        ++res.cases;
        if (!(lhs == rhs)) {
            res.pass = false;
            res.witness = "omega vs " + voa.label(pres.class_ids[a]);
            return res;
        }
    }
    return res;
}

CheckResult check_ideal(const Voa& voa, const Presentation& pres,
                        const std::vector<OElement>& elements) {
    CheckResult res;
    res.name = "ideal";
    res.params = "level=" + pres.lvl.str() + ", W=" + std::to_string(pres.W);
    for (int c_id : voa.sector_basis(0, pres.W)) {
        SparseVector c(c_id);
        int wt_c = voa.weight(c_id);
        for (const auto& o : elements) {
            if (!pres.pair_safe(wt_c, voa.top_weight(o.vec))) continue;
            ++res.cases;
            SparseVector left = pres.relations.reduce(star_product(voa, c, o.vec, pres.lvl));
            SparseVector right = pres.relations.reduce(star_product(voa, o.vec, c, pres.lvl));
            if (!left.zero() || !right.zero()) {
                res.pass = false;
                res.witness = "c=" + voa.label(c_id) + ", o=" + o.desc;
                return res;
            }
        }
    }
    return res;
}

CheckResult check_sector_collapse(const Voa& voa, const Presentation& pres) {
    CheckResult res;
    res.name = "sector-collapse";
    res.params = "level=" + pres.lvl.str() + ", W=" + std::to_string(pres.W);
    if (voa.T() == 1) return CheckResult::skip(res.name, res.params, "trivial twist");
    for (int r = 1; r < voa.T(); ++r) {
        for (int id : voa.sector_basis(r, pres.W)) {
            ++res.cases;
            SparseVector v(id);
            if (!pres.relations.reduce(v).zero()) {
                res.pass = false;
                res.witness = voa.label(id) + " does not reduce to 0";
                return res;
            }
            // vacuum-insertion certificate: the residue against the vacuum
            // rewrites, via v_{-k-1}1 = L(-1)^k v / k! and L(-1)w == -L(0)w,
            // to a multiple c * v with c != 0.
            int wt = voa.weight(id);
            ResidueParams prm = circle_params(wt, r, pres.lvl);
            SparseVector expansion;
            Scalar cert(0);
            for (int j = 0; j <= prm.denom - 1; ++j) {
                int k = prm.denom - 1 - j;
                // premise: v_{-k-1} 1 equals L(-1)^k v / k!
                SparseVector lhs = voa.mode(SparseVector(id), -k - 1, voa.vacuum());
                SparseVector rhs(id);
                Scalar factorial(1);
                Scalar lfactor(1);
                for (int t = 0; t < k; ++t) {
                    rhs = voa.translate(rhs);
                    factorial *= (t + 1);
                    lfactor *= -Scalar(wt + t);  // L(-1)w == -L(0)w rewriting
                }
                SparseVector scaled = rhs;
                scaled.scale(Scalar(1) / factorial);
                if (!(lhs == scaled)) {
                    res.pass = false;
                    res.witness = "translation premise failed for " + voa.label(id);
                    return res;
                }
                Scalar coeff = rat_binomial(prm.exponent, j);
                expansion.add_scaled(scaled, coeff);
                cert += coeff * lfactor / factorial;
            }
            SparseVector circ = circle_product(voa, SparseVector(id), voa.vacuum(), pres.lvl);
            if (!(circ == expansion)) {
                res.pass = false;
                res.witness = "vacuum insertion expansion mismatch for " + voa.label(id);
                return res;
            }
            if (cert == 0) {
                res.pass = false;
                res.witness = "certificate constant vanished for " + voa.label(id);
                return res;
            }
        }
    }
    return res;
}

CheckResult check_surjection(const Voa& voa, const Level& lvl, int W, int depth) {
    CheckResult res;
    res.name = "surjection";
    res.params = "level=" + lvl.str() + ", W=" + std::to_string(W);
    if (!lvl.has_predecessor())
        return CheckResult::skip(res.name, res.params, "no level below 0");
    Level lower = lvl.predecessor();
    auto lower_elems = o_spanning_elements(voa, lower, W, depth + 2);
    SubspaceBasis lower_span;
    for (const auto& e : lower_elems) lower_span.insert(e.vec);
    for (const auto& e : o_spanning_elements(voa, lvl, W, depth)) {
        ++res.cases;
        if (!lower_span.reduce(e.vec).zero()) {
            res.pass = false;
            res.witness = e.desc + " not contained at level " + lower.str();
            return res;
        }
    }
    return res;
}

CheckResult check_anti_isomorphism(const Voa& voa, const Presentation& pres,
                                   const std::vector<OElement>& elements) {
    CheckResult res;
    res.name = "anti-isomorphism";
    res.params = "level=" + pres.lvl.str() + ", W=" + std::to_string(pres.W);
    // phi maps the relation space into the relation space of the inverse
    // twist; for T <= 2 that is the same computed space.
    for (const auto& o : elements) {
        ++res.cases;
        if (!pres.relations.reduce(voa.phi(o.vec)).zero()) {
            res.pass = false;
            res.witness = "phi(" + o.desc + ") does not reduce to 0";
            return res;
        }
    }
    for (std::size_t a = 0; a < pres.class_ids.size(); ++a) {
        for (std::size_t b = 0; b < pres.class_ids.size(); ++b) {
            if (!pres.pair_safe(voa.weight(pres.class_ids[a]), voa.weight(pres.class_ids[b])))
                continue;
            ++res.cases;
            SparseVector u(pres.class_ids[a]);
            SparseVector v(pres.class_ids[b]);
            SparseVector lhs = pres.relations.reduce(voa.phi(star_product(voa, u, v, pres.lvl)));
            SparseVector rhs = pres.relations.reduce(
                star_product(voa, voa.phi(v), voa.phi(u), pres.lvl));
            if (!(lhs == rhs)) {
                res.pass = false;
                res.witness = "u=" + voa.label(pres.class_ids[a]) +
                              ", v=" + voa.label(pres.class_ids[b]);
                return res;
            }
        }
    }
    return res;
}

CheckResult check_commutator_formula(const Voa& voa, const Presentation& pres) {
    CheckResult res;
    res.name = "commutator";
    res.params = "level=" + pres.lvl.str() + ", W=" + std::to_string(pres.W);
    for (int u_id : voa.sector_basis(0, pres.W)) {
        for (int v_id : voa.sector_basis(0, pres.W)) {
            if (!pres.pair_safe(voa.weight(u_id), voa.weight(v_id))) continue;
            ++res.cases;
            SparseVector u(u_id), v(v_id);
            SparseVector diff = star_product(voa, u, v, pres.lvl);
            diff.add_scaled(star_product(voa, v, u, pres.lvl), Scalar(-1));
            diff.add_scaled(residue_product(voa, u, v, Scalar(voa.weight(u_id) - 1), 0),
                            Scalar(-1));
            if (!pres.relations.reduce(diff).zero()) {
                res.pass = false;
                res.witness = "u=" + voa.label(u_id) + ", v=" + voa.label(v_id);
                return res;
            }
        }
    }
    return res;
}

}  // namespace vxa
