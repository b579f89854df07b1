#include "vxa/voa.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "vxa/binomial.hpp"

namespace vxa {

namespace {

// Partitions of w into parts >= min_part, each partition as a weakly
// increasing list of negative modes. Lex order on the mode lists.
void enumerate_monomials(int w, int min_part, int max_first, std::vector<int>& acc,
                         std::vector<Monomial>& out) {
    if (w == 0) {
        out.push_back(acc);
        return;
    }
    // modes ascending means parts descending left to right
    for (int part = std::min(w, max_first); part >= min_part; --part) {
        acc.push_back(-part);
        enumerate_monomials(w - part, min_part, part, acc, out);
        acc.pop_back();
    }
}

long long pack_key(int a, int b, int c) {
    return (static_cast<long long>(a) << 40) ^ (static_cast<long long>(b + (1 << 19)) << 20) ^
           static_cast<long long>(c);
}

}  // namespace

Voa::Voa(VoaSpec spec, int weight_cap) : spec_(std::move(spec)), cap_(weight_cap) {
    if (spec_.family == Family::virasoro && spec_.twist_order != 1)
        throw std::invalid_argument("voa: Virasoro supports only the trivial twist");
    if (spec_.twist_order != 1 && spec_.twist_order != 2)
        throw std::invalid_argument("voa: twist order must be 1 or 2");
    if (spec_.family == Family::heisenberg) spec_.central_charge = Scalar(1);

    int min_part = spec_.family == Family::heisenberg ? 1 : 2;
    for (int w = 0; w <= cap_; ++w) {
        std::vector<Monomial> level;
        std::vector<int> acc;
        enumerate_monomials(w, min_part, w, acc, level);
        std::sort(level.begin(), level.end());
        for (auto& m : level) {
            int id = static_cast<int>(monos_.size());
            int r = 0;
            if (T() == 2) r = static_cast<int>(m.size()) % 2;
            ids_.emplace(m, id);
            weights_.push_back(w);
            sectors_.push_back(r);
            monos_.push_back(std::move(m));
        }
    }
}

int Voa::id_of(const Monomial& m) const {
    auto it = ids_.find(m);
    if (it == ids_.end()) throw std::out_of_range("voa: monomial exceeds weight cap");
    return it->second;
}

std::vector<int> Voa::basis_up_to(int W) const {
    std::vector<int> out;
    for (int id = 0; id < basis_size(); ++id) {
        if (weights_[id] <= W) out.push_back(id);
    }
    return out;
}

std::vector<int> Voa::sector_basis(int r, int W) const {
    std::vector<int> out;
    for (int id : basis_up_to(W)) {
        if (sectors_[id] == r % T()) out.push_back(id);
    }
    return out;
}

SparseVector Voa::state(const Monomial& m, const Scalar& c) const {
    Monomial sorted = m;
    std::sort(sorted.begin(), sorted.end());
    return SparseVector(id_of(sorted), c);
}

SparseVector Voa::omega() const {
    if (spec_.family == Family::heisenberg) return state({-1, -1}, make_scalar(1, 2));
    return state({-2});
}

bool Voa::homogeneous(const SparseVector& v, int* wt, int* r) const {
    if (v.zero()) {
        if (wt) *wt = 0;
        if (r) *r = 0;
        return true;
    }
    int w0 = weights_[v.e[0].first];
    int r0 = sectors_[v.e[0].first];
    for (const auto& [id, c] : v.e) {
        if (weights_[id] != w0 || sectors_[id] != r0) return false;
    }
    if (wt) *wt = w0;
    if (r) *r = r0;
    return true;
}

std::map<std::pair<int, int>, SparseVector> Voa::homogeneous_parts(const SparseVector& v) const {
    std::map<std::pair<int, int>, SparseVector> parts;
    for (const auto& [id, c] : v.e) {
        parts[{weights_[id], sectors_[id]}].set(id, c);
    }
    return parts;
}

int Voa::top_weight(const SparseVector& v) const {
    int w = 0;
    for (const auto& [id, c] : v.e) w = std::max(w, weights_[id]);
    return w;
}

SparseVector Voa::gen_mode_mono(int j, int id) const {
    const Monomial& m = monos_[id];
    if (spec_.family == Family::heisenberg) {
        if (j == 0) return {};
        if (j < 0) {
            Monomial out = m;
            out.insert(std::upper_bound(out.begin(), out.end(), j), j);
            return SparseVector(id_of(out));
        }
        // a(j), j > 0: [a(j), a(-j)] = j, everything else commutes past
        int mult = static_cast<int>(std::count(m.begin(), m.end(), -j));
        if (mult == 0) return {};
        Monomial out;
        out.reserve(m.size() - 1);
        bool dropped = false;
        for (int mode : m) {
            if (!dropped && mode == -j) {
                dropped = true;
                continue;
            }
            out.push_back(mode);
        }
        return SparseVector(id_of(out), Scalar(static_cast<long>(j) * mult));
    }

    // Virasoro: straighten L(j) through the normal-ordered word.
    if (m.empty()) {
        if (j <= -2) return SparseVector(id_of({j}));
        return {};
    }
    int m1 = m[0];
    if (j <= m1) {
        Monomial out;
        out.reserve(m.size() + 1);
        out.push_back(j);
        out.insert(out.end(), m.begin(), m.end());
        return SparseVector(id_of(out));
    }
    Monomial rest(m.begin() + 1, m.end());
    int rest_id = id_of(rest);
    // [L(j), L(m1)] = (j - m1) L(j + m1) + (c/12)(j^3 - j) delta_{j+m1,0}
    SparseVector result = Scalar(j - m1) * gen_mode(j + m1, rest_id);
    if (j + m1 == 0) {
        long long jj = j;
        Scalar central = spec_.central_charge * Scalar(static_cast<long>(jj * jj * jj - jj));
        central /= 12;
        result.add_scaled(SparseVector(rest_id), central);
    }
    // L(m1) * (L(j) rest)
    result = result + gen_mode(m1, gen_mode(j, rest_id));
    return result;
}

SparseVector Voa::gen_mode(int j, int id) const {
    long long key = pack_key(1, j, id);
    {
        std::lock_guard<std::mutex> lk(memo_mu_);
        auto it = gen_memo_.find(key);
        if (it != gen_memo_.end()) return it->second;
    }
    SparseVector result = gen_mode_mono(j, id);
    std::lock_guard<std::mutex> lk(memo_mu_);
    return gen_memo_.emplace(key, std::move(result)).first->second;
}

SparseVector Voa::gen_mode(int j, const SparseVector& v) const {
    SparseVector out;
    for (const auto& [id, c] : v.e) out.add_scaled(gen_mode(j, id), c);
    return out;
}

// u_m v for u = a_p u' (p the state-mode index of the peeled generator
// factor). Associativity of vertex operators in component form:
//   (a_p u')_m = sum_i (-1)^i C(p,i) [ a_{p-i} u'_{m+i}  -  (-1)^p u'_{p+m-i} a_i ]
// The generator operator a(j) is the state mode a_{j+h-1} for a of weight h.
SparseVector Voa::mode_uncached(int u_id, int m, int v_id) const {
    const Monomial& u = monos_[u_id];
    if (u.empty()) return m == -1 ? SparseVector(v_id) : SparseVector{};
    int h = generator_weight();
    if (static_cast<int>(u.size()) == 1 && u[0] == -h) {
        return gen_mode(m - (h - 1), v_id);
    }
    int op_index = u[0];
    int p = op_index + (h - 1);
    Monomial rest(u.begin() + 1, u.end());
    int rest_id = id_of(rest);
    int wt_rest = weights_[u_id] + op_index;
    int wt_v = weights_[v_id];

    int bound1 = wt_rest + wt_v - m - 1;  // u'_{m+i} v = 0 beyond this
    int bound2 = h + wt_v - 1;            // a_i v = 0 beyond this
    int sign_p = int_sign_pow(p);
    SparseVector result;
    Scalar binom(1);  // C(p, i)
    for (int i = 0; i <= std::max(bound1, bound2); ++i) {
        if (i > 0) {
            binom *= (p - (i - 1));
            binom /= i;
        }
        Scalar c = (i % 2 == 0) ? binom : -binom;
        if (c == 0) continue;
        if (i <= bound1) {
            SparseVector inner = mode(rest_id, m + i, v_id);
            if (!inner.zero()) {
                result.add_scaled(gen_mode(p - i - (h - 1), inner), c);
            }
        }
        if (i <= bound2) {
            SparseVector av = gen_mode(i - (h - 1), SparseVector(v_id));
            if (!av.zero()) {
                result.add_scaled(mode(SparseVector(rest_id), p + m - i, av),
                                  -Scalar(sign_p) * c);
            }
        }
    }
    return result;
}

SparseVector Voa::mode(int u_id, int m, int v_id) const {
    long long key = (static_cast<long long>(u_id) << 42) ^
                    (static_cast<long long>(m + (1 << 20)) << 21) ^ static_cast<long long>(v_id);
    {
        std::lock_guard<std::mutex> lk(memo_mu_);
        auto it = mode_memo_.find(key);
        if (it != mode_memo_.end()) return it->second;
    }
    SparseVector result = mode_uncached(u_id, m, v_id);
    // weight bookkeeping: every component sits at wt u + wt v - m - 1
    int expect = weights_[u_id] + weights_[v_id] - m - 1;
    for (const auto& [id, c] : result.e) {
        if (weights_[id] != expect)
            throw std::logic_error("voa: mode action broke the weight grading");
        if (T() == 2 && sectors_[id] != (sectors_[u_id] + sectors_[v_id]) % 2)
            throw std::logic_error("voa: mode action broke the sector grading");
    }
    std::lock_guard<std::mutex> lk(memo_mu_);
    return mode_memo_.emplace(key, std::move(result)).first->second;
}

SparseVector Voa::mode(const SparseVector& u, int m, const SparseVector& v) const {
    SparseVector out;
    for (const auto& [uid, cu] : u.e) {
        for (const auto& [vid, cv] : v.e) {
            out.add_scaled(mode(uid, m, vid), cu * cv);
        }
    }
    return out;
}

SparseVector Voa::virasoro_op(int m, const SparseVector& v) const {
    if (spec_.family == Family::virasoro) return gen_mode(m, v);
    SparseVector out;
    SparseVector w = omega();
    for (const auto& [vid, cv] : v.e) {
        for (const auto& [wid, cw] : w.e) {
            out.add_scaled(mode(wid, m + 1, vid), cw * cv);
        }
    }
    return out;
}

SparseVector Voa::translate(const SparseVector& v) const { return virasoro_op(-1, v); }

SparseVector Voa::phi(const SparseVector& v) const {
    SparseVector out;
    for (const auto& [key, part] : homogeneous_parts(v)) {
        int wt = key.first;
        SparseVector term = (wt % 2 == 0) ? part : Scalar(-1) * part;
        Scalar factorial(1);
        int k = 0;
        while (!term.zero()) {
            out.add_scaled(term, Scalar(1) / factorial);
            term = virasoro_op(1, term);
            ++k;
            factorial *= k;
        }
    }
    return out;
}

SparseVector Voa::apply_twist(const SparseVector& v) const {
    if (T() == 1) return v;
    SparseVector out = v;
    for (auto& [id, c] : out.e) {
        if (sectors_[id] == 1) c = -c;
    }
    return out;
}

std::string Voa::label(int id) const {
    const Monomial& m = monos_[id];
    if (m.empty()) return "1";
    const char* gen = spec_.family == Family::heisenberg ? "a" : "L";
    std::ostringstream os;
    for (std::size_t t = 0; t < m.size();) {
        std::size_t run = t;
        while (run < m.size() && m[run] == m[t]) ++run;
        os << gen << "(" << m[t] << ")";
        if (run - t > 1) os << "^" << (run - t);
        t = run;
    }
    return os.str();
}

std::string Voa::describe(const SparseVector& v) const {
    if (v.zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [id, c] : v.e) {
        if (!first) os << " + ";
        os << "(" << scalar_str(c) << ")" << label(id);
        first = false;
    }
    return os.str();
}

}  // namespace vxa
