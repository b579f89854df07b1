#include "vxa/loop.hpp"

#include <stdexcept>

#include "vxa/binomial.hpp"

namespace vxa {

LoopSpace::LoopSpace(const Voa& voa, int max_weight) : voa_(voa), max_weight_(max_weight) {
    image_rows_.resize(max_weight_ + 1);
    for (int w = 1; w <= max_weight_; ++w) {
        int count = 0;
        for (int id : voa.basis_up_to(w - 1)) {
            if (voa.weight(id) != w - 1) continue;
            ++count;
            ImageRow row;
            row.image = voa.translate(SparseVector(id));
            row.preimage = SparseVector(id);
            // rref with preimage tracking
            auto& rows = image_rows_[w];
            for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
                if (row.image.zero()) break;
                Scalar c = row.image.coeff(it->first);
                if (c != 0) {
                    row.image.add_scaled(it->second.image, -c);
                    row.preimage.add_scaled(it->second.preimage, -c);
                }
            }
            if (row.image.zero()) {
                if (w > 1)
                    throw std::logic_error("loop: L(-1) has unexpected kernel at weight " +
                                           std::to_string(w - 1));
                continue;  // L(-1)1 = 0
            }
            Scalar inv = Scalar(1) / row.image.e.back().second;
            row.image.scale(inv);
            row.preimage.scale(inv);
            int piv = row.image.top();
            for (auto& [p, r] : rows) {
                Scalar c = r.image.coeff(piv);
                if (c != 0) {
                    r.image.add_scaled(row.image, -c);
                    r.preimage.add_scaled(row.preimage, -c);
                }
            }
            rows.emplace(piv, std::move(row));
        }
        (void)count;
    }
}

bool LoopSpace::exponent_legal(int sector, int q2) const {
    if (voa_.T() == 1) return q2 % 2 == 0;
    return ((q2 % 2) + 2) % 2 == sector;
}

LoopSum LoopSpace::normalize(const SparseVector& a, int q2) const {
    LoopSum out;
    if (a.zero()) return out;
    // peel weight components from the top; rewrite the L(-1)-image part
    for (const auto& [key, part] : voa_.homogeneous_parts(a)) {
        int w = key.first;
        if (w == 0) {
            if (q2 == -2) {
                auto& slot = out[q2];
                slot = slot + part;
                if (slot.zero()) out.erase(q2);
            }
            continue;  // 1(q) = 0 for q != -1
        }
        if (w > max_weight_) throw std::out_of_range("loop: weight exceeds table");
        SparseVector rem = part;
        std::vector<std::pair<SparseVector, Scalar>> rewrites;
        const auto& rows = image_rows_[w];
        for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
            if (rem.zero()) break;
            Scalar c = rem.coeff(it->first);
            if (c != 0) {
                rem.add_scaled(it->second.image, -c);
                rewrites.emplace_back(it->second.preimage, c);
            }
        }
        if (!rem.zero()) {
            auto& slot = out[q2];
            slot = slot + rem;
            if (slot.zero()) out.erase(q2);
        }
        for (auto& [pre, c] : rewrites) {
            // (L(-1)p)(q) = -q p(q-1)
            Scalar factor = -make_scalar(q2, 2) * c;
            if (factor == 0) continue;
            SparseVector scaled_pre = pre;
            scaled_pre.scale(factor);
            for (auto& [qq2, vec] : normalize(scaled_pre, q2 - 2)) {
                auto& slot = out[qq2];
                slot = slot + vec;
                if (slot.zero()) out.erase(qq2);
            }
        }
    }
    return out;
}

LoopSum LoopSpace::normalize(const LoopSum& x) const {
    LoopSum out;
    for (const auto& [q2, vec] : x) {
        for (auto& [qq2, v] : normalize(vec, q2)) {
            auto& slot = out[qq2];
            slot = slot + v;
            if (slot.zero()) out.erase(qq2);
        }
    }
    return out;
}

LoopSum LoopSpace::bracket(const SparseVector& a, int a_q2, const SparseVector& b,
                           int b_q2) const {
    int wt_a = 0, r_a = 0, wt_b = 0, r_b = 0;
    if (!voa_.homogeneous(a, &wt_a, &r_a) || !voa_.homogeneous(b, &wt_b, &r_b))
        throw std::invalid_argument("loop bracket: inhomogeneous argument");
    if (!exponent_legal(r_a, a_q2) || !exponent_legal(r_b, b_q2))
        throw std::invalid_argument("loop bracket: exponent outside sector");
    LoopSum out;
    Scalar q = make_scalar(a_q2, 2);
    for (int i = 0; i <= wt_a + wt_b - 1; ++i) {
        Scalar coeff = rat_binomial(q, i);
        if (coeff == 0) continue;
        SparseVector ab = voa_.mode(a, i, b);
        if (ab.zero()) continue;
        ab.scale(coeff);
        for (auto& [qq2, v] : normalize(ab, a_q2 + b_q2 - 2 * i)) {
            auto& slot = out[qq2];
            slot = slot + v;
            if (slot.zero()) out.erase(qq2);
        }
    }
    return out;
}

LoopSum LoopSpace::bracket(const LoopSum& x, const LoopSum& y) const {
    LoopSum out;
    for (const auto& [xq2, xv] : x) {
        for (const auto& [kx, xpart] : voa_.homogeneous_parts(xv)) {
            for (const auto& [yq2, yv] : y) {
                for (const auto& [ky, ypart] : voa_.homogeneous_parts(yv)) {
                    for (auto& [q2, v] : bracket(xpart, xq2, ypart, yq2)) {
                        auto& slot = out[q2];
                        slot = slot + v;
                        if (slot.zero()) out.erase(q2);
                    }
                }
            }
        }
    }
    return out;
}

int LoopSpace::degree2(const SparseVector& a_homog, int q2) const {
    int wt = 0;
    if (!voa_.homogeneous(a_homog, &wt))
        throw std::invalid_argument("loop degree: inhomogeneous vector");
    return 2 * wt - q2 - 2;
}

bool LoopSpace::pure_degree(const LoopSum& x, int deg2) const {
    for (const auto& [q2, vec] : x) {
        for (const auto& [key, part] : voa_.homogeneous_parts(vec)) {
            if (2 * key.first - q2 - 2 != deg2) return false;
        }
    }
    return true;
}

SparseVector LoopSpace::project_degree0(const LoopSum& x, const Presentation& pres) const {
    SparseVector total;
    for (const auto& [q2, vec] : x) {
        for (const auto& [key, part] : voa_.homogeneous_parts(vec)) {
            if (2 * key.first - q2 - 2 != 0)
                throw std::invalid_argument("loop projection: nonzero degree term");
            total = total + part;
        }
    }
    return pres.to_classes(voa_, total);
}

LoopSum LoopSpace::scaled(const LoopSum& x, const Scalar& c) {
    LoopSum out;
    if (c == 0) return out;
    for (const auto& [q2, v] : x) {
        SparseVector s = v;
        s.scale(c);
        out.emplace(q2, std::move(s));
    }
    return out;
}

LoopSum LoopSpace::sum(const LoopSum& x, const LoopSum& y) {
    LoopSum out = x;
    for (const auto& [q2, v] : y) {
        auto& slot = out[q2];
        slot = slot + v;
        if (slot.zero()) out.erase(q2);
    }
    return out;
}

bool LoopSpace::is_zero(const LoopSum& x) {
    for (const auto& [q2, v] : x) {
        if (!v.zero()) return false;
    }
    return true;
}

}  // namespace vxa
