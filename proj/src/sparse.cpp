#include "vxa/sparse.hpp"

#include <algorithm>

namespace vxa {

Scalar SparseVector::coeff(int index) const {
    auto it = std::lower_bound(e.begin(), e.end(), index,
                               [](const auto& p, int i) { return p.first < i; });
    if (it != e.end() && it->first == index) return it->second;
    return Scalar(0);
}

void SparseVector::set(int index, const Scalar& c) {
    auto it = std::lower_bound(e.begin(), e.end(), index,
                               [](const auto& p, int i) { return p.first < i; });
    if (it != e.end() && it->first == index) {
        if (c == 0)
            e.erase(it);
        else
            it->second = c;
    } else if (c != 0) {
        e.insert(it, {index, c});
    }
}

void SparseVector::scale(const Scalar& c) {
    if (c == 0) {
        e.clear();
        return;
    }
    for (auto& [i, v] : e) v *= c;
}

void SparseVector::add_scaled(const SparseVector& other, const Scalar& c) {
    if (c == 0 || other.e.empty()) return;
    std::vector<std::pair<int, Scalar>> out;
    out.reserve(e.size() + other.e.size());
    auto a = e.begin();
    auto b = other.e.begin();
    while (a != e.end() || b != other.e.end()) {
        if (b == other.e.end() || (a != e.end() && a->first < b->first)) {
            out.push_back(*a++);
        } else if (a == e.end() || a->first > b->first) {
            Scalar v = c * b->second;
            if (v != 0) out.emplace_back(b->first, std::move(v));
            ++b;
        } else {
            Scalar v = a->second + c * b->second;
            if (v != 0) out.emplace_back(a->first, std::move(v));
            ++a;
            ++b;
        }
    }
    e = std::move(out);
}

SparseVector operator+(const SparseVector& a, const SparseVector& b) {
    SparseVector r = a;
    r.add_scaled(b, Scalar(1));
    return r;
}

SparseVector operator-(const SparseVector& a, const SparseVector& b) {
    SparseVector r = a;
    r.add_scaled(b, Scalar(-1));
    return r;
}

SparseVector operator*(const Scalar& c, const SparseVector& v) {
    SparseVector r = v;
    r.scale(c);
    return r;
}

std::vector<int> SubspaceBasis::pivots() const {
    std::vector<int> p;
    p.reserve(rows_.size());
    for (const auto& [piv, row] : rows_) p.push_back(piv);
    return p;
}

SparseVector SubspaceBasis::reduce(SparseVector v,
                                   std::vector<std::pair<int, Scalar>>* coeffs) const {
    // Rows are mutually reduced and supported below their pivot, so one
    // descending pass over pivots suffices.
    for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
        if (v.zero()) break;
        if (v.top() < it->first) continue;
        Scalar c = v.coeff(it->first);
        if (c != 0) {
            v.add_scaled(it->second, -c);
            if (coeffs) coeffs->emplace_back(it->first, c);
        }
    }
    return v;
}

bool SubspaceBasis::insert(SparseVector v) {
    v = reduce(std::move(v));
    if (v.zero()) return false;
    int piv = v.top();
    Scalar inv = Scalar(1) / v.e.back().second;
    v.scale(inv);
    for (auto& [p, row] : rows_) {
        Scalar c = row.coeff(piv);
        if (c != 0) row.add_scaled(v, -c);
    }
    rows_.emplace(piv, std::move(v));
    return true;
}

int SubspaceBasis::rank_within(int index_bound) const {
    int count = 0;
    for (const auto& [piv, row] : rows_) {
        if (piv <= index_bound) ++count;
    }
    return count;
}

SubspaceBasis rref(const std::vector<SparseVector>& vectors) {
    SubspaceBasis b;
    for (const auto& v : vectors) b.insert(v);
    return b;
}

int rank_dense(RatMatrix m) {
    int rank = 0;
    std::size_t nrows = m.size();
    std::size_t ncols = nrows ? m[0].size() : 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < nrows; ++col) {
        std::size_t sel = row;
        while (sel < nrows && m[sel][col] == 0) ++sel;
        if (sel == nrows) continue;
        std::swap(m[sel], m[row]);
        Scalar inv = Scalar(1) / m[row][col];
        for (std::size_t j = col; j < ncols; ++j) m[row][j] *= inv;
        for (std::size_t i = 0; i < nrows; ++i) {
            if (i == row || m[i][col] == 0) continue;
            Scalar f = m[i][col];
            for (std::size_t j = col; j < ncols; ++j) m[i][j] -= f * m[row][j];
        }
        ++row;
        ++rank;
    }
    return rank;
}

std::vector<std::vector<Scalar>> nullspace_dense(const RatMatrix& m, int ncols) {
    RatMatrix a = m;
    std::size_t nrows = a.size();
    std::vector<int> pivot_col;
    std::size_t row = 0;
    for (int col = 0; col < ncols && row < nrows; ++col) {
        std::size_t sel = row;
        while (sel < nrows && a[sel][col] == 0) ++sel;
        if (sel == nrows) continue;
        std::swap(a[sel], a[row]);
        Scalar inv = Scalar(1) / a[row][col];
        for (int j = 0; j < ncols; ++j) a[row][j] *= inv;
        for (std::size_t i = 0; i < nrows; ++i) {
            if (i == row || a[i][col] == 0) continue;
            Scalar f = a[i][col];
            for (int j = 0; j < ncols; ++j) a[i][j] -= f * a[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(ncols, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<Scalar>> basis;
    for (int free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Scalar> x(ncols, Scalar(0));
        x[free] = 1;
        for (std::size_t r = 0; r < pivot_col.size(); ++r) {
            x[pivot_col[r]] = -a[r][free];
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

}  // namespace vxa
