#pragma once

#include <map>
#include <utility>
#include <vector>

#include "vxa/rational.hpp"

namespace vxa {

// Sparse vector over an ordered integer index set. Entries are kept sorted by
// index with no stored zeros.
struct SparseVector {
    std::vector<std::pair<int, Scalar>> e;

    SparseVector() = default;
    explicit SparseVector(int index, Scalar c = Scalar(1)) {
        if (c != 0) e.emplace_back(index, std::move(c));
    }

    bool zero() const { return e.empty(); }
    std::size_t nnz() const { return e.size(); }
    int top() const { return e.back().first; }  // valid only when !zero()

    Scalar coeff(int index) const;
    void set(int index, const Scalar& c);

    void scale(const Scalar& c);
    // *this += c * other
    void add_scaled(const SparseVector& other, const Scalar& c);

    bool operator==(const SparseVector& other) const { return e == other.e; }
};

SparseVector operator+(const SparseVector& a, const SparseVector& b);
SparseVector operator-(const SparseVector& a, const SparseVector& b);
SparseVector operator*(const Scalar& c, const SparseVector& v);

// Row-reduced spanning set of a subspace. Convention: the pivot of a row is
// its HIGHEST index; pivot coefficient is 1 and pivot columns vanish in every
// other row. With indices ordered by (weight, lex), reduction therefore
// rewrites high-weight monomials in terms of low-weight ones, and a row is
// supported entirely on indices <= its pivot.
class SubspaceBasis {
  public:
    int rank() const { return static_cast<int>(rows_.size()); }
    bool empty() const { return rows_.empty(); }

    const std::map<int, SparseVector>& rows() const { return rows_; }
    std::vector<int> pivots() const;
    bool has_pivot(int index) const { return rows_.count(index) != 0; }

    // Canonical representative of v modulo the span: zero in every pivot
    // coordinate. If coeffs is non-null it receives (pivot, c) pairs such
    // that v = result + sum c * row_pivot.
    SparseVector reduce(SparseVector v,
                        std::vector<std::pair<int, Scalar>>* coeffs = nullptr) const;
    bool contains(const SparseVector& v) const { return reduce(v).zero(); }

    // Returns true when v enlarged the span.
    bool insert(SparseVector v);

    // Number of rows whose pivot index is <= bound. Rows are supported on
    // indices <= pivot, so this equals dim(span intersect coordinates<=bound).
    int rank_within(int index_bound) const;

  private:
    std::map<int, SparseVector> rows_;
};

SubspaceBasis rref(const std::vector<SparseVector>& vectors);

// Dense helpers for small blocks (module pieces; < 64 columns typically).
using RatMatrix = std::vector<std::vector<Scalar>>;

int rank_dense(RatMatrix m);
// Basis of the right null space {x : m x = 0}, rows canonicalized by rref.
std::vector<std::vector<Scalar>> nullspace_dense(const RatMatrix& m, int ncols);

}  // namespace vxa
