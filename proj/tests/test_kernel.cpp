#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "vxa/binomial.hpp"
#include "vxa/sparse.hpp"

using namespace vxa;

namespace {

// independent dense elimination, used as the rank oracle
int dense_rank_oracle(std::vector<std::vector<Scalar>> m) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size();
    int rank = 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = r;
        while (sel < rows && m[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(m[sel], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            Scalar f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
        ++rank;
    }
    return rank;
}

SparseVector from_dense(const std::vector<Scalar>& row) {
    SparseVector v;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] != 0) v.set(static_cast<int>(i), row[i]);
    }
    return v;
}

}  // namespace

TEST_CASE("rat_binomial basics") {
    CHECK(rat_binomial(make_scalar(1, 2), 2) == make_scalar(-1, 8));
    CHECK(rat_binomial(make_scalar(7, 3), 0) == 1);
    CHECK(rat_binomial(Scalar(3), 5) == 0);
    CHECK(rat_binomial(Scalar(-2), 2) == 3);
}

TEST_CASE("rat_binomial recurrence C(s,m) = C(s,m-1)(s-m+1)/m") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    for (int trial = 0; trial < 50; ++trial) {
        Scalar s = make_scalar(num(rng), den(rng));
        for (long m = 1; m <= 8; ++m) {
            Scalar expect = rat_binomial(s, m - 1) * (s - (m - 1)) / m;
            CHECK(rat_binomial(s, m) == expect);
        }
    }
}

TEST_CASE("binomial_series examples") {
    auto s1 = binomial_series(Scalar(1), 3);
    CHECK(s1 == std::vector<Scalar>{Scalar(1), Scalar(1), Scalar(0), Scalar(0)});
    auto s2 = binomial_series(make_scalar(1, 2), 2);
    CHECK(s2 == std::vector<Scalar>{Scalar(1), make_scalar(1, 2), make_scalar(-1, 8)});
    auto s3 = binomial_series(Scalar(-2), 2);
    CHECK(s3 == std::vector<Scalar>{Scalar(1), Scalar(-2), Scalar(3)});
    for (long j = 0; j <= 3; ++j) CHECK(s1[j] == rat_binomial(Scalar(1), j));
}

TEST_CASE("rref rank examples") {
    CHECK(rref({}).rank() == 0);

    SparseVector v;
    v.set(0, make_scalar(2, 3));
    v.set(4, Scalar(-5));
    CHECK(rref({v, Scalar(2) * v}).rank() == 1);
}

TEST_CASE("rref rank agrees with dense elimination oracle") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> entry(-4, 4);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<std::vector<Scalar>> dense(5, std::vector<Scalar>(3, Scalar(0)));
        std::vector<SparseVector> sparse;
        for (auto& row : dense) {
            for (auto& x : row) x = Scalar(entry(rng));
            sparse.push_back(from_dense(row));
        }
        int expect = dense_rank_oracle(dense);
        CHECK(expect <= 3);
        CHECK(rref(sparse).rank() == expect);
    }
}

TEST_CASE("every input vector reduces to zero against its own span") {
    std::mt19937 rng(13);
    std::uniform_int_distribution<int> entry(-3, 3), dim(1, 10), count(1, 8);
    for (int trial = 0; trial < 30; ++trial) {
        int n = dim(rng);
        std::vector<SparseVector> vs;
        for (int t = count(rng); t > 0; --t) {
            std::vector<Scalar> row(n);
            for (auto& x : row) x = Scalar(entry(rng));
            vs.push_back(from_dense(row));
        }
        SubspaceBasis b = rref(vs);
        for (const auto& v : vs) CHECK(b.reduce(v).zero());
    }
}

TEST_CASE("reduce examples and idempotence") {
    SparseVector e1(0), e2(1);
    SparseVector v = e1 + e2;

    SubspaceBasis empty;
    CHECK(empty.reduce(v) == v);

    SubspaceBasis b1 = rref({e1});
    CHECK(b1.reduce(v) == e2);

    SubspaceBasis bv = rref({v});
    CHECK(bv.reduce(v).zero());

    std::mt19937 rng(17);
    std::uniform_int_distribution<int> entry(-3, 3);
    std::vector<SparseVector> vs;
    for (int t = 0; t < 4; ++t) {
        std::vector<Scalar> row(6);
        for (auto& x : row) x = Scalar(entry(rng));
        vs.push_back(from_dense(row));
    }
    SubspaceBasis b = rref(vs);
    std::vector<Scalar> row(6);
    for (auto& x : row) x = Scalar(entry(rng));
    SparseVector w = from_dense(row);
    SparseVector once = b.reduce(w);
    CHECK(b.reduce(once) == once);
    // result vanishes on every pivot coordinate
    for (int piv : b.pivots()) CHECK(once.coeff(piv) == 0);
}

TEST_CASE("reduction coefficients reconstruct the input exactly") {
    std::mt19937 rng(19);
    std::uniform_int_distribution<int> entry(-5, 5);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<SparseVector> vs;
        for (int t = 0; t < 5; ++t) {
            std::vector<Scalar> row(7);
            for (auto& x : row) x = make_scalar(entry(rng), 1 + (trial % 3));
            vs.push_back(from_dense(row));
        }
        SubspaceBasis b = rref(vs);
        for (const auto& v : vs) {
            std::vector<std::pair<int, Scalar>> coeffs;
            SparseVector rem = b.reduce(v, &coeffs);
            CHECK(rem.zero());
            SparseVector rebuilt = rem;
            for (const auto& [piv, c] : coeffs) rebuilt.add_scaled(b.rows().at(piv), c);
            CHECK(rebuilt == v);
        }
    }
}

TEST_CASE("dense nullspace") {
    // x + y = 0 over 3 columns: kernel dim 2... rows: [1,1,0]
    RatMatrix m{{Scalar(1), Scalar(1), Scalar(0)}};
    auto basis = nullspace_dense(m, 3);
    CHECK(basis.size() == 2);
    for (const auto& x : basis) CHECK(x[0] + x[1] == 0);
}
