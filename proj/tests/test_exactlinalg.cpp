#include <gtest/gtest.h>

#include <random>

#include "hopfkit/exactlinalg.hpp"

using namespace hopfkit;

namespace {

FpMatrix random_matrix(unsigned p, std::size_t r, std::size_t c, std::mt19937& rng, int zero_bias = 0) {
    FpMatrix m(p, r, c);
    std::uniform_int_distribution<int> d(-zero_bias, static_cast<int>(p) - 1);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, std::max(0, d(rng)));
    return m;
}

}  // namespace

TEST(FpScalar, ArithmeticAndValidation) {
    FpScalar a(5, 7), b(4, 7);
    EXPECT_EQ((a + b).residue(), 2u);
    EXPECT_EQ((a - b).residue(), 1u);
    EXPECT_EQ((a * b).residue(), 6u);
    EXPECT_EQ((a * a.inverse()).residue(), 1u);
    EXPECT_EQ(FpScalar(-1, 3).residue(), 2u);
    EXPECT_THROW(FpScalar(1, 4), ArgumentError);
    EXPECT_THROW(FpScalar(1, 19), ArgumentError);
    EXPECT_THROW(FpScalar(1, 3) + FpScalar(1, 5), ArgumentError);
    EXPECT_THROW(FpScalar(0, 5).inverse(), ArgumentError);
}

TEST(FpHelpers, BinomialAndFactorials) {
    EXPECT_EQ(fp::binomial(4, 2, 3), 0u);  // 6 mod 3
    EXPECT_EQ(fp::binomial(4, 2, 5), 1u);
    EXPECT_EQ(fp::binomial(9, 3, 3), 0u);
    EXPECT_EQ(fp::binomial(9, 9, 3), 1u);
    for (unsigned p : {2u, 3u, 5u, 7u})
        for (unsigned i = 0; i < p; ++i) {
            Residue f = 1;
            for (unsigned k = 2; k <= i; ++k) f = fp::mul(f, k, p);
            EXPECT_EQ(fp::mul(f, fp::inv_factorial(i, p), p), 1u);
        }
}

TEST(Rref, SpecExamples) {
    auto id = rref(FpMatrix::identity(2, 3));
    EXPECT_EQ(id.rank, 3u);
    EXPECT_EQ(id.pivots, (std::vector<std::size_t>{0, 1, 2}));
    auto z = rref(FpMatrix(3, 2, 4));
    EXPECT_EQ(z.rank, 0u);
    EXPECT_TRUE(z.pivots.empty());
    EXPECT_EQ(rank(FpMatrix::from_rows(2, {{1, 1}, {1, 1}})), 1u);
}

TEST(Rref, ParallelMatchesSerialReference) {
    std::mt19937 rng(7);
    for (unsigned p : {2u, 3u, 5u, 17u})
        for (int trial = 0; trial < 20; ++trial) {
            auto m = random_matrix(p, 1 + trial % 9, 1 + (trial * 7) % 11, rng, trial % 3);
            auto a = rref(m);
            auto b = rref_serial(m);
            EXPECT_EQ(a.reduced, b.reduced);
            EXPECT_EQ(a.rank, b.rank);
            EXPECT_EQ(a.pivots, b.pivots);
        }
    // Large enough to take the threaded branch.
    auto big = random_matrix(3, 300, 260, rng, 1);
    EXPECT_EQ(rref(big).reduced, rref_serial(big).reduced);
}

TEST(Rref, IdempotentAndRankNullity) {
    std::mt19937 rng(11);
    for (unsigned p : {2u, 3u, 7u})
        for (int trial = 0; trial < 40; ++trial) {
            auto m = random_matrix(p, 1 + trial % 6, 1 + trial % 8, rng, trial % 4);
            auto r = rref(m);
            EXPECT_EQ(rref(r.reduced).reduced, r.reduced);
            auto k = kernel_basis(m);
            EXPECT_EQ(r.rank + k.cols(), m.cols());
            EXPECT_TRUE((m * k).is_zero());
            EXPECT_EQ(rank(k), k.cols());
        }
}

TEST(Kernel, SpecExamples) {
    EXPECT_EQ(kernel_basis(FpMatrix::identity(5, 4)).cols(), 0u);
    EXPECT_EQ(kernel_basis(FpMatrix(3, 2, 2)).cols(), 2u);
    auto k = kernel_basis(FpMatrix::from_rows(2, {{1, 1}}));
    ASSERT_EQ(k.cols(), 1u);
    EXPECT_EQ(k.column(0), (FpVector{1, 1}));
}

TEST(Solve, SpecExamples) {
    FpVector b{2, 0, 1};
    EXPECT_EQ(*solve(FpMatrix::identity(3, 3), b), b);
    EXPECT_FALSE(solve(FpMatrix(3, 2, 2), FpVector{1, 0}).has_value());
    auto x = solve(FpMatrix::from_rows(3, {{1, 1}, {0, 1}}), FpVector{0, 1});
    ASSERT_TRUE(x);
    EXPECT_EQ(*x, (FpVector{2, 1}));
    EXPECT_THROW(solve(FpMatrix::identity(3, 2), FpVector{1}), ArgumentError);
}

TEST(Solve, RandomConsistentSystems) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        auto m = random_matrix(5, 4, 6, rng, 2);
        FpVector x0(6);
        for (auto& v : x0) v = rng() % 5;
        auto b = m.apply(x0);
        auto x = solve(m, b);
        ASSERT_TRUE(x);
        EXPECT_EQ(m.apply(*x), b);
    }
}

TEST(Spans, EchelonIntersectionInverse) {
    auto a = FpMatrix::from_rows(3, {{1, 0}, {0, 1}, {0, 0}});
    auto b = FpMatrix::from_rows(3, {{1, 0}, {1, 0}, {0, 1}});
    auto i = span_intersection(a, b);
    ASSERT_EQ(i.cols(), 1u);
    EXPECT_EQ(i.column(0), (FpVector{1, 1, 0}));
    auto e = column_echelon(FpMatrix::from_rows(3, {{0, 2}, {1, 1}, {1, 1}}));
    EXPECT_EQ(e, FpMatrix::from_rows(3, {{1, 0}, {0, 1}, {0, 1}}));
    EXPECT_EQ(leading_rows(e), (std::vector<std::size_t>{0, 1}));
    EXPECT_TRUE(same_span(e, FpMatrix::from_rows(3, {{0, 2}, {1, 1}, {1, 1}})));
    EXPECT_FALSE(span_contains(e, FpVector{0, 1, 0}));
    auto m = FpMatrix::from_rows(5, {{1, 2}, {3, 4}});
    auto inv = inverse(m);
    ASSERT_TRUE(inv);
    EXPECT_EQ(m * *inv, FpMatrix::identity(5, 2));
    EXPECT_FALSE(inverse(FpMatrix::from_rows(5, {{1, 2}, {2, 4}})).has_value());
}

TEST(TensorIndexTest, SpecExamplesAndRoundTrip) {
    std::vector<std::size_t> d22{2, 2}, m10{1, 0};
    EXPECT_EQ(kron_index(d22, m10), 2u);
    std::vector<std::size_t> d3{3}, m2{2};
    EXPECT_EQ(kron_index(d3, m2), 2u);
    std::vector<std::size_t> d232{2, 3, 2};
    EXPECT_EQ(kron_unindex(d232, 11), (std::vector<std::size_t>{1, 2, 1}));
    std::vector<std::size_t> bad{2, 0};
    EXPECT_THROW(kron_index(d22, std::vector<std::size_t>{2, 0}), ArgumentError);
    (void)bad;
    for (auto dims : std::vector<std::vector<std::size_t>>{{10, 10, 10}, {7, 3, 5, 2}, {10000}, {2, 5000}}) {
        TensorIndex t(dims);
        for (std::size_t f = 0; f < t.size(); ++f) ASSERT_EQ(t.flat(t.multi(f)), f);
    }
}

TEST(Kron, MatchesIndexConvention) {
    auto a = FpMatrix::from_rows(3, {{1, 2}, {0, 1}});
    auto b = FpMatrix::from_rows(3, {{2}, {1}});
    auto k = kron(a, b);
    EXPECT_EQ(k.rows(), 4u);
    EXPECT_EQ(k.cols(), 2u);
    EXPECT_EQ(k.at(1, 1), fp::mul(2, 1, 3));
    EXPECT_EQ(k.at(0, 1), fp::mul(2, 2, 3));
}
