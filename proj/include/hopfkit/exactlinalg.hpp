#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hopfkit/errors.hpp"

namespace hopfkit {

using Residue = std::uint32_t;
using FpVector = std::vector<Residue>;

inline constexpr unsigned kMaxPrime = 17;

bool is_prime(unsigned n);
// Throws ArgumentError unless p is a prime <= kMaxPrime.
void require_supported_prime(unsigned p);

namespace fp {

inline Residue add(Residue a, Residue b, unsigned p) {
    Residue s = a + b;
    return s >= p ? s - p : s;
}
inline Residue sub(Residue a, Residue b, unsigned p) { return a >= b ? a - b : a + p - b; }
inline Residue neg(Residue a, unsigned p) { return a == 0 ? 0 : p - a; }
inline Residue mul(Residue a, Residue b, unsigned p) { return (a * b) % p; }
inline Residue reduce(long long v, unsigned p) {
    long long r = v % static_cast<long long>(p);
    return static_cast<Residue>(r < 0 ? r + p : r);
}
Residue pow(Residue a, unsigned long long e, unsigned p);
// Multiplicative inverse; throws ArgumentError on zero.
Residue inv(Residue a, unsigned p);
// Inverse of i! for i < p.
Residue inv_factorial(unsigned i, unsigned p);
Residue binomial(unsigned long long n, unsigned long long k, unsigned p);

}  // namespace fp

class FpScalar {
public:
    FpScalar(long long value, unsigned modulus);
    Residue residue() const noexcept { return residue_; }
    unsigned modulus() const noexcept { return modulus_; }

    FpScalar operator+(const FpScalar& o) const;
    FpScalar operator-(const FpScalar& o) const;
    FpScalar operator*(const FpScalar& o) const;
    FpScalar operator-() const;
    FpScalar inverse() const;
    bool operator==(const FpScalar& o) const = default;

private:
    void check_same(const FpScalar& o) const;
    Residue residue_;
    unsigned modulus_;
};

// Dense row-major matrix over GF(p).
class FpMatrix {
public:
    FpMatrix() = default;
    FpMatrix(unsigned p, std::size_t rows, std::size_t cols);

    static FpMatrix identity(unsigned p, std::size_t n);
    static FpMatrix from_rows(unsigned p, const std::vector<std::vector<long long>>& rows);
    static FpMatrix from_columns(unsigned p, std::size_t rows, const std::vector<FpVector>& cols);

    unsigned modulus() const noexcept { return p_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Residue at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    Residue& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, long long v) { at(r, c) = fp::reduce(v, p_); }

    FpVector column(std::size_t c) const;
    FpVector row(std::size_t r) const;
    void set_column(std::size_t c, std::span<const Residue> v);
    std::span<const Residue> row_span(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<Residue> row_span(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    const std::vector<Residue>& data() const noexcept { return data_; }

    FpMatrix transpose() const;
    FpMatrix operator*(const FpMatrix& o) const;
    FpMatrix operator+(const FpMatrix& o) const;
    FpMatrix operator-(const FpMatrix& o) const;
    FpVector apply(std::span<const Residue> v) const;
    FpMatrix select_columns(std::span<const std::size_t> cols) const;
    FpMatrix select_rows(std::span<const std::size_t> rows) const;
    FpMatrix hcat(const FpMatrix& o) const;
    FpMatrix vcat(const FpMatrix& o) const;
    bool is_zero() const;
    bool operator==(const FpMatrix& o) const;

    std::string to_string() const;

private:
    void check_compatible(const FpMatrix& o) const;
    unsigned p_ = 2;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Residue> data_;
};

FpMatrix kron(const FpMatrix& a, const FpMatrix& b);

struct RrefResult {
    FpMatrix reduced;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
};

// OpenMP row-elimination kernel; falls back to a single thread on small inputs.
RrefResult rref(const FpMatrix& m);
// Plain textbook elimination kept as the reference for rref().
RrefResult rref_serial(const FpMatrix& m);

std::size_t rank(const FpMatrix& m);
// Columns span ker m, one per free column, in the standard free-variable basis.
FpMatrix kernel_basis(const FpMatrix& m);
std::optional<FpVector> solve(const FpMatrix& m, std::span<const Residue> b);
// Some X with m*X = b for every column of b, or nullopt.
std::optional<FpMatrix> solve_columns(const FpMatrix& m, const FpMatrix& b);
std::optional<FpMatrix> inverse(const FpMatrix& m);

// Reduced column echelon form of the column span: columns ordered by their first
// nonzero row, leading 1, and zero in the leading rows of the other columns.
FpMatrix column_echelon(const FpMatrix& m);
// Leading row of each column of a column_echelon() result.
std::vector<std::size_t> leading_rows(const FpMatrix& echelon);
bool span_contains(const FpMatrix& span, std::span<const Residue> v);
bool same_span(const FpMatrix& a, const FpMatrix& b);
// Basis of the intersection of two column spans.
FpMatrix span_intersection(const FpMatrix& a, const FpMatrix& b);

// Multi-index bookkeeping for tensor products, last factor fastest.
class TensorIndex {
public:
    explicit TensorIndex(std::vector<std::size_t> factor_dims);
    const std::vector<std::size_t>& factor_dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return total_; }
    std::size_t flat(std::span<const std::size_t> multi) const;
    std::vector<std::size_t> multi(std::size_t flat) const;
    std::size_t stride(std::size_t slot) const { return strides_[slot]; }

private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 1;
};

std::size_t kron_index(std::span<const std::size_t> dims, std::span<const std::size_t> multi);
std::vector<std::size_t> kron_unindex(std::span<const std::size_t> dims, std::size_t flat);

}  // namespace hopfkit
