#include "hopfkit/exactlinalg.hpp"

#include <omp.h>

#include <algorithm>
#include <sstream>
#include <utility>

namespace hopfkit {

bool is_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

void require_supported_prime(unsigned p) {
    if (!is_prime(p)) throw ArgumentError("modulus " + std::to_string(p) + " is not prime");
    if (p > kMaxPrime)
        throw ArgumentError("prime " + std::to_string(p) + " exceeds the supported maximum " +
                            std::to_string(kMaxPrime));
}

namespace fp {

Residue pow(Residue a, unsigned long long e, unsigned p) {
    Residue result = 1 % p;
    Residue base = a % p;
    while (e > 0) {
        if (e & 1ULL) result = mul(result, base, p);
        base = mul(base, base, p);
        e >>= 1ULL;
    }
    return result;
}

Residue inv(Residue a, unsigned p) {
    if (a % p == 0) throw ArgumentError("zero has no inverse mod " + std::to_string(p));
    return pow(a, p - 2, p);
}

Residue inv_factorial(unsigned i, unsigned p) {
    if (i >= p) throw ArgumentError("factorial of " + std::to_string(i) + " vanishes mod " + std::to_string(p));
    Residue f = 1;
    for (unsigned k = 2; k <= i; ++k) f = mul(f, k % p, p);
    return inv(f, p);
}

// Lucas' theorem.
Residue binomial(unsigned long long n, unsigned long long k, unsigned p) {
    if (k > n) return 0;
    Residue result = 1;
    while (n > 0 || k > 0) {
        unsigned ni = static_cast<unsigned>(n % p);
        unsigned ki = static_cast<unsigned>(k % p);
        if (ki > ni) return 0;
        Residue num = 1, den = 1;
        for (unsigned t = 0; t < ki; ++t) {
            num = mul(num, ni - t, p);
            den = mul(den, t + 1, p);
        }
        result = mul(result, mul(num, inv(den, p), p), p);
        n /= p;
        k /= p;
    }
    return result;
}

}  // namespace fp

FpScalar::FpScalar(long long value, unsigned modulus) : modulus_(modulus) {
    require_supported_prime(modulus);
    residue_ = fp::reduce(value, modulus);
}

void FpScalar::check_same(const FpScalar& o) const {
    if (o.modulus_ != modulus_) throw ArgumentError("mixed moduli in scalar arithmetic");
}

FpScalar FpScalar::operator+(const FpScalar& o) const {
    check_same(o);
    return FpScalar(fp::add(residue_, o.residue_, modulus_), modulus_);
}
FpScalar FpScalar::operator-(const FpScalar& o) const {
    check_same(o);
    return FpScalar(fp::sub(residue_, o.residue_, modulus_), modulus_);
}
FpScalar FpScalar::operator*(const FpScalar& o) const {
    check_same(o);
    return FpScalar(fp::mul(residue_, o.residue_, modulus_), modulus_);
}
FpScalar FpScalar::operator-() const { return FpScalar(fp::neg(residue_, modulus_), modulus_); }
FpScalar FpScalar::inverse() const { return FpScalar(fp::inv(residue_, modulus_), modulus_); }

FpMatrix::FpMatrix(unsigned p, std::size_t rows, std::size_t cols)
    : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {
    require_supported_prime(p);
}

FpMatrix FpMatrix::identity(unsigned p, std::size_t n) {
    FpMatrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FpMatrix FpMatrix::from_rows(unsigned p, const std::vector<std::vector<long long>>& rows) {
    std::size_t c = rows.empty() ? 0 : rows.front().size();
    FpMatrix m(p, rows.size(), c);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != c) throw ArgumentError("ragged row list");
        for (std::size_t j = 0; j < c; ++j) m.set(r, j, rows[r][j]);
    }
    return m;
}

FpMatrix FpMatrix::from_columns(unsigned p, std::size_t rows, const std::vector<FpVector>& cols) {
    FpMatrix m(p, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
    return m;
}

FpVector FpMatrix::column(std::size_t c) const {
    if (c >= cols_) throw ArgumentError("column index out of range");
    FpVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
    return v;
}

FpVector FpMatrix::row(std::size_t r) const {
    if (r >= rows_) throw ArgumentError("row index out of range");
    return FpVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                    data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

void FpMatrix::set_column(std::size_t c, std::span<const Residue> v) {
    if (c >= cols_ || v.size() != rows_) throw ArgumentError("column shape mismatch");
    for (std::size_t r = 0; r < rows_; ++r) at(r, c) = v[r] % p_;
}

FpMatrix FpMatrix::transpose() const {
    FpMatrix t(p_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

void FpMatrix::check_compatible(const FpMatrix& o) const {
    if (o.p_ != p_) throw ArgumentError("mixed moduli in matrix arithmetic");
}

FpMatrix FpMatrix::operator*(const FpMatrix& o) const {
    check_compatible(o);
    if (cols_ != o.rows_) throw ArgumentError("matrix product shape mismatch");
    FpMatrix out(p_, rows_, o.cols_);
    std::vector<unsigned long long> acc(o.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::fill(acc.begin(), acc.end(), 0ULL);
        for (std::size_t k = 0; k < cols_; ++k) {
            Residue a = at(r, k);
            if (a == 0) continue;
            const Residue* orow = o.data_.data() + k * o.cols_;
            for (std::size_t c = 0; c < o.cols_; ++c) acc[c] += static_cast<unsigned long long>(a) * orow[c];
        }
        for (std::size_t c = 0; c < o.cols_; ++c) out.at(r, c) = static_cast<Residue>(acc[c] % p_);
    }
    return out;
}

FpMatrix FpMatrix::operator+(const FpMatrix& o) const {
    check_compatible(o);
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ArgumentError("matrix sum shape mismatch");
    FpMatrix out(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = fp::add(data_[i], o.data_[i], p_);
    return out;
}

FpMatrix FpMatrix::operator-(const FpMatrix& o) const {
    check_compatible(o);
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ArgumentError("matrix difference shape mismatch");
    FpMatrix out(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = fp::sub(data_[i], o.data_[i], p_);
    return out;
}

FpVector FpMatrix::apply(std::span<const Residue> v) const {
    if (v.size() != cols_) throw ArgumentError("matrix-vector shape mismatch");
    FpVector out(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
        unsigned long long acc = 0;
        const Residue* row = data_.data() + r * cols_;
        for (std::size_t c = 0; c < cols_; ++c) acc += static_cast<unsigned long long>(row[c]) * v[c];
        out[r] = static_cast<Residue>(acc % p_);
    }
    return out;
}

FpMatrix FpMatrix::select_columns(std::span<const std::size_t> cols) const {
    FpMatrix out(p_, rows_, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j] >= cols_) throw ArgumentError("column selection out of range");
        for (std::size_t r = 0; r < rows_; ++r) out.at(r, j) = at(r, cols[j]);
    }
    return out;
}

FpMatrix FpMatrix::select_rows(std::span<const std::size_t> rows) const {
    FpMatrix out(p_, rows.size(), cols_);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= rows_) throw ArgumentError("row selection out of range");
        std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(rows[i] * cols_), cols_,
                    out.data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
    }
    return out;
}

FpMatrix FpMatrix::hcat(const FpMatrix& o) const {
    check_compatible(o);
    if (rows_ != o.rows_) throw ArgumentError("hcat row mismatch");
    FpMatrix out(p_, rows_, cols_ + o.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) out.at(r, c) = at(r, c);
        for (std::size_t c = 0; c < o.cols_; ++c) out.at(r, cols_ + c) = o.at(r, c);
    }
    return out;
}

FpMatrix FpMatrix::vcat(const FpMatrix& o) const {
    check_compatible(o);
    if (cols_ != o.cols_) throw ArgumentError("vcat column mismatch");
    FpMatrix out(p_, rows_ + o.rows_, cols_);
    std::copy(data_.begin(), data_.end(), out.data_.begin());
    std::copy(o.data_.begin(), o.data_.end(), out.data_.begin() + static_cast<std::ptrdiff_t>(data_.size()));
    return out;
}

bool FpMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Residue x) { return x == 0; });
}

bool FpMatrix::operator==(const FpMatrix& o) const {
    return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

std::string FpMatrix::to_string() const {
    std::ostringstream os;
    for (std::size_t r = 0; r < rows_; ++r) {
        os << '[';
        for (std::size_t c = 0; c < cols_; ++c) os << (c ? " " : "") << at(r, c);
        os << "]\n";
    }
    return os.str();
}

FpMatrix kron(const FpMatrix& a, const FpMatrix& b) {
    if (a.modulus() != b.modulus()) throw ArgumentError("mixed moduli in kron");
    unsigned p = a.modulus();
    FpMatrix out(p, a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Residue x = a.at(i, j);
            if (x == 0) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out.at(i * b.rows() + k, j * b.cols() + l) = fp::mul(x, b.at(k, l), p);
        }
    return out;
}

RrefResult rref_serial(const FpMatrix& m) {
    RrefResult res{m, 0, {}};
    FpMatrix& a = res.reduced;
    const unsigned p = a.modulus();
    std::size_t lead = 0;
    for (std::size_t c = 0; c < a.cols() && lead < a.rows(); ++c) {
        std::size_t piv = lead;
        while (piv < a.rows() && a.at(piv, c) == 0) ++piv;
        if (piv == a.rows()) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.at(piv, j), a.at(lead, j));
        Residue s = fp::inv(a.at(lead, c), p);
        for (std::size_t j = 0; j < a.cols(); ++j) a.at(lead, j) = fp::mul(a.at(lead, j), s, p);
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == lead) continue;
            Residue f = a.at(r, c);
            if (f == 0) continue;
            for (std::size_t j = 0; j < a.cols(); ++j)
                a.at(r, j) = fp::sub(a.at(r, j), fp::mul(f, a.at(lead, j), p), p);
        }
        res.pivots.push_back(c);
        ++lead;
    }
    res.rank = lead;
    return res;
}

RrefResult rref(const FpMatrix& m) {
    RrefResult res{m, 0, {}};
    FpMatrix& a = res.reduced;
    const unsigned p = a.modulus();
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    const bool parallel = rows * cols >= (1u << 16);
    std::size_t lead = 0;
    for (std::size_t c = 0; c < cols && lead < rows; ++c) {
        std::size_t piv = lead;
        while (piv < rows && a.at(piv, c) == 0) ++piv;
        if (piv == rows) continue;
        if (piv != lead) {
            auto x = a.row_span(piv);
            auto y = a.row_span(lead);
            std::swap_ranges(x.begin() + static_cast<std::ptrdiff_t>(c), x.end(),
                             y.begin() + static_cast<std::ptrdiff_t>(c));
        }
        Residue* prow = a.row_span(lead).data();
        const Residue s = fp::inv(prow[c], p);
        for (std::size_t j = c; j < cols; ++j) prow[j] = fp::mul(prow[j], s, p);
        const long long n_rows = static_cast<long long>(rows);
#pragma omp parallel for schedule(static) if (parallel)
        for (long long rr = 0; rr < n_rows; ++rr) {
            const std::size_t r = static_cast<std::size_t>(rr);
            if (r == lead) continue;
            Residue* row = a.row_span(r).data();
            const Residue f = row[c];
            if (f == 0) continue;
            const Residue nf = p - f;
            for (std::size_t j = c; j < cols; ++j) row[j] = (row[j] + nf * prow[j]) % p;
        }
        res.pivots.push_back(c);
        ++lead;
    }
    res.rank = lead;
    return res;
}

std::size_t rank(const FpMatrix& m) { return rref(m).rank; }

FpMatrix kernel_basis(const FpMatrix& m) {
    RrefResult r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : r.pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    const unsigned p = m.modulus();
    FpMatrix k(p, m.cols(), free_cols.size());
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
        std::size_t f = free_cols[j];
        k.at(f, j) = 1;
        for (std::size_t i = 0; i < r.rank; ++i) k.at(r.pivots[i], j) = fp::neg(r.reduced.at(i, f), p);
    }
    return k;
}

std::optional<FpMatrix> solve_columns(const FpMatrix& m, const FpMatrix& b) {
    if (b.rows() != m.rows()) throw ArgumentError("right-hand side length does not match matrix rows");
    RrefResult r = rref(m.hcat(b));
    for (std::size_t c : r.pivots)
        if (c >= m.cols()) return std::nullopt;
    FpMatrix x(m.modulus(), m.cols(), b.cols());
    for (std::size_t i = 0; i < r.rank; ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) x.at(r.pivots[i], j) = r.reduced.at(i, m.cols() + j);
    return x;
}

std::optional<FpVector> solve(const FpMatrix& m, std::span<const Residue> b) {
    if (b.size() != m.rows()) throw ArgumentError("right-hand side length does not match matrix rows");
    FpMatrix rhs(m.modulus(), b.size(), 1);
    rhs.set_column(0, b);
    auto x = solve_columns(m, rhs);
    if (!x) return std::nullopt;
    return x->column(0);
}

std::optional<FpMatrix> inverse(const FpMatrix& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    if (rank(m) != m.rows()) return std::nullopt;
    return solve_columns(m, FpMatrix::identity(m.modulus(), m.rows()));
}

FpMatrix column_echelon(const FpMatrix& m) {
    RrefResult r = rref(m.transpose());
    std::vector<std::size_t> keep(r.rank);
    for (std::size_t i = 0; i < r.rank; ++i) keep[i] = i;
    return r.reduced.select_rows(keep).transpose();
}

std::vector<std::size_t> leading_rows(const FpMatrix& echelon) {
    std::vector<std::size_t> lead;
    for (std::size_t c = 0; c < echelon.cols(); ++c) {
        std::size_t r = 0;
        while (r < echelon.rows() && echelon.at(r, c) == 0) ++r;
        lead.push_back(r);
    }
    return lead;
}

bool span_contains(const FpMatrix& span, std::span<const Residue> v) {
    FpMatrix col(span.modulus(), v.size(), 1);
    col.set_column(0, v);
    return rank(span.hcat(col)) == rank(span);
}

bool same_span(const FpMatrix& a, const FpMatrix& b) {
    std::size_t ra = rank(a);
    return ra == rank(b) && rank(a.hcat(b)) == ra;
}

FpMatrix span_intersection(const FpMatrix& a, const FpMatrix& b) {
    if (a.rows() != b.rows()) throw ArgumentError("span intersection of different ambient spaces");
    const unsigned p = a.modulus();
    FpMatrix neg_b(p, b.rows(), b.cols());
    for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) neg_b.at(r, c) = fp::neg(b.at(r, c), p);
    FpMatrix k = kernel_basis(a.hcat(neg_b));
    std::vector<std::size_t> top(a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) top[i] = i;
    return column_echelon(a * k.select_rows(top));
}

TensorIndex::TensorIndex(std::vector<std::size_t> factor_dims) : dims_(std::move(factor_dims)) {
    strides_.assign(dims_.size(), 1);
    for (std::size_t i = dims_.size(); i-- > 0;) {
        if (dims_[i] == 0) throw ArgumentError("tensor factor of dimension zero");
        strides_[i] = total_;
        total_ *= dims_[i];
    }
}

std::size_t TensorIndex::flat(std::span<const std::size_t> multi) const {
    if (multi.size() != dims_.size()) throw ArgumentError("multi-index arity mismatch");
    std::size_t f = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (multi[i] >= dims_[i]) throw ArgumentError("multi-index entry out of range");
        f += multi[i] * strides_[i];
    }
    return f;
}

std::vector<std::size_t> TensorIndex::multi(std::size_t flat) const {
    if (flat >= total_) throw ArgumentError("flat tensor position out of range");
    std::vector<std::size_t> m(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        m[i] = flat / strides_[i];
        flat %= strides_[i];
    }
    return m;
}

std::size_t kron_index(std::span<const std::size_t> dims, std::span<const std::size_t> multi) {
    return TensorIndex({dims.begin(), dims.end()}).flat(multi);
}

std::vector<std::size_t> kron_unindex(std::span<const std::size_t> dims, std::size_t flat) {
    return TensorIndex({dims.begin(), dims.end()}).multi(flat);
}

}  // namespace hopfkit
