#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace turingnet {

/// Thrown when operand shapes do not line up.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown for malformed textual input (rationals, machine and rnn files, networks).
struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator. Values whose numerator and denominator fit in 64 bits are
/// stored inline; larger ones live in a GMP rational.
class Rat {
public:
    Rat() = default;
    Rat(int n) : n_(n) {}
    Rat(long n) : n_(n) {}
    Rat(long long n) : n_(n) {}
    Rat(unsigned long n);
    Rat(long num, long den);
    explicit Rat(const mpq_class& v);

    Rat(const Rat& o) : n_(o.n_), d_(o.d_), big_(o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr) {}
    Rat(Rat&&) noexcept = default;
    Rat& operator=(const Rat& o) {
        if (this != &o) {
            n_ = o.n_;
            d_ = o.d_;
            big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
        }
        return *this;
    }
    Rat& operator=(Rat&&) noexcept = default;

    /// Accepts "p", "-p", "p/q" with decimal digits; q must be non-zero.
    static Rat parse(std::string_view text);

    /// Canonical "p/q", or "p" for integers.
    std::string str() const;

    int sign() const { return big_ ? sgn(*big_) : (n_ > 0) - (n_ < 0); }
    bool is_zero() const { return !big_ && n_ == 0; }
    bool is_integer() const { return big_ ? big_->get_den() == 1 : d_ == 1; }
    Rat abs() const { return sign() < 0 ? -*this : *this; }
    mpq_class mpq() const;
    mpz_class num() const { return mpq().get_num(); }
    mpz_class den() const { return mpq().get_den(); }

    Rat& operator+=(const Rat& o);
    Rat& operator-=(const Rat& o);
    Rat& operator*=(const Rat& o);
    Rat& operator/=(const Rat& o);

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    Rat operator-() const;

    friend bool operator==(const Rat& a, const Rat& b) {
        if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
        if (a.big_ && b.big_) return *a.big_ == *b.big_;
        return false;  // canonical forms differ in size
    }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b);

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

private:
    static Rat reduce(__int128 num, __int128 den);
    static Rat from_mpq(mpq_class v);

    std::int64_t n_ = 0, d_ = 1;
    std::unique_ptr<mpq_class> big_;
};

/// Row vector of rationals.
class RatVec {
public:
    RatVec() = default;
    explicit RatVec(std::size_t n) : e_(n) {}
    RatVec(std::initializer_list<Rat> xs) : e_(xs) {}
    explicit RatVec(std::vector<Rat> xs) : e_(std::move(xs)) {}

    static RatVec zeros(std::size_t n) { return RatVec(n); }
    static RatVec unit(std::size_t n, std::size_t k);

    std::size_t size() const { return e_.size(); }
    Rat& operator[](std::size_t i) { return e_[i]; }
    const Rat& operator[](std::size_t i) const { return e_[i]; }
    const Rat& at(std::size_t i) const { return e_.at(i); }
    const std::vector<Rat>& entries() const { return e_; }
    auto begin() const { return e_.begin(); }
    auto end() const { return e_.end(); }

    bool is_zero() const;
    /// Sub-vector [from, from+len).
    RatVec slice(std::size_t from, std::size_t len) const;

    RatVec& operator+=(const RatVec& o);
    RatVec& operator-=(const RatVec& o);
    RatVec& operator*=(const Rat& s);
    friend RatVec operator+(RatVec a, const RatVec& b) { return a += b; }
    friend RatVec operator-(RatVec a, const RatVec& b) { return a -= b; }
    friend RatVec operator*(RatVec a, const Rat& s) { return a *= s; }
    friend bool operator==(const RatVec& a, const RatVec& b) { return a.e_ == b.e_; }

    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const RatVec& v) { return os << v.str(); }

private:
    std::vector<Rat> e_;
};

Rat dot(const RatVec& a, const RatVec& b);
RatVec concat(const RatVec& a, const RatVec& b);

/// Dense row-major rational matrix.
class RatMat {
public:
    RatMat() = default;
    RatMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}
    RatMat(std::initializer_list<std::initializer_list<Rat>> rows);

    static RatMat zeros(std::size_t r, std::size_t c) { return RatMat(r, c); }
    static RatMat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rat& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
    RatVec row(std::size_t i) const;

    /// Writes `block` with its top-left corner at (r0, c0).
    void set_block(std::size_t r0, std::size_t c0, const RatMat& block);

    friend bool operator==(const RatMat& a, const RatMat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> e_;
};

RatMat operator*(const RatMat& a, const RatMat& b);
/// x·M with x a row vector.
RatVec operator*(const RatVec& x, const RatMat& m);

}  // namespace turingnet
