#include "turingnet/rational.hpp"

#include <cctype>
#include <climits>
#include <numeric>
#include <sstream>

namespace turingnet {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        if ((a >> 64) == 0 && (b >> 64) == 0) return std::gcd(std::uint64_t(a), std::uint64_t(b));
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits64(i128 x) { return x >= INT64_MIN && x <= INT64_MAX; }

mpz_class mpz_from(i128 x) {
    u128 m = x < 0 ? u128(-(x + 1)) + 1 : u128(x);
    std::uint64_t limbs[2] = {std::uint64_t(m), std::uint64_t(m >> 64)};
    mpz_class z;
    mpz_import(z.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, limbs);
    if (x < 0) z = -z;
    return z;
}

}  // namespace

Rat::Rat(unsigned long n) {
    if (n <= std::uint64_t(INT64_MAX)) n_ = std::int64_t(n);
    else *this = from_mpq(mpq_class(n));
}

Rat::Rat(long num, long den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    *this = reduce(num, den);
}

Rat::Rat(const mpq_class& v) {
    if (v.get_den() == 0) throw std::domain_error("rational with zero denominator");
    mpq_class c(v);
    c.canonicalize();
    *this = from_mpq(std::move(c));
}

Rat Rat::reduce(i128 num, i128 den) {
    if (den < 0) num = -num, den = -den;
    u128 g = gcd128(num < 0 ? u128(-num) : u128(num), u128(den));
    if (g > 1) num /= i128(g), den /= i128(g);
    Rat r;
    if (fits64(num) && fits64(den)) {
        r.n_ = std::int64_t(num);
        r.d_ = std::int64_t(den);
    } else {
        r.big_ = std::make_unique<mpq_class>(mpz_from(num), mpz_from(den));
    }
    return r;
}

Rat Rat::from_mpq(mpq_class v) {
    Rat r;
    if (mpz_fits_slong_p(v.get_num_mpz_t()) && mpz_fits_slong_p(v.get_den_mpz_t())) {
        r.n_ = v.get_num().get_si();
        r.d_ = v.get_den().get_si();
    } else {
        r.big_ = std::make_unique<mpq_class>(std::move(v));
    }
    return r;
}

mpq_class Rat::mpq() const {
    if (big_) return *big_;
    return mpq_class(mpz_from(n_), mpz_from(d_));
}

Rat& Rat::operator+=(const Rat& o) {
    if (!big_ && !o.big_) {
        if (o.n_ == 0) return *this;
        if (d_ == 1 && o.d_ == 1) {
            i128 s = i128(n_) + o.n_;
            if (fits64(s)) {
                n_ = std::int64_t(s);
                return *this;
            }
        }
        return *this = reduce(i128(n_) * o.d_ + i128(o.n_) * d_, i128(d_) * o.d_);
    }
    return *this = from_mpq(mpq() + o.mpq());
}

Rat& Rat::operator-=(const Rat& o) { return *this += -o; }

Rat& Rat::operator*=(const Rat& o) {
    if (!big_ && !o.big_) {
        if (d_ == 1 && o.d_ == 1) {
            i128 p = i128(n_) * o.n_;
            if (fits64(p)) {
                n_ = std::int64_t(p);
                return *this;
            }
        }
        return *this = reduce(i128(n_) * o.n_, i128(d_) * o.d_);
    }
    return *this = from_mpq(mpq() * o.mpq());
}

Rat& Rat::operator/=(const Rat& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    if (!big_ && !o.big_) return *this = reduce(i128(n_) * o.d_, i128(d_) * o.n_);
    return *this = from_mpq(mpq() / o.mpq());
}

Rat Rat::operator-() const {
    if (!big_ && n_ != INT64_MIN) {
        Rat r;
        r.n_ = -n_;
        r.d_ = d_;
        return r;
    }
    return from_mpq(-mpq());
}

std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    if (!a.big_ && !b.big_) {
        i128 l = i128(a.n_) * b.d_, r = i128(b.n_) * a.d_;
        return l <=> r;
    }
    int c = cmp(a.mpq(), b.mpq());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rat Rat::parse(std::string_view text) {
    std::string_view body = text;
    if (!body.empty() && body.front() == '-') body.remove_prefix(1);
    auto slash = body.find('/');
    std::string_view p = body.substr(0, slash);
    std::string_view q = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q))
        throw ParseError("malformed rational \"" + std::string(text) + "\"");
    mpz_class num(std::string(p), 10), den(std::string(q), 10);
    if (den == 0) throw ParseError("zero denominator in \"" + std::string(text) + "\"");
    if (text.front() == '-') num = -num;
    return Rat(mpq_class(num, den));
}

std::string Rat::str() const {
    if (big_) {
        if (big_->get_den() == 1) return big_->get_num().get_str();
        return big_->get_num().get_str() + "/" + big_->get_den().get_str();
    }
    if (d_ == 1) return std::to_string(n_);
    return std::to_string(n_) + "/" + std::to_string(d_);
}

RatVec RatVec::unit(std::size_t n, std::size_t k) {
    RatVec v(n);
    v.e_.at(k) = 1;
    return v;
}

bool RatVec::is_zero() const {
    for (const auto& x : e_)
        if (!x.is_zero()) return false;
    return true;
}

RatVec RatVec::slice(std::size_t from, std::size_t len) const {
    if (from + len > e_.size()) throw ShapeError("slice out of range");
    return RatVec(std::vector<Rat>(e_.begin() + from, e_.begin() + from + len));
}

static void require_same(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw ShapeError(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                         std::to_string(b));
}

RatVec& RatVec::operator+=(const RatVec& o) {
    require_same(size(), o.size(), "vector add");
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (!o.e_[i].is_zero()) e_[i] += o.e_[i];
    return *this;
}

RatVec& RatVec::operator-=(const RatVec& o) {
    require_same(size(), o.size(), "vector subtract");
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (!o.e_[i].is_zero()) e_[i] -= o.e_[i];
    return *this;
}

RatVec& RatVec::operator*=(const Rat& s) {
    for (auto& x : e_)
        if (!x.is_zero()) x *= s;
    return *this;
}

std::string RatVec::str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < e_.size(); ++i) os << (i ? ", " : "") << e_[i];
    os << ']';
    return os.str();
}

Rat dot(const RatVec& a, const RatVec& b) {
    require_same(a.size(), b.size(), "dot product");
    Rat s;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
    return s;
}

RatVec concat(const RatVec& a, const RatVec& b) {
    std::vector<Rat> e(a.entries());
    e.insert(e.end(), b.begin(), b.end());
    return RatVec(std::move(e));
}

RatMat::RatMat(std::initializer_list<std::initializer_list<Rat>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
        if (r.size() != cols_) throw ShapeError("ragged matrix literal");
        e_.insert(e_.end(), r.begin(), r.end());
    }
}

RatMat RatMat::identity(std::size_t n) {
    RatMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatVec RatMat::row(std::size_t i) const {
    return RatVec(std::vector<Rat>(e_.begin() + i * cols_, e_.begin() + (i + 1) * cols_));
}

void RatMat::set_block(std::size_t r0, std::size_t c0, const RatMat& block) {
    if (r0 + block.rows() > rows_ || c0 + block.cols() > cols_)
        throw ShapeError("block does not fit");
    for (std::size_t i = 0; i < block.rows(); ++i)
        for (std::size_t j = 0; j < block.cols(); ++j) (*this)(r0 + i, c0 + j) = block(i, j);
}

RatMat operator*(const RatMat& a, const RatMat& b) {
    require_same(a.cols(), b.rows(), "matrix product");
    RatMat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Rat& aik = a(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (!b(k, j).is_zero()) c(i, j) += aik * b(k, j);
        }
    return c;
}

RatVec operator*(const RatVec& x, const RatMat& m) {
    require_same(x.size(), m.rows(), "vector-matrix product");
    RatVec y(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (x[i].is_zero()) continue;
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero()) y[j] += x[i] * m(i, j);
    }
    return y;
}

}  // namespace turingnet
