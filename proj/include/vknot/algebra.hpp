#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace vknot {

inline long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("64-bit overflow in ring arithmetic (add)");
    return r;
}

inline long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("64-bit overflow in ring arithmetic (mul)");
    return r;
}

inline long long checked_neg(long long a) {
    long long r;
    if (__builtin_sub_overflow(0LL, a, &r))
        throw std::overflow_error("64-bit overflow in ring arithmetic (neg)");
    return r;
}

enum class RingKind { Zn, Integers, LaurentZ };

/**
 * Ring element storage: sparse exponent -> coefficient map.
 * Scalar rings (Zn, Z) keep at most one entry, at exponent 0.
 * Zero is the empty map in every ring, so equality is plain map equality.
 */
struct RingElem {
    std::map<int, long long> terms;

    bool is_zero() const { return terms.empty(); }
    bool operator==(const RingElem& o) const { return terms == o.terms; }
    bool operator!=(const RingElem& o) const { return terms != o.terms; }
    bool operator<(const RingElem& o) const { return terms < o.terms; }
};

/**
 * One of the three supported exact coefficient rings: Z/nZ, Z, or
 * Laurent polynomials Z[x,x^-1].  All arithmetic goes through this
 * class so elements stay in canonical form (residues reduced, zero
 * coefficients dropped).
 */
class Ring {
public:
    static Ring integers() { return Ring(RingKind::Integers, 0); }

    static Ring mod(long long n) {
        if (n < 2)
            throw std::domain_error("modulus must be at least 2");
        return Ring(RingKind::Zn, n);
    }

    static Ring laurent() { return Ring(RingKind::LaurentZ, 0); }

    /** Accepts "Z", "LaurentZ", or "Z<n>" with n >= 2 (e.g. "Z5"). */
    static Ring from_descriptor(const std::string& s) {
        if (s == "Z")
            return integers();
        if (s == "LaurentZ")
            return laurent();
        if (s.size() > 1 && s[0] == 'Z') {
            char* end = nullptr;
            long long n = std::strtoll(s.c_str() + 1, &end, 10);
            if (end && *end == '\0' && n >= 2)
                return mod(n);
        }
        throw std::domain_error("unknown ring descriptor: " + s);
    }

    RingKind kind() const { return kind_; }
    long long modulus() const { return n_; }

    std::string descriptor() const {
        switch (kind_) {
        case RingKind::Integers: return "Z";
        case RingKind::LaurentZ: return "LaurentZ";
        default: return "Z" + std::to_string(n_);
        }
    }

    bool operator==(const Ring& o) const {
        return kind_ == o.kind_ && n_ == o.n_;
    }
    bool operator!=(const Ring& o) const { return !(*this == o); }

    RingElem zero() const { return RingElem{}; }
    RingElem one() const { return from_int(1); }

    RingElem from_int(long long v) const {
        RingElem e;
        long long c = reduce(v);
        if (c != 0)
            e.terms[0] = c;
        return e;
    }

    /** c * x^exp; exp must be 0 outside LaurentZ. */
    RingElem monomial(long long c, int exp) const {
        if (exp != 0 && kind_ != RingKind::LaurentZ)
            throw std::domain_error("nonzero exponent in a scalar ring");
        RingElem e;
        long long r = reduce(c);
        if (r != 0)
            e.terms[exp] = r;
        return e;
    }

    RingElem add(const RingElem& a, const RingElem& b) const {
        RingElem r = a;
        for (const auto& [exp, c] : b.terms) {
            auto it = r.terms.find(exp);
            if (it == r.terms.end()) {
                r.terms[exp] = c;
            } else {
                it->second = reduce(checked_add(it->second, c));
                if (it->second == 0)
                    r.terms.erase(it);
            }
        }
        return r;
    }

    RingElem neg(const RingElem& a) const {
        RingElem r;
        for (const auto& [exp, c] : a.terms)
            r.terms[exp] = reduce(checked_neg(c));
        return r;
    }

    RingElem sub(const RingElem& a, const RingElem& b) const {
        return add(a, neg(b));
    }

    RingElem mul(const RingElem& a, const RingElem& b) const {
        RingElem r;
        for (const auto& [ea, ca] : a.terms) {
            for (const auto& [eb, cb] : b.terms) {
                long long exp = (long long)ea + (long long)eb;
                if (exp < std::numeric_limits<int>::min() ||
                    exp > std::numeric_limits<int>::max())
                    throw std::overflow_error("Laurent exponent overflow");
                auto it = r.terms.find((int)exp);
                long long add_c = checked_mul(ca, cb);
                if (it == r.terms.end()) {
                    long long c = reduce(add_c);
                    if (c != 0)
                        r.terms[(int)exp] = c;
                } else {
                    it->second = reduce(checked_add(it->second, add_c));
                    if (it->second == 0)
                        r.terms.erase(it);
                }
            }
        }
        return r;
    }

    bool is_unit(const RingElem& a) const {
        switch (kind_) {
        case RingKind::Zn:
            return !a.is_zero() && gcd_ll(a.terms.begin()->second, n_) == 1;
        case RingKind::Integers:
            return a.terms.size() == 1 && a.terms.count(0) &&
                   (a.terms.at(0) == 1 || a.terms.at(0) == -1);
        case RingKind::LaurentZ:
            return a.terms.size() == 1 &&
                   (a.terms.begin()->second == 1 ||
                    a.terms.begin()->second == -1);
        }
        return false;
    }

    /** Multiplicative inverse; throws std::domain_error for non-units. */
    RingElem inverse(const RingElem& a) const {
        if (!is_unit(a))
            throw std::domain_error("not a unit in " + descriptor() + ": " +
                                    to_string(a));
        switch (kind_) {
        case RingKind::Zn: {
            long long inv = mod_inverse(a.terms.begin()->second, n_);
            return from_int(inv);
        }
        case RingKind::Integers:
            return a;
        case RingKind::LaurentZ: {
            auto [exp, c] = *a.terms.begin();
            return monomial(c, -exp);
        }
        }
        return zero();
    }

    RingElem pow(const RingElem& a, long long e) const {
        RingElem base = a;
        if (e < 0) {
            base = inverse(a);
            e = -e;
        }
        RingElem r = one();
        while (e > 0) {
            if (e & 1)
                r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    /**
     * Canonical serialization.  Scalars print as decimals; Laurent
     * elements as "c*x^e" terms in ascending exponent order joined by
     * " + ", with the exponent-0 term printed as a bare decimal.
     */
    std::string to_string(const RingElem& a) const {
        if (a.is_zero())
            return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [exp, c] : a.terms) {
            if (!first)
                out << " + ";
            first = false;
            if (exp == 0)
                out << c;
            else
                out << c << "*x^" << exp;
        }
        return out.str();
    }

    /** Inverse of to_string; accepts "c", "c*x^e", "x^e", "-x^e" terms. */
    RingElem parse(const std::string& text) const {
        RingElem r;
        size_t pos = 0;
        bool any = false;
        while (true) {
            std::string term = next_term(text, pos);
            if (term.empty()) {
                if (!any)
                    throw std::domain_error("empty ring element");
                break;
            }
            any = true;
            r = add(r, parse_term(term));
            if (pos >= text.size())
                break;
        }
        return r;
    }

private:
    RingKind kind_;
    long long n_;

    Ring(RingKind k, long long n) : kind_(k), n_(n) {}

    long long reduce(long long v) const {
        if (kind_ != RingKind::Zn)
            return v;
        long long r = v % n_;
        return r < 0 ? r + n_ : r;
    }

    static long long gcd_ll(long long a, long long b) {
        if (a < 0)
            a = -a;
        while (b != 0) {
            long long t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static long long mod_inverse(long long a, long long n) {
        long long t = 0, new_t = 1, r = n, new_r = ((a % n) + n) % n;
        while (new_r != 0) {
            long long q = r / new_r;
            long long tmp = t - q * new_t;
            t = new_t;
            new_t = tmp;
            tmp = r - q * new_r;
            r = new_r;
            new_r = tmp;
        }
        if (r != 1)
            throw std::domain_error("not invertible mod " + std::to_string(n));
        return t < 0 ? t + n : t;
    }

    static std::string next_term(const std::string& text, size_t& pos) {
        size_t start = pos;
        while (start < text.size() && std::isspace((unsigned char)text[start]))
            ++start;
        size_t end = start;
        while (end < text.size()) {
            // '+' separates terms unless it is a leading sign
            if (text[end] == '+' && end > start)
                break;
            ++end;
        }
        std::string term = text.substr(start, end - start);
        while (!term.empty() && std::isspace((unsigned char)term.back()))
            term.pop_back();
        pos = end < text.size() ? end + 1 : text.size();
        return term;
    }

    RingElem parse_term(const std::string& term) const {
        std::string body = term;
        long long coeff = 1;
        bool have_coeff = false;
        size_t i = 0;
        if (i < body.size() && (body[i] == '+' || body[i] == '-')) {
            if (body[i] == '-')
                coeff = -1;
            ++i;
            while (i < body.size() && std::isspace((unsigned char)body[i]))
                ++i;
        }
        size_t digit_start = i;
        while (i < body.size() && std::isdigit((unsigned char)body[i]))
            ++i;
        if (i > digit_start) {
            coeff = checked_mul(coeff,
                                std::stoll(body.substr(digit_start, i - digit_start)));
            have_coeff = true;
        }
        while (i < body.size() && std::isspace((unsigned char)body[i]))
            ++i;
        if (i == body.size()) {
            if (!have_coeff)
                throw std::domain_error("bad ring element term: " + term);
            return from_int(coeff);
        }
        if (body[i] == '*') {
            ++i;
            while (i < body.size() && std::isspace((unsigned char)body[i]))
                ++i;
        } else if (have_coeff) {
            throw std::domain_error("bad ring element term: " + term);
        }
        if (i >= body.size() || body[i] != 'x')
            throw std::domain_error("bad ring element term: " + term);
        ++i;
        long long exp = 1;
        if (i < body.size()) {
            if (body[i] != '^')
                throw std::domain_error("bad ring element term: " + term);
            ++i;
            char* end = nullptr;
            exp = std::strtoll(body.c_str() + i, &end, 10);
            if (end == body.c_str() + i)
                throw std::domain_error("bad ring element term: " + term);
            i = end - body.c_str();
            while (i < body.size() && std::isspace((unsigned char)body[i]))
                ++i;
            if (i != body.size())
                throw std::domain_error("bad ring element term: " + term);
        }
        if (exp < std::numeric_limits<int>::min() ||
            exp > std::numeric_limits<int>::max())
            throw std::overflow_error("Laurent exponent overflow");
        return monomial(coeff, (int)exp);
    }
};

} // namespace vknot
