#pragma once

#include <cmath>
#include <limits>

namespace ordwalk {

// A real number stored as (sign, log natural-magnitude) so that products of
// many small/large factors (densities, determinant pivots) never under- or
// overflow. sign == 0 represents exactly zero and logmag is then ignored.
struct LogSigned {
    int sign = 0;
    double logmag = -std::numeric_limits<double>::infinity();

    LogSigned() = default;
    LogSigned(int s, double lm) : sign(s), logmag(s == 0 ? -std::numeric_limits<double>::infinity() : lm) {}

    static LogSigned zero() { return LogSigned(); }
    static LogSigned one() { return LogSigned(1, 0.0); }

    static LogSigned from_value(double v) {
        if (v == 0.0 || std::isnan(v)) return zero();
        return LogSigned(v > 0 ? 1 : -1, std::log(std::abs(v)));
    }

    static LogSigned from_log(double log_magnitude, int s = 1) {
        if (s == 0) return zero();
        return LogSigned(s, log_magnitude);
    }

    bool is_zero() const { return sign == 0; }

    double value() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(logmag);
    }

    LogSigned operator-() const { return LogSigned(-sign, logmag); }

    LogSigned operator*(const LogSigned& o) const {
        if (sign == 0 || o.sign == 0) return zero();
        return LogSigned(sign * o.sign, logmag + o.logmag);
    }

    LogSigned& operator*=(const LogSigned& o) { return *this = *this * o; }

    LogSigned operator/(const LogSigned& o) const {
        // division by zero deliberately yields +-inf magnitude
        if (sign == 0) return zero();
        return LogSigned(sign * o.sign, logmag - o.logmag);
    }

    // Log-sum-exp on the dominant sign; exact cancellation yields zero().
    LogSigned operator+(const LogSigned& o) const {
        if (sign == 0) return o;
        if (o.sign == 0) return *this;
        const LogSigned& big = (logmag >= o.logmag) ? *this : o;
        const LogSigned& small = (logmag >= o.logmag) ? o : *this;
        double delta = small.logmag - big.logmag;  // <= 0
        if (big.sign == small.sign) {
            return LogSigned(big.sign, big.logmag + std::log1p(std::exp(delta)));
        }
        if (delta == 0.0) return zero();
        double rem = std::log1p(-std::exp(delta));
        return LogSigned(big.sign, big.logmag + rem);
    }

    LogSigned& operator+=(const LogSigned& o) { return *this = *this + o; }
    LogSigned operator-(const LogSigned& o) const { return *this + (-o); }

    bool operator==(const LogSigned& o) const {
        if (sign != o.sign) return false;
        return sign == 0 || logmag == o.logmag;
    }
};

inline LogSigned pow_int(const LogSigned& b, long long k) {
    if (k == 0) return LogSigned::one();
    if (b.sign == 0) return LogSigned::zero();
    int s = (k % 2 == 0) ? 1 : b.sign;
    return LogSigned(s, b.logmag * static_cast<double>(k));
}

}  // namespace ordwalk
