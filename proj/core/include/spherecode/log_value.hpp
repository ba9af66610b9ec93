#ifndef SPHERECODE_LOG_VALUE_HPP
#define SPHERECODE_LOG_VALUE_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace spherecode {

/// A non-negative quantity carried as its base-2 logarithm.
///
/// The f_k thresholds involve towers like (k+1)^((k+1)*ceil(1/beta'))
/// that overflow any fixed-width float, so bound arithmetic happens on
/// log2 magnitudes. Comparison and multiplication (addition of logs)
/// are exact to double precision; addition rounds once through exp2.
/// The zero value is represented by log2 = -infinity.
class LogValue {
public:
    LogValue() : log2_(-std::numeric_limits<double>::infinity()) {}

    static LogValue zero() { return LogValue(); }
    static LogValue one() { return from_log2(0.0); }

    static LogValue from_value(double v) {
        if (v < 0.0 || std::isnan(v))
            throw std::invalid_argument("LogValue: magnitude must be non-negative");
        LogValue r;
        if (v > 0.0) r.log2_ = std::log2(v);
        return r;
    }

    static LogValue from_log2(double l) {
        LogValue r;
        r.log2_ = l;
        return r;
    }

    bool is_zero() const { return std::isinf(log2_) && log2_ < 0; }

    /// log2 of the magnitude; -inf when zero.
    double log2() const { return log2_; }

    /// Materialize as double. Underflows to 0 / overflows to inf outside range.
    double value() const { return std::exp2(log2_); }

    LogValue& operator*=(const LogValue& o) {
        if (is_zero() || o.is_zero())
            log2_ = -std::numeric_limits<double>::infinity();
        else
            log2_ += o.log2_;
        return *this;
    }
    friend LogValue operator*(LogValue a, const LogValue& b) { return a *= b; }

    /// Integer or real power (exponent may be huge; stays in log space).
    LogValue pow(double e) const {
        if (is_zero()) {
            if (e <= 0.0) throw std::invalid_argument("LogValue: 0^e with e <= 0");
            return zero();
        }
        return from_log2(log2_ * e);
    }

    /// log-space addition: 2^a + 2^b.
    friend LogValue log_add(const LogValue& a, const LogValue& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const double hi = a.log2_ > b.log2_ ? a.log2_ : b.log2_;
        const double lo = a.log2_ > b.log2_ ? b.log2_ : a.log2_;
        const double delta = lo - hi;  // <= 0
        if (delta < -1080.0) return from_log2(hi);  // below double resolution
        return from_log2(hi + std::log1p(std::exp2(delta)) / std::numbers::ln2);
    }

    friend bool operator==(const LogValue& a, const LogValue& b) {
        return a.log2_ == b.log2_ || (a.is_zero() && b.is_zero());
    }
    friend bool operator<(const LogValue& a, const LogValue& b) { return a.log2_ < b.log2_; }
    friend bool operator<=(const LogValue& a, const LogValue& b) { return a.log2_ <= b.log2_; }
    friend bool operator>(const LogValue& a, const LogValue& b) { return a.log2_ > b.log2_; }
    friend bool operator>=(const LogValue& a, const LogValue& b) { return a.log2_ >= b.log2_; }

private:
    double log2_;
};

inline LogValue max(const LogValue& a, const LogValue& b) { return a < b ? b : a; }

}  // namespace spherecode

#endif
