#pragma once

#include <cassert>
#include <cmath>
#include <compare>
#include <limits>
#include <ostream>

namespace mrp {

// Natural log of a probability. Probability zero is represented by an explicit
// IMPOSSIBLE state rather than -inf or a large negative float: it absorbs addition,
// compares below every finite value, and exponentiates to exactly 0.
class LogReliability {
public:
    // log 1
    constexpr LogReliability() = default;

    explicit LogReliability(double value) : value_(value) {
        assert(std::isfinite(value) && value <= 0.0);
    }

    static constexpr LogReliability impossible() {
        LogReliability r;
        r.impossible_ = true;
        return r;
    }

    static LogReliability from_probability(double p) {
        assert(p >= 0.0 && p <= 1.0);
        if (p == 0.0) return impossible();
        // log of a probability can round to a tiny positive value only for p == 1.
        return LogReliability(std::min(0.0, std::log(p)));
    }

    bool is_impossible() const noexcept { return impossible_; }

    // Finite log value; -infinity for IMPOSSIBLE.
    double value() const noexcept {
        return impossible_ ? -std::numeric_limits<double>::infinity() : value_;
    }

    double probability() const noexcept { return impossible_ ? 0.0 : std::exp(value_); }

    // Scales by a nonnegative weight with the convention 0 * log 0 = 0.
    LogReliability weighted(double weight) const {
        assert(weight >= 0.0);
        if (weight == 0.0) return LogReliability();
        if (impossible_) return impossible();
        return LogReliability(weight * value_);
    }

    friend LogReliability operator+(LogReliability a, LogReliability b) {
        if (a.impossible_ || b.impossible_) return impossible();
        return LogReliability(a.value_ + b.value_);
    }

    LogReliability& operator+=(LogReliability other) { return *this = *this + other; }

    friend bool operator==(LogReliability a, LogReliability b) {
        if (a.impossible_ || b.impossible_) return a.impossible_ == b.impossible_;
        return a.value_ == b.value_;
    }

    friend std::partial_ordering operator<=>(LogReliability a, LogReliability b) {
        if (a.impossible_ && b.impossible_) return std::partial_ordering::equivalent;
        if (a.impossible_) return std::partial_ordering::less;
        if (b.impossible_) return std::partial_ordering::greater;
        return a.value_ <=> b.value_;
    }

    friend std::ostream& operator<<(std::ostream& os, LogReliability r) {
        if (r.impossible_) return os << "IMPOSSIBLE";
        return os << r.value_;
    }

private:
    double value_ = 0.0;
    bool impossible_ = false;
};

// a <= b + slack, with IMPOSSIBLE below everything.
inline bool leq_with_slack(LogReliability a, LogReliability b, double slack) {
    if (a.is_impossible()) return true;
    if (b.is_impossible()) return false;
    return a.value() <= b.value() + slack;
}

}  // namespace mrp
