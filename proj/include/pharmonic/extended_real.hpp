#pragma once

#include <cmath>
#include <compare>
#include <string>

namespace pharm {

/**
 * A real number or +infinity. Finite values are stored as doubles; the
 * infinite state is an explicit flag so it never leaks through arithmetic.
 */
class ExtendedReal {
public:
    constexpr ExtendedReal() = default;
    constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT: implicit from finite values

    static constexpr ExtendedReal infinity() {
        ExtendedReal x;
        x.infinite_ = true;
        return x;
    }

    constexpr bool is_infinite() const { return infinite_; }
    constexpr bool is_finite() const { return !infinite_; }

    /// Finite value; throws on +inf.
    double value() const;
    /// Finite value or HUGE_VAL, for the C boundary.
    double to_double() const { return infinite_ ? HUGE_VAL : value_; }
    static ExtendedReal from_double(double v) { return std::isinf(v) && v > 0 ? infinity() : ExtendedReal(v); }

    friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }
    friend constexpr std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
        if (a.infinite_ || b.infinite_) {
            if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
            return a.infinite_ ? std::partial_ordering::greater : std::partial_ordering::less;
        }
        return a.value_ <=> b.value_;
    }

    std::string to_string() const;

private:
    double value_ = 0.0;
    bool infinite_ = false;
};

} // namespace pharm
