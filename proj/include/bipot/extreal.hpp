#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

namespace bipot {

class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ResolutionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Element of R ∪ {+∞}.
///
/// +∞ is a distinguished state, not an IEEE value taking part in arithmetic:
/// every operator branches on it, so 0·(+∞) = +∞ and a + (+∞) = +∞ hold
/// instead of producing NaN. The encoding in storage happens to use the IEEE
/// infinity so that ordering comparisons stay branch-free.
class ExtReal {
public:
    constexpr ExtReal() = default;

    // NOLINTNEXTLINE(google-explicit-constructor)
    ExtReal(double v) : v_(v)
    {
        if (std::isnan(v)) {
            throw InvalidInput("ExtReal: NaN is not representable");
        }
        if (std::isinf(v) && v < 0) {
            throw InvalidInput("ExtReal: -inf is not representable");
        }
    }

    static constexpr ExtReal infinity() { return ExtReal(Tag{}); }

    constexpr bool is_finite() const { return v_ != kInf; }
    constexpr bool is_infinite() const { return v_ == kInf; }

    /// Finite value. Calling this on +∞ is a logic error.
    double value() const
    {
        if (!is_finite()) {
            throw std::logic_error("ExtReal::value() on +inf");
        }
        return v_;
    }

    /// Raw encoding: the finite value, or IEEE +inf. For I/O and sorting only.
    constexpr double raw() const { return v_; }

    friend ExtReal operator+(ExtReal a, ExtReal b)
    {
        if (!a.is_finite() || !b.is_finite()) {
            return infinity();
        }
        return ExtReal(a.v_ + b.v_);
    }
    friend ExtReal operator+(ExtReal a, double b) { return a + ExtReal(b); }
    friend ExtReal operator+(double a, ExtReal b) { return ExtReal(a) + b; }

    /// a − r for finite r; +∞ − r = +∞.
    friend ExtReal operator-(ExtReal a, double r)
    {
        if (!a.is_finite()) {
            return infinity();
        }
        return ExtReal(a.v_ - r);
    }

    /// λ·a for λ ≥ 0, with 0·(+∞) = +∞.
    ExtReal scaled(double lambda) const
    {
        if (!(lambda >= 0)) {
            throw InvalidInput("ExtReal::scaled: negative or NaN factor");
        }
        if (!is_finite()) {
            return infinity();
        }
        return ExtReal(lambda * v_);
    }

    ExtReal& operator+=(ExtReal o) { return *this = *this + o; }

    friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
    friend constexpr auto operator<=>(ExtReal a, ExtReal b)
    {
        // NaN never enters, so the order is total.
        return a.v_ < b.v_   ? std::strong_ordering::less
               : a.v_ > b.v_ ? std::strong_ordering::greater
                             : std::strong_ordering::equal;
    }

    friend ExtReal min(ExtReal a, ExtReal b) { return b < a ? b : a; }
    friend ExtReal max(ExtReal a, ExtReal b) { return a < b ? b : a; }

private:
    struct Tag {};
    static constexpr double kInf = std::numeric_limits<double>::infinity();
    constexpr explicit ExtReal(Tag) : v_(kInf) {}

    double v_ = 0.0;
};

inline constexpr ExtReal kPlusInf = ExtReal::infinity();

/// Shortest decimal that round-trips, or "inf".
std::string to_string(ExtReal v);
std::string format_real(double v);

/// Parses a decimal or "inf"; throws InvalidInput otherwise.
ExtReal parse_extreal(const std::string& token);

} // namespace bipot
