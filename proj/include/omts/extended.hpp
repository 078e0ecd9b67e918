#pragma once

#include "omts/rational.hpp"

#include <compare>
#include <string>
#include <string_view>

namespace omts
{

// A rational extended with -inf and +inf. Empty infima are +inf and empty suprema are -inf.
class Extended
{
public:
    Extended() = default; // zero
    Extended(Rational value) : _value{ std::move(value) } {} // NOLINT(google-explicit-constructor)
    Extended(long value) : _value{ value } {}                // NOLINT(google-explicit-constructor)
    Extended(int value) : _value{ value } {}                 // NOLINT(google-explicit-constructor)

    static Extended infinity() { return Extended{ kind::pos_inf }; }
    static Extended negative_infinity() { return Extended{ kind::neg_inf }; }

    [[nodiscard]] bool is_finite() const { return _kind == kind::finite; }
    [[nodiscard]] bool is_infinity() const { return _kind == kind::pos_inf; }
    [[nodiscard]] bool is_negative_infinity() const { return _kind == kind::neg_inf; }

    // Throws omts::Error when the value is not finite.
    [[nodiscard]] const Rational& value() const;

    friend std::strong_ordering operator<=>(const Extended& a, const Extended& b);
    friend bool operator==(const Extended& a, const Extended& b) { return (a <=> b) == 0; }

    // +inf absorbs finite values and -inf; -inf absorbs finite values.
    friend Extended operator+(const Extended& a, const Extended& b);

    // Multiplication by a non-negative rational, with 0 * inf = 0 (so that the zero gain is
    // identically zero) and k * inf = inf for k > 0.
    [[nodiscard]] Extended scaled(const Rational& factor) const;

private:
    enum class kind { neg_inf, finite, pos_inf };
    explicit Extended(kind k) : _kind{ k } {}

    kind _kind = kind::finite;
    Rational _value{ 0 };
};

inline const Extended& max(const Extended& a, const Extended& b) { return a < b ? b : a; }
inline const Extended& min(const Extended& a, const Extended& b) { return b < a ? b : a; }

// "inf", "-inf" or the canonical rational form.
std::string to_string(const Extended& value);
Extended parse_extended(std::string_view text);

} // namespace omts
