#include "omts/extended.hpp"

namespace omts
{

const Rational& Extended::value() const
{
    if (_kind != kind::finite)
        throw Error("value of a non-finite extended rational requested");
    return _value;
}

std::strong_ordering operator<=>(const Extended& a, const Extended& b)
{
    if (a._kind != b._kind)
        return static_cast<int>(a._kind) <=> static_cast<int>(b._kind);
    if (a._kind != Extended::kind::finite)
        return std::strong_ordering::equal;
    int c = cmp(a._value, b._value);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Extended operator+(const Extended& a, const Extended& b)
{
    if (a.is_infinity() || b.is_infinity()) {
        if (a.is_negative_infinity() || b.is_negative_infinity())
            throw Error("undefined sum of +inf and -inf");
        return Extended::infinity();
    }
    if (a.is_negative_infinity() || b.is_negative_infinity())
        return Extended::negative_infinity();
    return Extended{ Rational(a._value + b._value) };
}

Extended Extended::scaled(const Rational& factor) const
{
    if (factor < 0)
        throw Error("negative scale factor " + to_string(factor));
    if (factor == 0)
        return Extended{ 0 };
    if (!is_finite())
        return *this;
    return Extended{ Rational(_value * factor) };
}

std::string to_string(const Extended& value)
{
    if (value.is_infinity())
        return "inf";
    if (value.is_negative_infinity())
        return "-inf";
    return to_string(value.value());
}

Extended parse_extended(std::string_view text)
{
    if (text == "inf" || text == "+inf" || text == "infinity")
        return Extended::infinity();
    if (text == "-inf")
        return Extended::negative_infinity();
    return Extended{ parse_rational(text) };
}

} // namespace omts
