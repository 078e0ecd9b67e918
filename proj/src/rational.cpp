#include "omts/rational.hpp"

#include <algorithm>
#include <cctype>

namespace omts
{

namespace
{

bool is_integer_text(std::string_view s)
{
    if (s.empty())
        return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size())
        return false;
    return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

mpz_class parse_integer(std::string_view s, std::string_view whole)
{
    if (!is_integer_text(s))
        throw Error("malformed rational: '" + std::string(whole) + "'");
    std::string digits(s[0] == '+' ? s.substr(1) : s);
    return mpz_class(digits, 10);
}

} // namespace

Rational parse_rational(std::string_view text)
{
    auto first = text.find_first_not_of(" \t");
    auto last = text.find_last_not_of(" \t");
    if (first == std::string_view::npos)
        throw Error("malformed rational: empty string");
    std::string_view s = text.substr(first, last - first + 1);

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        mpz_class num = parse_integer(s.substr(0, slash), text);
        std::string_view den_text = s.substr(slash + 1);
        if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+'))
            throw Error("malformed rational: '" + std::string(text) + "'");
        mpz_class den = parse_integer(den_text, text);
        if (den == 0)
            throw Error("rational with zero denominator: '" + std::string(text) + "'");
        Rational r(num, den);
        r.canonicalize();
        return r;
    }

    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = s.substr(0, dot);
        std::string_view frac_part = s.substr(dot + 1);
        bool negative = !int_part.empty() && int_part[0] == '-';
        if (!int_part.empty() && (int_part[0] == '-' || int_part[0] == '+'))
            int_part.remove_prefix(1);
        if (int_part.empty() && frac_part.empty())
            throw Error("malformed rational: '" + std::string(text) + "'");
        if ((!int_part.empty() && !is_integer_text(int_part)) ||
            (!frac_part.empty() && !is_integer_text(frac_part)) ||
            (!frac_part.empty() && (frac_part[0] == '-' || frac_part[0] == '+')))
            throw Error("malformed rational: '" + std::string(text) + "'");
        mpz_class whole = int_part.empty() ? mpz_class(0) : mpz_class(std::string(int_part), 10);
        mpz_class frac = frac_part.empty() ? mpz_class(0) : mpz_class(std::string(frac_part), 10);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
        Rational r(whole * scale + frac, scale);
        r.canonicalize();
        return negative ? Rational(-r) : r;
    }

    Rational r(parse_integer(s, text));
    return r;
}

std::string to_string(const Rational& value)
{
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_decimal(const Rational& value, int digits)
{
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    mpz_class scaled = value.get_num() * scale;
    mpz_class q;
    mpz_tdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), value.get_den().get_mpz_t());
    bool negative = q < 0 || (q == 0 && value < 0);
    mpz_class mag = q < 0 ? mpz_class(-q) : q;
    std::string s = mag.get_str();
    if (digits > 0) {
        if (s.size() <= static_cast<std::size_t>(digits))
            s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
        s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    }
    return negative ? "-" + s : s;
}

Rational ratio(long num, long den)
{
    if (den == 0)
        throw Error("zero denominator");
    Rational r{ mpz_class(num), mpz_class(den) };
    r.canonicalize();
    return r;
}

Rational abs(const Rational& value)
{
    return value < 0 ? Rational(-value) : value;
}

Rational floor(const Rational& value)
{
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), value.get_num().get_mpz_t(), value.get_den().get_mpz_t());
    return Rational(q);
}

} // namespace omts
