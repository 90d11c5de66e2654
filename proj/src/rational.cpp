#include "lieforge/rational.hpp"

#include <stdexcept>

namespace lieforge {

namespace {

bool is_integer_text(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

Integer parse_integer(std::string_view s) {
    if (!is_integer_text(s)) throw std::invalid_argument("not a rational: '" + std::string(s) + "'");
    if (s.front() == '+') s.remove_prefix(1);
    return Integer(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = 1;
    if (slash != std::string_view::npos) {
        auto d = text.substr(slash + 1);
        if (!d.empty() && (d.front() == '-' || d.front() == '+'))
            throw std::invalid_argument("sign in denominator: '" + std::string(text) + "'");
        den = parse_integer(d);
    }
    if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string format_rational(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

}  // namespace lieforge
