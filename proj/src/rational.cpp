#include "dofkit/rational.hpp"

#include "dofkit/error.hpp"

namespace dofkit {

std::string to_string(const Rational& q)
{
    Rational c = q;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(std::string_view text)
{
    Rational q;
    if (text.empty() || q.set_str(std::string(text), 10) != 0 || q.get_den() == 0) {
        throw InvalidParameter("not a rational: '" + std::string(text) + "'");
    }
    q.canonicalize();
    return q;
}

double to_double(const Rational& q)
{
    return q.get_d();
}

} // namespace dofkit
