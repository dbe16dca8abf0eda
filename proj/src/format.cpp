#include "pharmonic/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "pharmonic/error.hpp"

namespace pharm {

std::string fmt_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

std::string fmt_real(const ExtendedReal& x) { return x.is_infinite() ? "inf" : fmt_real(x.value()); }

double ExtendedReal::value() const {
    if (infinite_) fail(ErrorCode::Domain, "value() on an infinite ExtendedReal");
    return value_;
}

std::string ExtendedReal::to_string() const { return fmt_real(*this); }

} // namespace pharm
