#pragma once

#include <string>

#include "pharmonic/extended_real.hpp"

namespace pharm {

/// Shortest decimal string that round-trips to the same double; "inf"/"-inf"/"nan" otherwise.
std::string fmt_real(double x);
std::string fmt_real(const ExtendedReal& x);

} // namespace pharm
