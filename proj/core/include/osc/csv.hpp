#pragma once

#include <string>

namespace osc {

/// 17 significant digits in general notation, so values round-trip exactly.
/// Non-finite values print as inf, -inf and nan.
std::string format_double(double value);

}  // namespace osc
