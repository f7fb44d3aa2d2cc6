#pragma once

#include <string>

namespace she {

/// Fixed 17-significant-digit text for a double ("nan", "inf", "-inf" for
/// non-finite values). Output is independent of the global locale.
std::string fmt17(double value);

}  // namespace she
