#pragma once

#include <functional>
#include <string>

namespace tilesync {

// Receives one formatted record per traced event. Null = tracing off.
using TraceFn = std::function<void(const std::string&)>;

}  // namespace tilesync
