#pragma once

#include <functional>
#include <string_view>

namespace sceig {

using WarningSink = std::function<void(std::string_view)>;

/// Routes warnings to `sink`; an empty sink restores the default (stderr).
void set_warning_sink(WarningSink sink);
void log_warning(std::string_view message);

}  // namespace sceig
