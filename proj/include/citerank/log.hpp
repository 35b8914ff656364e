#pragma once

#include <functional>
#include <string>

namespace citerank {

/// Receives warnings emitted by the library. Defaults to "warning: <msg>" on stderr.
using WarningSink = std::function<void(const std::string &)>;

void set_warning_sink(WarningSink sink);
void warn(const std::string &message);

} // namespace citerank
