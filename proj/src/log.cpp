#include "citerank/log.hpp"

#include <iostream>
#include <mutex>

namespace citerank {

namespace {
std::mutex sink_mutex;
WarningSink &sink() {
    static WarningSink s = [](const std::string &msg) { std::cerr << "warning: " << msg << '\n'; };
    return s;
}
} // namespace

void set_warning_sink(WarningSink s) {
    std::lock_guard lock(sink_mutex);
    sink() = s ? std::move(s) : [](const std::string &) {};
}

void warn(const std::string &message) {
    std::lock_guard lock(sink_mutex);
    sink()(message);
}

} // namespace citerank
