#include "photon_shaping/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace shaping {
namespace {

std::mutex& handler_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& handler() {
    static WarningHandler h = [](std::string_view msg) {
        std::cerr << "warning: " << msg << '\n';
    };
    return h;
}

}  // namespace

void warn(std::string_view message) {
    std::lock_guard lock(handler_mutex());
    if (handler()) handler()(message);
}

WarningHandler set_warning_handler(WarningHandler h) {
    std::lock_guard lock(handler_mutex());
    WarningHandler previous = std::move(handler());
    handler() = std::move(h);
    return previous;
}

WarningCapture::WarningCapture() {
    previous_ = set_warning_handler([this](std::string_view msg) {
        text_.append(msg);
        text_.push_back('\n');
        ++count_;
    });
}

WarningCapture::~WarningCapture() { set_warning_handler(std::move(previous_)); }

bool WarningCapture::contains(std::string_view needle) const {
    return text_.find(needle) != std::string::npos;
}

}  // namespace shaping
