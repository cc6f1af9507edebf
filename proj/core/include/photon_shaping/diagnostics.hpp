#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace shaping {

using WarningHandler = std::function<void(std::string_view)>;

/// Emit a non-fatal warning through the installed handler (stderr by default).
void warn(std::string_view message);

/// Replace the warning handler; returns the previous one.
WarningHandler set_warning_handler(WarningHandler handler);

/// RAII capture of warnings, mostly for tests.
class WarningCapture {
public:
    WarningCapture();
    ~WarningCapture();
    WarningCapture(const WarningCapture&) = delete;
    WarningCapture& operator=(const WarningCapture&) = delete;

    const std::string& text() const { return text_; }
    int count() const { return count_; }
    bool contains(std::string_view needle) const;

private:
    WarningHandler previous_;
    std::string text_;
    int count_ = 0;
};

}  // namespace shaping
