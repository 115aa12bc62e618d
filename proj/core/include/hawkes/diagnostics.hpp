#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace hawkes {

using WarningHandler = std::function<void(std::string_view)>;

// Non-fatal conditions (degenerate components, clamped marks, skipped blocks)
// are routed through a process-wide handler. The default writes to stderr.
void warn(std::string_view message);

// Returns the previous handler. Passing an empty function silences warnings.
WarningHandler set_warning_handler(WarningHandler handler);

// RAII capture of warnings, mostly for tests and for collecting run reports.
class ScopedWarningCapture {
 public:
  explicit ScopedWarningCapture(std::function<void(std::string_view)> sink);
  ~ScopedWarningCapture();

  ScopedWarningCapture(const ScopedWarningCapture&) = delete;
  ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

 private:
  WarningHandler previous_;
};

}  // namespace hawkes
