#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace solvcap {

struct Diagnostic {
    std::string code;
    std::string message;
};

// Collects non-fatal warnings emitted while computing. Operations accept a
// nullable pointer; passing nullptr discards warnings.
class Diagnostics {
public:
    void warn(std::string code, std::string message);
    void append(const Diagnostics& other);

    const std::vector<Diagnostic>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t count(std::string_view code) const;

private:
    std::vector<Diagnostic> entries_;
};

inline void warn(Diagnostics* sink, std::string code, std::string message) {
    if (sink != nullptr) sink->warn(std::move(code), std::move(message));
}

}  // namespace solvcap
