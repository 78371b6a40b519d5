#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "solvcap/diagnostics.hpp"
#include "solvcap/error.hpp"
#include "solvcap/lob.hpp"
#include "solvcap/parallel.hpp"

namespace solvcap {

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error(fmt::format("line {}: {}", line, message)), line_(line) {}

ValidationError::ValidationError(const std::string& message) : Error(message), details_{message} {}

ValidationError::ValidationError(const std::string& message, std::vector<std::string> details)
    : Error(message), details_(std::move(details)) {}

void Diagnostics::warn(std::string code, std::string message) {
    entries_.push_back({std::move(code), std::move(message)});
}

void Diagnostics::append(const Diagnostics& other) {
    entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

std::size_t Diagnostics::count(std::string_view code) const {
    return static_cast<std::size_t>(std::count_if(
        entries_.begin(), entries_.end(), [&](const Diagnostic& d) { return d.code == code; }));
}

std::string_view to_string(Lob lob) noexcept {
    switch (lob) {
        case Lob::IA: return "IA";
        case Lob::H: return "H";
        case Lob::BLP: return "BLP";
        case Lob::ML: return "ML";
        case Lob::MO: return "MO";
    }
    return "?";
}

std::optional<Lob> parse_lob(std::string_view text) noexcept {
    for (Lob lob : kAllLobs) {
        if (to_string(lob) == text) return lob;
    }
    return std::nullopt;
}

HorizonTable::HorizonTable() noexcept {
    for (Lob lob : kAllLobs) k_[index_of(lob)] = default_horizon(lob);
}

void HorizonTable::set(Lob lob, int k) {
    if (k < 2) throw ConfigError(fmt::format("horizon for {} must be at least 2, got {}", to_string(lob), k));
    k_[index_of(lob)] = k;
}

std::string SeriesKey::label() const { return fmt::format("{}/{}", company, to_string(lob)); }

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t state = seed ^ (0x5851f42d4c957f2dULL * (stream + 1));
    std::array<std::uint32_t, 8> words{};
    for (std::size_t i = 0; i < words.size(); i += 2) {
        const std::uint64_t v = splitmix64(state);
        words[i] = static_cast<std::uint32_t>(v);
        words[i + 1] = static_cast<std::uint32_t>(v >> 32);
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::size_t failure_index = count;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    // Keep the lowest failing index so the reported error is
                    // the one a serial run would raise.
                    std::lock_guard lock(failure_mutex);
                    if (i < failure_index) {
                        failure_index = i;
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace solvcap
