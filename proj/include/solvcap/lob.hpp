#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace solvcap {

// Swedish reporting lines of business.
enum class Lob { IA, H, BLP, ML, MO };

inline constexpr std::array<Lob, 5> kAllLobs{Lob::IA, Lob::H, Lob::BLP, Lob::ML, Lob::MO};
inline constexpr std::size_t kLobCount = kAllLobs.size();

constexpr std::size_t index_of(Lob lob) noexcept { return static_cast<std::size_t>(lob); }

std::string_view to_string(Lob lob) noexcept;
std::optional<Lob> parse_lob(std::string_view text) noexcept;

// Number of accident years k carried in one report: 3 for H and MO,
// 10 for IA and BLP, 15 for ML.
constexpr int default_horizon(Lob lob) noexcept {
    switch (lob) {
        case Lob::H:
        case Lob::MO: return 3;
        case Lob::IA:
        case Lob::BLP: return 10;
        case Lob::ML: return 15;
    }
    return 0;
}

class HorizonTable {
public:
    HorizonTable() noexcept;
    int operator[](Lob lob) const noexcept { return k_[index_of(lob)]; }
    // Throws ConfigError unless k >= 2 (one report must overlap the next).
    void set(Lob lob, int k);

private:
    std::array<int, kLobCount> k_{};
};

// Identifies one company/LoB time series.
struct SeriesKey {
    std::string company;
    Lob lob = Lob::IA;

    auto operator<=>(const SeriesKey&) const = default;
    std::string label() const;
};

}  // namespace solvcap
