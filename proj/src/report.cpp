#include "solvcap/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <tuple>

#include <fmt/format.h>

#include "solvcap/error.hpp"

namespace solvcap {

namespace {

std::string group_label(const std::string& company, Lob lob, int year) {
    return fmt::format("({}, {}, {})", company, to_string(lob), year);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            return fields;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
    T value{};
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

enum class RecordType { premium, cum_paid, ultimo };

std::optional<RecordType> parse_record_type(std::string_view text) {
    if (text == "premium") return RecordType::premium;
    if (text == "cum_paid") return RecordType::cum_paid;
    if (text == "ultimo") return RecordType::ultimo;
    return std::nullopt;
}

std::string_view to_string(RecordType type) {
    switch (type) {
        case RecordType::premium: return "premium";
        case RecordType::cum_paid: return "cum_paid";
        case RecordType::ultimo: return "ultimo";
    }
    return "?";
}

struct Row {
    std::size_t line;
    RecordType type;
    int accident_year;
    double value;
};

using GroupKey = std::tuple<std::string, Lob, int>;

double lookup(const std::map<int, double>& values, int year, const ReportSnapshot& s,
              std::string_view what) {
    const auto it = values.find(year);
    if (it == values.end()) {
        throw ValidationError(fmt::format("{}: missing {} for accident year {}",
                                          group_label(s.company, s.lob, s.report_year), what, year));
    }
    return it->second;
}

}  // namespace

double ReportSnapshot::premium(int accident_year) const {
    return lookup(premiums, accident_year, *this, "premium");
}

double ReportSnapshot::paid(int accident_year) const {
    return lookup(cum_paid, accident_year, *this, "cum_paid");
}

double ReportSnapshot::ultimo_prediction(int accident_year) const {
    return lookup(ultimo, accident_year, *this, "ultimo");
}

void validate_snapshot(const ReportSnapshot& s, Diagnostics* diagnostics) {
    const std::string label = group_label(s.company, s.lob, s.report_year);
    if (s.company.empty()) throw ValidationError(label + ": empty company identifier");
    if (s.horizon_k < 2) throw ValidationError(fmt::format("{}: horizon {} below 2", label, s.horizon_k));

    const int first = s.first_accident_year();
    for (int year = first; year <= s.report_year; ++year) {
        if (!s.cum_paid.contains(year)) {
            throw ValidationError(fmt::format("{}: missing cum_paid for accident year {}", label, year));
        }
        if (!s.ultimo.contains(year)) {
            throw ValidationError(fmt::format("{}: missing ultimo for accident year {}", label, year));
        }
    }
    for (const auto* values : {&s.cum_paid, &s.ultimo}) {
        for (const auto& [year, value] : *values) {
            if (year < first || year > s.report_year) {
                throw ValidationError(fmt::format("{}: accident year {} outside horizon {}..{}", label,
                                                  year, first, s.report_year));
            }
            if (!std::isfinite(value)) {
                throw ValidationError(fmt::format("{}: non-finite value for accident year {}", label, year));
            }
        }
    }
    for (int year = s.report_year - 2; year <= s.report_year; ++year) {
        if (!s.premiums.contains(year)) {
            throw ValidationError(fmt::format("{}: missing premium for accident year {}", label, year));
        }
    }
    for (const auto& [year, value] : s.premiums) {
        if (year > s.report_year + 1) {
            throw ValidationError(fmt::format("{}: premium for accident year {} beyond {}", label, year,
                                              s.report_year + 1));
        }
        if (!(value > 0) || !std::isfinite(value)) {
            throw ValidationError(fmt::format("{}: premium for accident year {} must be positive, got {}",
                                              label, year, value));
        }
    }
    for (const auto& [year, ultimo] : s.ultimo) {
        const double paid = s.cum_paid.at(year);
        if (ultimo < paid) {
            warn(diagnostics, "negative_outstanding",
                 fmt::format("{}: ultimo {} below cumulative paid {} for accident year {}", label, ultimo,
                             paid, year));
        }
    }
}

ParseResult parse_report_csv(std::istream& in, const ReportSchema& schema) {
    ParseResult result;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::map<GroupKey, std::vector<Row>> groups;

    auto reject = [&](std::size_t at, RejectionKind kind, std::string reason) {
        result.rejections.push_back({at, kind, std::move(reason)});
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        view = trim(view);
        if (view.empty()) continue;
        if (!header_seen) {
            if (view != kReportCsvHeader) {
                throw ParseError(line_no, fmt::format("expected header '{}'", kReportCsvHeader));
            }
            header_seen = true;
            continue;
        }
        ++result.data_rows;
        const auto fields = split(view, ',');
        if (fields.size() != 6) {
            reject(line_no, RejectionKind::parse, fmt::format("expected 6 columns, found {}", fields.size()));
            continue;
        }
        const auto lob = parse_lob(fields[1]);
        const auto report_year = parse_number<int>(fields[2]);
        const auto type = parse_record_type(fields[3]);
        const auto accident_year = parse_number<int>(fields[4]);
        const auto value = parse_number<double>(fields[5]);
        if (fields[0].empty()) {
            reject(line_no, RejectionKind::parse, "empty company");
        } else if (!lob) {
            reject(line_no, RejectionKind::parse, fmt::format("unknown lob '{}'", fields[1]));
        } else if (!report_year) {
            reject(line_no, RejectionKind::parse, fmt::format("bad report_year '{}'", fields[2]));
        } else if (!type) {
            reject(line_no, RejectionKind::parse, fmt::format("unknown record_type '{}'", fields[3]));
        } else if (!accident_year) {
            reject(line_no, RejectionKind::parse, fmt::format("bad accident_year '{}'", fields[4]));
        } else if (!value || !std::isfinite(*value)) {
            reject(line_no, RejectionKind::parse, fmt::format("bad value '{}'", fields[5]));
        } else {
            groups[{std::string(fields[0]), *lob, *report_year}].push_back(
                {line_no, *type, *accident_year, *value});
        }
    }
    if (!header_seen) throw ParseError(line_no == 0 ? 1 : line_no, "missing header row");

    for (auto& [key, rows] : groups) {
        const auto& [company, lob, year] = key;
        const std::string label = group_label(company, lob, year);
        auto reject_group = [&](const std::string& reason) {
            for (const Row& row : rows) reject(row.line, RejectionKind::validation, reason);
        };

        ReportSnapshot snapshot;
        snapshot.company = company;
        snapshot.lob = lob;
        snapshot.horizon_k = schema.horizons[lob];
        snapshot.report_year = year;

        std::map<std::pair<RecordType, int>, std::size_t> seen;
        std::optional<std::string> duplicate;
        for (const Row& row : rows) {
            const auto [it, inserted] = seen.emplace(std::pair{row.type, row.accident_year}, row.line);
            if (!inserted) {
                duplicate = fmt::format("{}: duplicate {} for accident year {} (lines {} and {})", label,
                                        to_string(row.type), row.accident_year, it->second, row.line);
                break;
            }
            auto& target = row.type == RecordType::premium ? snapshot.premiums
                           : row.type == RecordType::cum_paid ? snapshot.cum_paid
                                                              : snapshot.ultimo;
            target[row.accident_year] = row.value;
        }
        if (duplicate) {
            reject_group(*duplicate);
            continue;
        }
        Diagnostics local;
        try {
            validate_snapshot(snapshot, &local);
        } catch (const ValidationError& e) {
            reject_group(e.what());
            continue;
        }
        result.diagnostics.append(local);
        result.accepted_rows += rows.size();
        result.snapshots.push_back(std::move(snapshot));
    }
    std::sort(result.rejections.begin(), result.rejections.end(),
              [](const Rejection& a, const Rejection& b) { return a.line < b.line; });
    return result;
}

ParseResult parse_report_file(const std::filesystem::path& path, const ReportSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(fmt::format("cannot open report file '{}'", path.string()));
    try {
        return parse_report_csv(in, schema);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::vector<ReportSnapshot> load_reports(const std::filesystem::path& path, const ReportSchema& schema,
                                         Diagnostics* diagnostics) {
    ParseResult parsed = parse_report_file(path, schema);
    if (!parsed.rejections.empty()) {
        const Rejection& first = parsed.rejections.front();
        if (first.kind == RejectionKind::parse) throw ParseError(first.line, first.reason);
        std::vector<std::string> details;
        for (const auto& r : parsed.rejections) details.push_back(fmt::format("line {}: {}", r.line, r.reason));
        throw ValidationError(fmt::format("{}: {}", path.string(), first.reason), std::move(details));
    }
    if (diagnostics != nullptr) diagnostics->append(parsed.diagnostics);
    return std::move(parsed.snapshots);
}

void write_report_csv(std::ostream& out, std::span<const ReportSnapshot> snapshots) {
    std::vector<const ReportSnapshot*> ordered;
    ordered.reserve(snapshots.size());
    for (const auto& s : snapshots) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(), [](const ReportSnapshot* a, const ReportSnapshot* b) {
        return std::tie(a->company, a->lob, a->report_year) < std::tie(b->company, b->lob, b->report_year);
    });
    out << kReportCsvHeader << '\n';
    for (const ReportSnapshot* s : ordered) {
        auto emit = [&](std::string_view type, const std::map<int, double>& values) {
            for (const auto& [year, value] : values) {
                out << fmt::format("{},{},{},{},{},{}\n", s->company, to_string(s->lob), s->report_year, type,
                                   year, value);
            }
        };
        emit("premium", s->premiums);
        emit("cum_paid", s->cum_paid);
        emit("ultimo", s->ultimo);
    }
}

PairedSnapshots::PairedSnapshots(ReportSnapshot opening, ReportSnapshot closing, double next_premium,
                                 bool fallback)
    : opening_(std::move(opening)),
      closing_(std::move(closing)),
      next_premium_(next_premium),
      next_premium_from_closing_(fallback) {}

PairedSnapshots validate_pair(const ReportSnapshot& s0, const ReportSnapshot& s1, Diagnostics* diagnostics) {
    if (s0.company != s1.company || s0.lob != s1.lob) {
        throw ValidationError(fmt::format("pairing: series {} cannot pair with {}", s0.series().label(),
                                          s1.series().label()));
    }
    if (s1.report_year != s0.report_year + 1) {
        throw ValidationError(fmt::format("pairing: {} reports {} and {} are not consecutive",
                                          s0.series().label(), s0.report_year, s1.report_year));
    }
    if (s0.horizon_k != s1.horizon_k) {
        throw ValidationError(fmt::format("pairing: {} horizon changed from {} to {}", s0.series().label(),
                                          s0.horizon_k, s1.horizon_k));
    }
    const int n = s0.report_year;
    const int k = s0.horizon_k;
    for (int year = n - k + 2; year <= n; ++year) {
        (void)s0.paid(year);
        (void)s0.ultimo_prediction(year);
    }
    for (int year = n - k + 2; year <= n + 1; ++year) (void)s1.ultimo_prediction(year);

    double next_premium = 0;
    bool fallback = false;
    if (auto it = s0.premiums.find(n + 1); it != s0.premiums.end()) {
        next_premium = it->second;
    } else if (auto later = s1.premiums.find(n + 1); later != s1.premiums.end()) {
        next_premium = later->second;
        fallback = true;
        warn(diagnostics, "next_premium_fallback",
             fmt::format("{}: premium for {} read from the {} report", group_label(s0.company, s0.lob, n), n + 1,
                         n + 1));
    } else {
        throw ValidationError(fmt::format("{}: missing premium for accident year {}",
                                          group_label(s0.company, s0.lob, n), n + 1));
    }
    for (const auto& [year, value] : s0.premiums) {
        const auto it = s1.premiums.find(year);
        if (it != s1.premiums.end() && it->second != value) {
            warn(diagnostics, "premium_restated",
                 fmt::format("{}: premium for accident year {} restated from {} to {}", s0.series().label(), year,
                             value, it->second));
        }
    }
    return PairedSnapshots(s0, s1, next_premium, fallback);
}

bool DataQualityPolicy::excludes(const SeriesKey& series, int accounting_year, int first_report_year) const {
    if (excluded_series.contains(series)) return true;
    if (accounting_year <= first_report_year + drop_first_accounting_years) return true;
    const auto it = excluded_accounting_years.find(series);
    return it != excluded_accounting_years.end() && it->second.contains(accounting_year);
}

void check_policy_references(const DataQualityPolicy& policy, std::span<const ReportSnapshot> snapshots) {
    std::set<SeriesKey> present;
    for (const auto& s : snapshots) present.insert(s.series());
    std::vector<std::string> missing;
    for (const auto& key : policy.excluded_series) {
        if (!present.contains(key)) missing.push_back(fmt::format("excluded series {} not in data", key.label()));
    }
    for (const auto& [key, years] : policy.excluded_accounting_years) {
        if (!present.contains(key)) {
            missing.push_back(fmt::format("excluded accounting years reference {} which is not in data", key.label()));
        }
    }
    if (policy.drop_first_accounting_years < 0) missing.push_back("drop_first_accounting_years is negative");
    if (!missing.empty()) {
        const std::string first = missing.front();
        throw ValidationError(first, std::move(missing));
    }
}

}  // namespace solvcap
