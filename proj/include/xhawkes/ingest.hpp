#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xhawkes/core.hpp"
#include "xhawkes/rng.hpp"

namespace xhawkes {

/// Calendar date with a serial day number (days since 1970-01-01).
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;
    std::int64_t serial = 0;
};

namespace detail {

/// Days from civil (proleptic Gregorian), Howard Hinnant's algorithm.
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline bool valid_ymd(int y, int m, int d) {
    if (m < 1 || m > 12 || d < 1) return false;
    static constexpr int len[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int max_d = len[m - 1];
    if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) max_d = 29;
    return d <= max_d;
}

}  // namespace detail

/// Parses "YYYY-MM-DD" or "MM/DD/YYYY"; returns false on anything else.
inline bool parse_date(const std::string& text, Date& out) {
    int y = 0, m = 0, d = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%d-%d-%d%c", &y, &m, &d, &extra) == 3) {
        // ISO
    } else if (std::sscanf(text.c_str(), "%d/%d/%d%c", &m, &d, &y, &extra) == 3) {
        // US
    } else {
        return false;
    }
    if (!detail::valid_ymd(y, m, d)) return false;
    out = {y, m, d, detail::days_from_civil(y, m, d)};
    return true;
}

inline std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

struct AttackRecord {
    Date date;
    std::string cve_id;
    std::string attack_class;
    std::string country;
    std::string target_class;
};

struct VulnRecord {
    std::string cve_id;
    Date published;
    double cvss = 0.0;
};

/// Column names in the source export; empty means "column absent".
struct AttackColumns {
    std::string date = "Date";
    std::string cve;
    std::string attack_class;
    std::string country;
    std::string target_class;
};

struct VulnColumns {
    std::string cve = "cveID";
    std::string published = "published";
    std::string cvss = "cvss";
    bool assume_exploited = false;  ///< KEV-shaped file without a score column
};

struct LoadReport {
    std::size_t rows = 0;
    std::size_t skipped = 0;
    std::vector<std::string> messages;
};

namespace detail {

/// Minimal RFC-4180 row reader: quoted fields, embedded commas and quotes,
/// CRLF line ends. Returns false at end of stream.
inline bool read_csv_row(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    for (int ci = in.get(); ; ci = in.get()) {
        if (ci == EOF) {
            if (!any && field.empty() && fields.empty()) return false;
            fields.push_back(field);
            return true;
        }
        any = true;
        const char c = static_cast<char>(ci);
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            fields.push_back(field);
            return true;
        } else {
            field.push_back(c);
        }
    }
}

inline std::size_t require_column(const std::vector<std::string>& header, const std::string& name,
                                  const char* what) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw schema_error(std::string(what) + ": required column '" + name + "' not found");
}

inline std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                              const std::string& name) {
    if (name.empty()) return std::nullopt;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

inline std::string field_or_empty(const std::vector<std::string>& row,
                                  const std::optional<std::size_t>& idx) {
    return idx && *idx < row.size() ? row[*idx] : std::string{};
}

}  // namespace detail

/// Loads an attack CSV export; rows with unparseable dates are skipped and
/// counted in the report. Records come back sorted by date.
[[nodiscard]] inline std::vector<AttackRecord> load_attacks(const std::string& path,
                                                            const AttackColumns& cols = {},
                                                            LoadReport* report = nullptr) {
    std::ifstream in(path);
    if (!in) throw schema_error("load_attacks: cannot open " + path);
    std::vector<std::string> row;
    if (!detail::read_csv_row(in, row)) throw schema_error("load_attacks: empty file " + path);
    const std::size_t date_idx = detail::require_column(row, cols.date, "load_attacks");
    const auto cve_idx = detail::find_column(row, cols.cve);
    const auto class_idx = detail::find_column(row, cols.attack_class);
    const auto country_idx = detail::find_column(row, cols.country);
    const auto target_idx = detail::find_column(row, cols.target_class);

    std::vector<AttackRecord> records;
    LoadReport rep;
    while (detail::read_csv_row(in, row)) {
        if (row.size() == 1 && row[0].empty()) continue;  // blank line
        ++rep.rows;
        AttackRecord rec;
        if (date_idx >= row.size() || !parse_date(row[date_idx], rec.date)) {
            ++rep.skipped;
            rep.messages.push_back("row " + std::to_string(rep.rows) + ": unparseable date '" +
                                   (date_idx < row.size() ? row[date_idx] : "") + "'");
            continue;
        }
        rec.cve_id = detail::field_or_empty(row, cve_idx);
        rec.attack_class = detail::field_or_empty(row, class_idx);
        rec.country = detail::field_or_empty(row, country_idx);
        rec.target_class = detail::field_or_empty(row, target_idx);
        records.push_back(std::move(rec));
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const AttackRecord& a, const AttackRecord& b) {
                         return a.date.serial < b.date.serial;
                     });
    if (report) *report = std::move(rep);
    return records;
}

/// Loads a vulnerability CSV export, filtered to CVSS >= cvss_min (inclusive).
/// Scores outside [0, 10] reject the row with a report entry. A file without a
/// score column is accepted when assume_exploited is set (KEV shape).
[[nodiscard]] inline std::vector<VulnRecord> load_vulns(const std::string& path,
                                                        const VulnColumns& cols = {},
                                                        double cvss_min = 5.0,
                                                        LoadReport* report = nullptr) {
    std::ifstream in(path);
    if (!in) throw schema_error("load_vulns: cannot open " + path);
    std::vector<std::string> row;
    if (!detail::read_csv_row(in, row)) throw schema_error("load_vulns: empty file " + path);
    const std::size_t date_idx = detail::require_column(row, cols.published, "load_vulns");
    const auto cve_idx = detail::find_column(row, cols.cve);
    const auto score_idx = detail::find_column(row, cols.cvss);
    if (!score_idx && !cols.assume_exploited) {
        throw schema_error("load_vulns: score column '" + cols.cvss +
                           "' not found (set assume_exploited for KEV-shaped files)");
    }

    std::vector<VulnRecord> records;
    LoadReport rep;
    while (detail::read_csv_row(in, row)) {
        if (row.size() == 1 && row[0].empty()) continue;
        ++rep.rows;
        VulnRecord rec;
        if (date_idx >= row.size() || !parse_date(row[date_idx], rec.published)) {
            ++rep.skipped;
            rep.messages.push_back("row " + std::to_string(rep.rows) + ": unparseable date");
            continue;
        }
        if (score_idx) {
            char* end = nullptr;
            const std::string raw = detail::field_or_empty(row, score_idx);
            rec.cvss = std::strtod(raw.c_str(), &end);
            if (end == raw.c_str() || rec.cvss < 0.0 || rec.cvss > 10.0) {
                ++rep.skipped;
                rep.messages.push_back("row " + std::to_string(rep.rows) +
                                       ": CVSS score outside [0,10]: '" + raw + "'");
                continue;
            }
            if (rec.cvss < cvss_min) continue;
        }
        rec.cve_id = detail::field_or_empty(row, cve_idx);
        records.push_back(std::move(rec));
    }
    std::stable_sort(records.begin(), records.end(), [](const VulnRecord& a, const VulnRecord& b) {
        return a.published.serial < b.published.serial;
    });
    if (report) *report = std::move(rep);
    return records;
}

/// Builds the modeling stream from dated records. Day-resolution dates are
/// mapped to fractional day offsets from t0 with seeded uniform intra-day
/// jitter, which breaks same-day ties deterministically: the jitter never
/// changes the day an event falls on. The window end is the end of day `tau`.
[[nodiscard]] inline EventStream build_event_stream(const std::vector<AttackRecord>& attacks,
                                                    const std::vector<VulnRecord>& vulns,
                                                    const Date& t0, const Date& s, const Date& tau,
                                                    std::uint64_t jitter_seed,
                                                    std::size_t* dropped = nullptr) {
    if (!(t0.serial <= s.serial && s.serial <= tau.serial)) {
        throw std::domain_error("build_event_stream: require t0 <= s <= tau");
    }
    EventStream ev;
    ev.t0 = 0.0;
    ev.s = static_cast<double>(s.serial - t0.serial);
    ev.tau = static_cast<double>(tau.serial - t0.serial) + 1.0;

    Philox4x64 rng(jitter_seed, 0);
    std::size_t outside = 0;
    auto place = [&](std::int64_t serial, std::vector<double>& out) {
        const double u = rng.uniform01();  // one draw per record, in record order
        if (serial < t0.serial || serial > tau.serial) {
            ++outside;
            return;
        }
        out.push_back(static_cast<double>(serial - t0.serial) + u);
    };
    for (const auto& a : attacks) place(a.date.serial, ev.internal_times);
    for (const auto& v : vulns) place(v.published.serial, ev.external_times);

    auto finalize = [](std::vector<double>& ts) {
        std::sort(ts.begin(), ts.end());
        for (std::size_t i = 1; i < ts.size(); ++i) {
            if (ts[i] <= ts[i - 1]) ts[i] = std::nextafter(ts[i - 1], 1e300);
        }
    };
    finalize(ev.internal_times);
    finalize(ev.external_times);
    if (dropped) *dropped = outside;
    ev.validate();
    return ev;
}

/// Pearson correlation between consecutive-month attack counts (zero-count
/// months inside the observed span included).
[[nodiscard]] inline double monthly_autocorrelation(const std::vector<AttackRecord>& attacks) {
    std::map<std::pair<int, int>, double> by_month;
    for (const auto& a : attacks) {
        by_month[{a.date.year, a.date.month}] += 1.0;
    }
    if (by_month.size() < 3) {
        throw std::domain_error("monthly_autocorrelation: need at least 3 months of data");
    }
    std::vector<double> counts;
    auto first = by_month.begin()->first;
    auto last = by_month.rbegin()->first;
    for (int y = first.first, m = first.second;
         y < last.first || (y == last.first && m <= last.second);) {
        auto it = by_month.find({y, m});
        counts.push_back(it == by_month.end() ? 0.0 : it->second);
        if (++m > 12) {
            m = 1;
            ++y;
        }
    }
    const std::size_t n = counts.size() - 1;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += counts[i];
        my += counts[i + 1];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (counts[i] - mx) * (counts[i + 1] - my);
        sxx += (counts[i] - mx) * (counts[i] - mx);
        syy += (counts[i + 1] - my) * (counts[i + 1] - my);
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw std::domain_error("monthly_autocorrelation: zero variance in monthly counts");
    }
    return sxy / std::sqrt(sxx * syy);
}

/// Per-year internal event counts (period summary).
[[nodiscard]] inline std::map<int, std::size_t> yearly_counts(
    const std::vector<AttackRecord>& attacks) {
    std::map<int, std::size_t> out;
    for (const auto& a : attacks) ++out[a.date.year];
    return out;
}

}  // namespace xhawkes
