#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <vector>

#include <openssl/evp.h>

// Eigen before httplib: <resolv.h>, pulled in by httplib, defines a `_res`
// macro that collides with Eigen parameter names.
#include "asymcause/errors.hpp"
#include "asymcause/linalg.hpp"
#include "asymcause/time_series.hpp"

#include <httplib.h>
#include <json.hpp>

namespace asymcause {

enum class SourceKind { local_csv, fred_remote };

struct SeriesSource {
    SourceKind kind = SourceKind::local_csv;
    std::string identifier;    ///< file path, or FRED series code such as GDPC1
    std::string label;         ///< series id in reports; defaults to identifier
    std::string date_column;   ///< empty: first column
    std::string value_column;  ///< empty: the FRED code for remote sources, else the second column
    Frequency frequency = Frequency::quarterly;

    std::string display_label() const { return label.empty() ? identifier : label; }
};

struct StudyWindow {
    Period start = Period::quarter(1960, 1);
    Period end = Period::quarter(2020, 1);

    void validate() const {
        if (start.frequency != end.frequency) throw ConfigError("window endpoints use different period kinds");
        if (!(start < end)) throw ConfigError("window start must precede its end");
    }

    std::size_t periods() const { return static_cast<std::size_t>(end.ordinal - start.ordinal + 1); }

    /// "1960Q1:2020Q1" (either side may also be YYYY-MM-DD or an integer index).
    static StudyWindow parse(std::string_view text) {
        const auto colon = text.find(':');
        if (colon == std::string_view::npos) throw ConfigError("window must look like START:END, got '" + std::string(text) + "'");
        StudyWindow w;
        try {
            w.start = Period::parse(text.substr(0, colon));
            w.end = Period::parse(text.substr(colon + 1));
        } catch (const DateParseError& e) {
            throw ConfigError(std::string("bad window: ") + e.what());
        }
        w.validate();
        return w;
    }

    std::string to_string() const { return start.to_string() + ":" + end.to_string(); }
};

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline std::string join(const std::vector<std::string_view>& parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += ',';
        s += parts[i];
    }
    return s;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes to a sibling temporary file and renames it over the target.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    auto tmp = path;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw DataError("short write to '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace detail

/// Lower-case hex SHA-256 of the bytes.
inline std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw DataError("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

/// Parses CSV text with a header row. Rows are sorted by date; duplicates,
/// gaps, unparseable dates and FRED's "." missing marker are rejected.
inline TimeSeries parse_csv(std::string_view text, const SeriesSource& source) {
    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos < text.size();) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = detail::trim(text.substr(pos, nl - pos));
        if (!line.empty()) lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    if (lines.empty()) throw ParseError("'" + source.identifier + "': empty CSV");
    if (lines[0].starts_with("\xEF\xBB\xBF")) lines[0].remove_prefix(3);

    const auto header = detail::split_csv_line(lines[0]);
    auto find_column = [&](const std::string& name, std::size_t fallback) -> std::size_t {
        if (name.empty()) {
            if (fallback >= header.size())
                throw MissingColumnError("'" + source.identifier + "': unexpected header '" + detail::join(header) + "'");
            return fallback;
        }
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw MissingColumnError("'" + source.identifier + "': column '" + name + "' not found in unexpected header '" +
                                 detail::join(header) + "'");
    };
    const std::size_t date_col = find_column(source.date_column, 0);
    std::string value_name = source.value_column;
    if (value_name.empty() && source.kind == SourceKind::fred_remote) value_name = source.identifier;
    const std::size_t value_col = find_column(value_name, 1);

    std::vector<std::pair<Period, double>> rows;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = detail::split_csv_line(lines[r]);
        const std::size_t line_no = r + 1;
        if (cells.size() <= std::max(date_col, value_col))
            throw ParseError("'" + source.identifier + "' line " + std::to_string(line_no) + ": too few fields");
        Period period;
        try {
            period = Period::parse(cells[date_col]);
        } catch (const DateParseError& e) {
            throw DateParseError("'" + source.identifier + "' line " + std::to_string(line_no) + ": " + e.what());
        }
        if (period.frequency != source.frequency)
            throw DateParseError("'" + source.identifier + "' line " + std::to_string(line_no) + ": period '" +
                                 std::string(cells[date_col]) + "' does not match the declared frequency");
        const auto cell = cells[value_col];
        if (cell == "." || cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan")
            throw MissingValueError("'" + source.identifier + "' line " + std::to_string(line_no) + " (" +
                                        period.to_string() + "): missing value '" + std::string(cell) + "'",
                                    line_no);
        double value = 0.0;
        const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc{} || end != cell.data() + cell.size())
            throw ParseError("'" + source.identifier + "' line " + std::to_string(line_no) + ": bad number '" +
                             std::string(cell) + "'");
        if (!std::isfinite(value))
            throw MissingValueError("'" + source.identifier + "' line " + std::to_string(line_no) + ": non-finite value",
                                    line_no);
        rows.emplace_back(period, value);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<Period> dates;
    std::vector<double> values;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0) {
            if (rows[i].first == rows[i - 1].first)
                throw DuplicateDateError("'" + source.identifier + "': duplicate period " + rows[i].first.to_string());
            if (rows[i].first != rows[i - 1].first.next()) {
                const auto missing = rows[i - 1].first.next().to_string();
                throw GapError("'" + source.identifier + "': missing period " + missing, missing);
            }
        }
        dates.push_back(rows[i].first);
        values.push_back(rows[i].second);
    }
    return TimeSeries(source.display_label(), std::move(dates), std::move(values));
}

inline TimeSeries load_csv(const SeriesSource& source) {
    if (source.identifier.empty()) throw ConfigError("series source has no identifier");
    if (!std::filesystem::exists(source.identifier)) throw DataError("file not found: '" + source.identifier + "'");
    return parse_csv(detail::read_file(source.identifier), source);
}

// ---------------------------------------------------------------------------
// FRED CSV endpoint with an on-disk cache
// ---------------------------------------------------------------------------

inline constexpr const char* cache_dir_env = "ASYMCAUSE_CACHE_DIR";
inline constexpr const char* default_fred_base_url = "https://fred.stlouisfed.org";

/// $ASYMCAUSE_CACHE_DIR, else ~/.cache/asymcause, else ./.asymcause-cache.
inline std::filesystem::path default_cache_dir() {
    if (const char* env = std::getenv(cache_dir_env); env && *env) return env;
    if (const char* home = std::getenv("HOME"); home && *home) return std::filesystem::path(home) / ".cache" / "asymcause";
    return ".asymcause-cache";
}

struct FetchOptions {
    std::string base_url = default_fred_base_url;
    std::filesystem::path cache_dir = default_cache_dir();
    bool refresh = false;
    int timeout_seconds = 30;
};

/// Cached raw bytes plus metadata. Layout: <dir>/<code>.csv and <dir>/<code>.meta.json.
struct CacheEntry {
    std::filesystem::path raw_path;
    std::filesystem::path meta_path;

    static CacheEntry for_code(const std::filesystem::path& dir, const std::string& code) {
        return {dir / (code + ".csv"), dir / (code + ".meta.json")};
    }
    bool exists() const { return std::filesystem::exists(raw_path); }
};

struct FetchResult {
    TimeSeries series;
    std::string sha256;
    std::string retrieved_at;
    std::string url;
    bool from_cache = false;
};

inline std::string fred_csv_url(const std::string& base_url, const std::string& code) {
    return base_url + "/graph/fredgraph.csv?id=" + code;
}

inline std::string utc_timestamp_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace detail {

struct HttpResponse {
    int status = -1;
    std::string body;
    std::string error;
};

inline HttpResponse http_get(const std::string& url, int timeout_seconds) {
    // scheme://host[:port] and the path after it
    const auto scheme_end = url.find("://");
    const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    HttpResponse out;
    try {
        httplib::Client client(origin);
        client.set_connection_timeout(timeout_seconds, 0);
        client.set_read_timeout(timeout_seconds, 0);
        client.set_follow_location(true);
        auto res = client.Get(path);
        if (!res) {
            out.error = httplib::to_string(res.error());
            return out;
        }
        out.status = res->status;
        out.body = res->body;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace detail

inline SeriesSource fred_source(const std::string& code, const std::string& label = {}) {
    SeriesSource s;
    s.kind = SourceKind::fred_remote;
    s.identifier = code;
    s.label = label;
    return s;
}

/// Reads a cached series without touching the network.
inline FetchResult load_cached(const SeriesSource& source, const std::filesystem::path& cache_dir) {
    const auto entry = CacheEntry::for_code(cache_dir, source.identifier);
    if (!entry.exists()) throw FetchError("no cached copy of '" + source.identifier + "' in " + cache_dir.string(), -1);
    const std::string bytes = detail::read_file(entry.raw_path);
    std::string retrieved_at, url;
    if (std::filesystem::exists(entry.meta_path)) {
        try {
            const auto meta = nlohmann::json::parse(detail::read_file(entry.meta_path));
            retrieved_at = meta.value("retrieved_at", "");
            url = meta.value("url", "");
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("corrupt cache metadata '" + entry.meta_path.string() + "': " + e.what());
        }
    }
    return {parse_csv(bytes, source), sha256_hex(bytes), retrieved_at, url, true};
}

/// Downloads a FRED series CSV (or reuses the cache), returning the full
/// history. The cache is used whenever it exists unless `refresh` is set; a
/// failed refresh falls back to the cache.
inline FetchResult fetch_fred(const SeriesSource& source, const FetchOptions& options) {
    if (source.identifier.empty()) throw ConfigError("FRED series code is empty");
    const auto entry = CacheEntry::for_code(options.cache_dir, source.identifier);
    if (entry.exists() && !options.refresh) return load_cached(source, options.cache_dir);

    const std::string url = fred_csv_url(options.base_url, source.identifier);
    const auto response = detail::http_get(url, options.timeout_seconds);
    if (response.status != 200) {
        if (entry.exists()) return load_cached(source, options.cache_dir);
        const std::string why = response.status < 0 ? response.error : "HTTP " + std::to_string(response.status);
        throw FetchError("fetching '" + source.identifier + "' from " + url + " failed: " + why, response.status);
    }

    FetchResult out{parse_csv(response.body, source), sha256_hex(response.body), utc_timestamp_now(), url, false};
    const nlohmann::json meta = {
        {"code", source.identifier}, {"url", url}, {"retrieved_at", out.retrieved_at}, {"sha256", out.sha256}};
    detail::write_file_atomic(entry.raw_path, response.body);
    detail::write_file_atomic(entry.meta_path, meta.dump(2) + "\n");
    return out;
}

/// fetch_fred clipped to the window.
inline FetchResult fetch_fred(const SeriesSource& source, const StudyWindow& window, const FetchOptions& options) {
    auto out = fetch_fred(source, options);
    out.series = out.series.clipped(window.start, window.end);
    return out;
}

// ---------------------------------------------------------------------------
// Alignment
// ---------------------------------------------------------------------------

struct AlignedData {
    std::vector<std::string> ids;
    std::vector<Period> dates;
    Matrix values;  ///< one row per series, one column per period
};

/// Inner join on the window's periods; every series must cover every period.
inline AlignedData align(const std::vector<TimeSeries>& series, const StudyWindow& window) {
    window.validate();
    if (series.empty()) throw ConfigError("nothing to align");
    AlignedData out;
    for (Period p = window.start; p <= window.end; p = p.next()) out.dates.push_back(p);
    out.values.resize(static_cast<Index>(series.size()), static_cast<Index>(out.dates.size()));

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& ts = series[s];
        out.ids.push_back(ts.id());
        std::map<Period, double> lookup;
        for (std::size_t i = 0; i < ts.size(); ++i) lookup.emplace(ts.dates()[i], ts[i]);
        for (std::size_t c = 0; c < out.dates.size(); ++c) {
            const auto it = lookup.find(out.dates[c]);
            if (it == lookup.end())
                throw AlignmentError("series '" + ts.id() + "' has no observation for " + out.dates[c].to_string());
            out.values(static_cast<Index>(s), static_cast<Index>(c)) = it->second;
        }
    }
    return out;
}

}  // namespace asymcause
