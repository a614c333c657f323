#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "asymcause/study.hpp"

namespace asymcause {

// Config file grammar, one setting per line:
//
//   # comment
//   key = value
//
// Blank lines and '#' comments are ignored; keys are case-sensitive; values run
// to the end of the line with surrounding whitespace removed. Relative file
// paths are resolved against the config file's directory.
//
//   y.kind, s.kind                   local_csv | fred
//   y.id, s.id                       file path or FRED code
//   y.label, s.label                 report label
//   y.date_column, s.date_column     CSV column names
//   y.value_column, s.value_column
//   y.frequency, s.frequency         quarterly | index
//   window                           e.g. 1960Q1:2020Q1
//   lmax, augmentation, reps, seed, jobs, arch_lags
//   detrending                       constant | trend
//   log_transform, refresh           true | false
//   format                           text | csv | json
//   snapshot_dir, fred_base_url
//   directions                       all, or a comma list of S=>Y, S+=>Y+, S-=>Y-, Y=>S, Y+=>S+, Y-=>S-

namespace detail {

inline std::string trimmed(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

inline long long parse_integer(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("'" + key + "' expects true or false, got '" + value + "'");
}

}  // namespace detail

inline OutputFormat parse_output_format(const std::string& value) {
    if (value == "text") return OutputFormat::text;
    if (value == "csv") return OutputFormat::csv;
    if (value == "json") return OutputFormat::json;
    throw ConfigError("unknown output format '" + value + "'");
}

inline std::vector<Direction> parse_directions(const std::string& value) {
    if (value == "all") return all_directions();
    std::vector<Direction> out;
    std::stringstream ss(value);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token = detail::trimmed(token);
        bool found = false;
        for (const auto& d : all_directions()) {
            if (d.token() == token) {
                out.push_back(d);
                found = true;
            }
        }
        if (!found) throw ConfigError("unknown direction '" + token + "'");
    }
    if (out.empty()) throw ConfigError("no directions given");
    return out;
}

/// Applies one key/value setting. `base_dir` resolves relative source paths.
inline void apply_setting(StudyConfig& config, const std::string& key, const std::string& value,
                          const std::filesystem::path& base_dir = {}) {
    using detail::parse_bool;
    using detail::parse_integer;

    if (key.size() > 2 && (key.starts_with("y.") || key.starts_with("s."))) {
        SeriesSource& src = key[0] == 'y' ? config.y : config.s;
        const std::string field = key.substr(2);
        if (field == "kind") {
            if (value == "local_csv" || value == "csv") src.kind = SourceKind::local_csv;
            else if (value == "fred" || value == "fred_remote") src.kind = SourceKind::fred_remote;
            else throw ConfigError("unknown source kind '" + value + "'");
        } else if (field == "id") {
            src.identifier = value;
        } else if (field == "label") {
            src.label = value;
        } else if (field == "date_column") {
            src.date_column = value;
        } else if (field == "value_column") {
            src.value_column = value;
        } else if (field == "frequency") {
            if (value == "quarterly") src.frequency = Frequency::quarterly;
            else if (value == "index") src.frequency = Frequency::index;
            else throw ConfigError("unknown frequency '" + value + "'");
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
        if (src.kind == SourceKind::local_csv && field == "id" && !base_dir.empty() &&
            std::filesystem::path(value).is_relative())
            src.identifier = (base_dir / value).lexically_normal().string();
        return;
    }

    if (key == "window") config.window = StudyWindow::parse(value);
    else if (key == "lmax") config.l_max = static_cast<int>(parse_integer(key, value));
    else if (key == "augmentation") config.augmentation = static_cast<int>(parse_integer(key, value));
    else if (key == "reps") config.bootstrap.replications = static_cast<int>(parse_integer(key, value));
    else if (key == "seed") config.bootstrap.seed = static_cast<std::uint64_t>(parse_integer(key, value));
    else if (key == "jobs") config.bootstrap.parallelism = static_cast<unsigned>(parse_integer(key, value));
    else if (key == "arch_lags") config.arch_lags = static_cast<int>(parse_integer(key, value));
    else if (key == "detrending") {
        if (value == "constant") config.detrending = Detrending::constant;
        else if (value == "trend" || value == "constant+trend") config.detrending = Detrending::constant_trend;
        else throw ConfigError("unknown detrending '" + value + "'");
    } else if (key == "log_transform") config.log_transform = parse_bool(key, value);
    else if (key == "refresh") config.refresh = parse_bool(key, value);
    else if (key == "format") config.format = parse_output_format(value);
    else if (key == "snapshot_dir") {
        std::filesystem::path p(value);
        config.snapshot_dir = (p.is_relative() && !base_dir.empty()) ? (base_dir / p).lexically_normal() : p;
    } else if (key == "fred_base_url") config.fred_base_url = value;
    else if (key == "directions") config.directions = parse_directions(value);
    else throw ConfigError("unknown key '" + key + "'");
}

inline void apply_config_text(StudyConfig& config, const std::string& text, const std::filesystem::path& base_dir = {}) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trimmed(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = detail::trimmed(line.substr(0, eq));
        const std::string value = detail::trimmed(line.substr(eq + 1));
        try {
            apply_setting(config, key, value, base_dir);
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

inline void apply_config_file(StudyConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(config, ss.str(), path.parent_path());
}

}  // namespace asymcause
