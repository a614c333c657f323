#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "asymcause/bootstrap.hpp"
#include "asymcause/causality.hpp"
#include "asymcause/data_io.hpp"
#include "asymcause/decompose.hpp"
#include "asymcause/diagnostics.hpp"
#include "asymcause/var.hpp"

namespace asymcause {

inline constexpr const char* version = "1.0.0";

enum class OutputFormat { text, csv, json };

/// Which components a VAR is built from.
enum class Component { levels, positive, negative };

inline std::string component_suffix(Component c) {
    switch (c) {
        case Component::positive: return "⁺";
        case Component::negative: return "⁻";
        default: return "";
    }
}

/// One causality null: `cause` does not Granger-cause `effect`, within the VAR of one component.
struct Direction {
    Component component = Component::levels;
    bool s_causes_y = true;

    std::string cause_name() const { return (s_causes_y ? "S" : "Y") + component_suffix(component); }
    std::string effect_name() const { return (s_causes_y ? "Y" : "S") + component_suffix(component); }
    std::string label() const { return direction_label(cause_name(), effect_name()); }
    /// Config-file token, e.g. "S+=>Y+".
    std::string token() const {
        const char* sfx = component == Component::positive ? "+" : component == Component::negative ? "-" : "";
        return std::string(s_causes_y ? "S" : "Y") + sfx + "=>" + (s_causes_y ? "Y" : "S") + sfx;
    }

    friend bool operator==(const Direction&, const Direction&) = default;
};

/// The six nulls in reporting order.
inline std::vector<Direction> all_directions() {
    return {{Component::levels, true},  {Component::positive, true},  {Component::negative, true},
            {Component::levels, false}, {Component::positive, false}, {Component::negative, false}};
}

struct StudyConfig {
    SeriesSource y = fred_source("GDPC1", "Y");
    SeriesSource s = fred_source("SPASTT01USQ661N", "S");
    StudyWindow window;
    int l_max = 8;
    int augmentation = 1;
    BootstrapConfig bootstrap;
    int arch_lags = 1;
    Detrending detrending = Detrending::constant;
    bool log_transform = false;
    std::vector<Direction> directions = all_directions();
    OutputFormat format = OutputFormat::text;
    std::filesystem::path snapshot_dir = default_cache_dir();
    bool refresh = false;
    std::string fred_base_url = default_fred_base_url;

    void validate() const {
        if (l_max < 1) throw ConfigError("lmax must be >= 1");
        if (augmentation < 0) throw ConfigError("augmentation must be >= 0");
        if (arch_lags < 1) throw ConfigError("arch_lags must be >= 1");
        if (y.identifier.empty() || s.identifier.empty()) throw ConfigError("both Y and S sources must be set");
        if (directions.empty()) throw ConfigError("no causality directions selected");
        window.validate();
        bootstrap.validate();
    }
};

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct UnitRootRow {
    std::string variable;
    UnitRootResult level;       ///< null I(1)
    UnitRootResult difference;  ///< null I(2), on the first difference
};

struct DiagnosticsRow {
    std::string model;  ///< e.g. "(Y, S)"
    MvDiagnostics diagnostics;
};

struct CausalityRow {
    CausalityResult result;
    std::string stars;
    int effective_replications = 0;
    std::string warning;
};

struct SourceProvenance {
    std::string label;
    std::string identifier;
    std::string kind;
    std::string sha256;
    std::string retrieved_at;
};

struct Provenance {
    std::string tool_version = version;
    std::uint64_t seed = 0;
    int replications = 0;
    int l_max = 0;
    int augmentation = 0;
    int arch_lags = 0;
    std::string window;
    std::string detrending;
    bool log_transform = false;
    std::vector<SourceProvenance> sources;
};

struct StudyReport {
    std::vector<UnitRootRow> unit_roots;
    std::vector<DiagnosticsRow> diagnostics;
    std::vector<CausalityRow> causality;
    Provenance provenance;
};

/// "***" at or above the 1% value, "**" at or above 5%, "*" at or above 10%.
inline std::string significance_stars(double value, const CriticalValues& cvs) {
    if (value >= cvs.at_1) return "***";
    if (value >= cvs.at_5) return "**";
    if (value >= cvs.at_10) return "*";
    return "";
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

struct StudyParts {
    bool unit_roots = true;
    bool diagnostics = true;
    bool causality = true;
};

namespace detail {

template <class Fn>
auto run_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e);
    }
}

inline std::pair<TimeSeries, SourceProvenance> obtain(const SeriesSource& source, const StudyConfig& config) {
    SourceProvenance prov{source.display_label(), source.identifier,
                          source.kind == SourceKind::local_csv ? "local_csv" : "fred_remote", "", ""};
    if (source.kind == SourceKind::local_csv) {
        const std::string bytes = read_file(source.identifier);
        prov.sha256 = sha256_hex(bytes);
        return {parse_csv(bytes, source), prov};
    }
    FetchOptions options;
    options.base_url = config.fred_base_url;
    options.cache_dir = config.snapshot_dir;
    options.refresh = config.refresh;
    auto fetched = fetch_fred(source, options);
    prov.sha256 = fetched.sha256;
    prov.retrieved_at = fetched.retrieved_at;
    return {fetched.series.relabeled(source.display_label()), prov};
}

}  // namespace detail

/// Runs the pipeline: load, decompose, unit-root tests on all six series, lag
/// selection per VAR, residual diagnostics, then Wald tests with bootstrap
/// critical values for every requested direction. Any failure aborts the whole
/// run with the stage name attached.
inline StudyReport run_study(const StudyConfig& config, StudyParts parts = {}) {
    config.validate();
    StudyReport report;
    auto& prov = report.provenance;
    prov.seed = config.bootstrap.seed;
    prov.replications = config.bootstrap.replications;
    prov.l_max = config.l_max;
    prov.augmentation = config.augmentation;
    prov.arch_lags = config.arch_lags;
    prov.window = config.window.to_string();
    prov.detrending = to_string(config.detrending);
    prov.log_transform = config.log_transform;

    const AlignedData aligned = detail::run_stage("data", [&] {
        std::vector<TimeSeries> series;
        for (const auto* source : {&config.y, &config.s}) {
            auto [ts, source_prov] = detail::obtain(*source, config);
            prov.sources.push_back(source_prov);
            series.push_back(std::move(ts));
        }
        AlignedData a = align(series, config.window);
        if (config.log_transform) {
            if ((a.values.array() <= 0.0).any()) throw DataError("log transform needs strictly positive values");
            a.values = a.values.array().log().matrix();
        }
        return a;
    });

    // Rows: Y, Y+, Y-, S, S+, S-
    const std::vector<TimeSeries> six = detail::run_stage("decompose", [&] {
        std::vector<TimeSeries> out;
        for (Index row = 0; row < 2; ++row) {
            const std::string name = row == 0 ? "Y" : "S";
            const Vector v = aligned.values.row(row);
            TimeSeries ts(name, aligned.dates, std::vector<double>(v.data(), v.data() + v.size()));
            auto pair = decompose(ts);
            out.push_back(ts);
            out.push_back(pair.positive.relabeled(name + "⁺"));
            out.push_back(pair.negative.relabeled(name + "⁻"));
        }
        return out;
    });

    if (parts.unit_roots) {
        detail::run_stage("unit-root", [&] {
            for (const auto& ts : six) {
                report.unit_roots.push_back({ts.id(), ng_perron_mza(ts, config.detrending),
                                             ng_perron_mza(ts.differenced(), config.detrending)});
            }
        });
    }
    if (!parts.diagnostics && !parts.causality) return report;

    // Fitted augmented VAR per component, (Y, S) ordering.
    const std::vector<Component> components{Component::levels, Component::positive, Component::negative};
    auto component_data = [&](Component c) {
        const auto offset = static_cast<std::size_t>(c);
        Matrix m(2, static_cast<Index>(six[0].size()));
        m.row(0) = Eigen::Map<const Vector>(six[offset].values().data(), m.cols()).transpose();
        m.row(1) = Eigen::Map<const Vector>(six[3 + offset].values().data(), m.cols()).transpose();
        return m;
    };
    std::map<Component, VarFit> fits;
    detail::run_stage("lag-selection", [&] {
        for (Component c : components) {
            const Matrix data = component_data(c);
            const int lag = select_lag(data, config.l_max, config.augmentation).lag;
            fits.emplace(c, estimate_var(data, VarSpec{2, lag, config.augmentation, true}));
        }
    });

    if (parts.diagnostics) {
        detail::run_stage("diagnostics", [&] {
            for (Component c : components) {
                const std::string sfx = component_suffix(c);
                report.diagnostics.push_back(
                    {"(Y" + sfx + ", S" + sfx + ")", mv_diagnostics(fits.at(c), config.arch_lags)});
            }
        });
    }

    if (parts.causality) {
        detail::run_stage("causality", [&] {
            const auto all = all_directions();
            for (const auto& dir : config.directions) {
                const VarFit& fit = fits.at(dir.component);
                const int cause = dir.s_causes_y ? 1 : 0;
                const auto restrictions = build_restrictions(fit.spec, cause, 1 - cause);
                CausalityRow row;
                row.result = wald(fit, restrictions, dir.label());

                BootstrapConfig boot = config.bootstrap;
                const auto stream = static_cast<std::uint64_t>(std::find(all.begin(), all.end(), dir) - all.begin());
                boot.seed = derive_seed(config.bootstrap.seed, stream);
                const auto b = bootstrap_cvs(component_data(dir.component), fit.spec, restrictions, boot);
                row.result.bootstrap_cvs = b.cvs;
                row.stars = significance_stars(row.result.wald, b.cvs);
                row.effective_replications = b.effective_replications;
                row.warning = b.warning_message;
                report.causality.push_back(std::move(row));
            }
        });
    }
    return report;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const CriticalValues& c) {
    j = {{"1%", c.at_1}, {"5%", c.at_5}, {"10%", c.at_10}};
}
inline void from_json(const nlohmann::json& j, CriticalValues& c) {
    c = {j.at("1%").get<double>(), j.at("5%").get<double>(), j.at("10%").get<double>()};
}

inline void to_json(nlohmann::json& j, const UnitRootResult& r) {
    j = {{"mza", r.statistic_mza},
         {"lag", r.lag_used},
         {"detrending", to_string(r.detrending)},
         {"critical_values", r.critical_values},
         {"reject", {{"1%", r.reject[0]}, {"5%", r.reject[1]}, {"10%", r.reject[2]}}}};
}
inline void from_json(const nlohmann::json& j, UnitRootResult& r) {
    r.statistic_mza = j.at("mza").get<double>();
    r.lag_used = j.at("lag").get<int>();
    r.detrending = j.at("detrending").get<std::string>() == "constant" ? Detrending::constant : Detrending::constant_trend;
    r.critical_values = j.at("critical_values").get<CriticalValues>();
    const auto& rej = j.at("reject");
    r.reject = {rej.at("1%").get<bool>(), rej.at("5%").get<bool>(), rej.at("10%").get<bool>()};
}

inline void to_json(nlohmann::json& j, const UnitRootRow& r) {
    j = {{"variable", r.variable}, {"level", r.level}, {"difference", r.difference}};
}
inline void from_json(const nlohmann::json& j, UnitRootRow& r) {
    r.variable = j.at("variable").get<std::string>();
    r.level = j.at("level").get<UnitRootResult>();
    r.difference = j.at("difference").get<UnitRootResult>();
}

inline void to_json(nlohmann::json& j, const DiagnosticsRow& r) {
    const auto& d = r.diagnostics;
    j = {{"model", r.model},
         {"normality_stat", d.normality_stat},
         {"normality_p", d.normality_p},
         {"arch_stat", d.arch_stat},
         {"arch_p", d.arch_p},
         {"arch_lags", d.arch_lags},
         {"var_lag_order", d.var_lag_order}};
}
inline void from_json(const nlohmann::json& j, DiagnosticsRow& r) {
    r.model = j.at("model").get<std::string>();
    auto& d = r.diagnostics;
    d.normality_stat = j.at("normality_stat").get<double>();
    d.normality_p = j.at("normality_p").get<double>();
    d.arch_stat = j.at("arch_stat").get<double>();
    d.arch_p = j.at("arch_p").get<double>();
    d.arch_lags = j.at("arch_lags").get<int>();
    d.var_lag_order = j.at("var_lag_order").get<int>();
}

inline void to_json(nlohmann::json& j, const CausalityRow& r) {
    const auto& c = r.result;
    j = {{"null", c.direction_label},
         {"wald", c.wald},
         {"df", c.df},
         {"asymptotic_p", c.asymptotic_p},
         {"causal_parameter", c.causal_parameter},
         {"lag_order", c.lag_order},
         {"augmentation", c.augmentation},
         {"stars", r.stars},
         {"effective_replications", r.effective_replications},
         {"warning", r.warning}};
    j["bootstrap_cvs"] = c.bootstrap_cvs ? nlohmann::json(*c.bootstrap_cvs) : nlohmann::json(nullptr);
}
inline void from_json(const nlohmann::json& j, CausalityRow& r) {
    auto& c = r.result;
    c.direction_label = j.at("null").get<std::string>();
    c.wald = j.at("wald").get<double>();
    c.df = j.at("df").get<int>();
    c.asymptotic_p = j.at("asymptotic_p").get<double>();
    c.causal_parameter = j.at("causal_parameter").get<double>();
    c.lag_order = j.at("lag_order").get<int>();
    c.augmentation = j.at("augmentation").get<int>();
    if (j.at("bootstrap_cvs").is_null())
        c.bootstrap_cvs.reset();
    else
        c.bootstrap_cvs = j.at("bootstrap_cvs").get<CriticalValues>();
    r.stars = j.at("stars").get<std::string>();
    r.effective_replications = j.at("effective_replications").get<int>();
    r.warning = j.at("warning").get<std::string>();
}

inline void to_json(nlohmann::json& j, const SourceProvenance& s) {
    j = {{"label", s.label}, {"identifier", s.identifier}, {"kind", s.kind}, {"sha256", s.sha256},
         {"retrieved_at", s.retrieved_at}};
}
inline void from_json(const nlohmann::json& j, SourceProvenance& s) {
    s = {j.at("label").get<std::string>(), j.at("identifier").get<std::string>(), j.at("kind").get<std::string>(),
         j.at("sha256").get<std::string>(), j.at("retrieved_at").get<std::string>()};
}

inline void to_json(nlohmann::json& j, const Provenance& p) {
    j = {{"tool_version", p.tool_version}, {"seed", p.seed},         {"replications", p.replications},
         {"l_max", p.l_max},               {"augmentation", p.augmentation}, {"arch_lags", p.arch_lags},
         {"window", p.window},             {"detrending", p.detrending}, {"log_transform", p.log_transform},
         {"sources", p.sources}};
}
inline void from_json(const nlohmann::json& j, Provenance& p) {
    p.tool_version = j.at("tool_version").get<std::string>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.replications = j.at("replications").get<int>();
    p.l_max = j.at("l_max").get<int>();
    p.augmentation = j.at("augmentation").get<int>();
    p.arch_lags = j.at("arch_lags").get<int>();
    p.window = j.at("window").get<std::string>();
    p.detrending = j.at("detrending").get<std::string>();
    p.log_transform = j.at("log_transform").get<bool>();
    p.sources = j.at("sources").get<std::vector<SourceProvenance>>();
}

inline void to_json(nlohmann::json& j, const StudyReport& r) {
    j = {{"unit_roots", r.unit_roots},
         {"diagnostics", r.diagnostics},
         {"causality", r.causality},
         {"provenance", r.provenance}};
}
inline void from_json(const nlohmann::json& j, StudyReport& r) {
    r.unit_roots = j.at("unit_roots").get<std::vector<UnitRootRow>>();
    r.diagnostics = j.at("diagnostics").get<std::vector<DiagnosticsRow>>();
    r.causality = j.at("causality").get<std::vector<CausalityRow>>();
    r.provenance = j.at("provenance").get<Provenance>();
}

// ---------------------------------------------------------------------------
// Text and CSV
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string p_value_text(double p) { return p < 0.00001 ? "<0.00001" : fixed(p, 5); }

/// Display width of UTF-8 text (one column per code point).
inline std::size_t display_width(const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++w;
    return w;
}

inline std::string render_table(const std::string& title, const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& notes) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = display_width(header[c]);
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], display_width(row[c]));

    auto line = [&](const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string pad(width[c] - display_width(cells[c]), ' ');
            out += c == 0 ? cells[c] + pad : pad + cells[c];
            if (c + 1 < cells.size()) out += "  ";
        }
        return out + "\n";
    };
    std::size_t total = 0;
    for (auto w : width) total += w + 2;
    const std::string rule(total - 2, '-');

    std::string out = title + "\n" + rule + "\n" + line(header) + rule + "\n";
    for (const auto& row : rows) out += line(row);
    out += rule + "\n";
    for (const auto& n : notes) out += n + "\n";
    return out;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

inline std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace detail

inline std::string render_text(const StudyReport& report) {
    std::string out;
    if (!report.unit_roots.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : report.unit_roots)
            rows.push_back({r.variable, detail::fixed(r.level.statistic_mza, 5), std::to_string(r.level.lag_used),
                            detail::fixed(r.difference.statistic_mza, 5), std::to_string(r.difference.lag_used)});
        const auto& cv = report.unit_roots.front().level.critical_values;
        out += detail::render_table(
            "Unit root tests (Ng-Perron MZa, " + report.provenance.detrending + ")",
            {"VARIABLE", "Test Value For H0: I(1)", "Lag", "Test Value For H0: I(2)", "Lag"}, rows,
            {"Critical values: " + detail::fixed(cv.at_1, 2) + ", " + detail::fixed(cv.at_5, 2) + " and " +
             detail::fixed(cv.at_10, 2) + " at the 1%, 5% and 10% levels."});
        out += "\n";
    }
    if (!report.diagnostics.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : report.diagnostics)
            rows.push_back({r.model, detail::p_value_text(r.diagnostics.normality_p),
                            detail::p_value_text(r.diagnostics.arch_p), std::to_string(r.diagnostics.var_lag_order)});
        out += detail::render_table(
            "Multivariate normality and multivariate ARCH tests",
            {"VARIABLE IN THE VAR MODEL", "P-Value For H0: Multivariate Normality", "P-Value For H0: No Multivariate ARCH",
             "Lag Order"},
            rows,
            {"Normality: Doornik-Hansen omnibus test. ARCH: multivariate LM test with " +
             std::to_string(report.provenance.arch_lags) + " lag(s)."});
        out += "\n";
    }
    if (!report.causality.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : report.causality) {
            const auto& c = r.result;
            const auto cvs = c.bootstrap_cvs.value_or(CriticalValues{});
            rows.push_back({c.direction_label, detail::fixed(c.wald, 3) + r.stars, detail::fixed(cvs.at_1, 3),
                            detail::fixed(cvs.at_5, 3), detail::fixed(cvs.at_10, 3), detail::fixed(c.causal_parameter, 4),
                            std::to_string(c.lag_order)});
        }
        std::vector<std::string> notes{
            "*** significant at 1%, ** at 5%, * at 10% against the bootstrap critical values.",
            "Causal parameter: sum of the restricted lag coefficients.",
            std::to_string(report.provenance.augmentation) +
                " unrestricted augmentation lag(s) in each VAR; " + std::to_string(report.provenance.replications) +
                " leveraged bootstrap replications, seed " + std::to_string(report.provenance.seed) + "."};
        for (const auto& r : report.causality)
            if (!r.warning.empty()) notes.push_back("Warning (" + r.result.direction_label + "): " + r.warning);
        out += detail::render_table("Symmetric and asymmetric causality tests",
                                    {"NULL HYPOTHESIS", "Test Value", "Bootstrap CV at 1%", "Bootstrap CV at 5%",
                                     "Bootstrap CV at 10%", "Causal Parameter", "Lag Order"},
                                    rows, notes);
    }
    return out;
}

/// One CSV document per non-empty table, keyed by file name.
inline std::map<std::string, std::string> render_csv(const StudyReport& report) {
    using detail::csv_escape;
    using detail::csv_number;
    std::map<std::string, std::string> out;
    if (!report.unit_roots.empty()) {
        std::string s = "variable,mza_level,lag_level,reject5_level,mza_difference,lag_difference,reject5_difference\n";
        for (const auto& r : report.unit_roots)
            s += csv_escape(r.variable) + "," + csv_number(r.level.statistic_mza) + "," + std::to_string(r.level.lag_used) +
                 "," + (r.level.reject[1] ? "1" : "0") + "," + csv_number(r.difference.statistic_mza) + "," +
                 std::to_string(r.difference.lag_used) + "," + (r.difference.reject[1] ? "1" : "0") + "\n";
        out["unit_roots.csv"] = s;
    }
    if (!report.diagnostics.empty()) {
        std::string s = "model,normality_stat,normality_p,arch_stat,arch_p,arch_lags,var_lag_order\n";
        for (const auto& r : report.diagnostics) {
            const auto& d = r.diagnostics;
            s += csv_escape(r.model) + "," + csv_number(d.normality_stat) + "," + csv_number(d.normality_p) + "," +
                 csv_number(d.arch_stat) + "," + csv_number(d.arch_p) + "," + std::to_string(d.arch_lags) + "," +
                 std::to_string(d.var_lag_order) + "\n";
        }
        out["diagnostics.csv"] = s;
    }
    if (!report.causality.empty()) {
        std::string s = "null,wald,stars,cv1,cv5,cv10,asymptotic_p,causal_parameter,lag_order,augmentation,"
                        "effective_replications\n";
        for (const auto& r : report.causality) {
            const auto& c = r.result;
            const auto cvs = c.bootstrap_cvs.value_or(CriticalValues{});
            s += csv_escape(c.direction_label) + "," + csv_number(c.wald) + "," + r.stars + "," + csv_number(cvs.at_1) +
                 "," + csv_number(cvs.at_5) + "," + csv_number(cvs.at_10) + "," + csv_number(c.asymptotic_p) + "," +
                 csv_number(c.causal_parameter) + "," + std::to_string(c.lag_order) + "," +
                 std::to_string(c.augmentation) + "," + std::to_string(r.effective_replications) + "\n";
        }
        out["causality.csv"] = s;
    }
    return out;
}

inline std::string render_json(const StudyReport& report) { return nlohmann::json(report).dump(2) + "\n"; }

inline StudyReport parse_report_json(const std::string& text) { return nlohmann::json::parse(text).get<StudyReport>(); }

/// Text and json produce one document; csv concatenates its tables with a "# file" line before each.
inline std::string render(const StudyReport& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::json: return render_json(report);
        case OutputFormat::csv: {
            std::string out;
            for (const auto& [name, doc] : render_csv(report)) out += "# " + name + "\n" + doc;
            return out;
        }
        default: return render_text(report);
    }
}

}  // namespace asymcause
