#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asymcause/errors.hpp"

namespace asymcause {

enum class Frequency { quarterly, index };

/// A period stamp. Quarterly periods are stored as year * 4 + (quarter - 1) so
/// that consecutive quarters differ by exactly one.
struct Period {
    Frequency frequency = Frequency::index;
    std::int64_t ordinal = 0;

    static Period quarter(int year, int q) { return {Frequency::quarterly, std::int64_t{year} * 4 + (q - 1)}; }
    static Period index(std::int64_t i) { return {Frequency::index, i}; }

    int year() const { return static_cast<int>(floor_div(ordinal, 4)); }
    int quarter_of_year() const { return static_cast<int>(ordinal - floor_div(ordinal, 4) * 4) + 1; }

    Period next() const { return {frequency, ordinal + 1}; }

    std::string to_string() const {
        if (frequency == Frequency::index) return std::to_string(ordinal);
        return std::to_string(year()) + "Q" + std::to_string(quarter_of_year());
    }

    /// Accepts "1960Q1", "1960-01-01" (first day of a quarter) or a plain integer index.
    static Period parse(std::string_view text) {
        auto fail = [&] { throw DateParseError("unparseable period '" + std::string(text) + "'"); };
        auto digits = [](std::string_view s) {
            return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
        };
        auto to_int = [](std::string_view s) { return std::stoll(std::string(s)); };

        if (text.size() == 6 && (text[4] == 'Q' || text[4] == 'q') && digits(text.substr(0, 4))) {
            int q = text[5] - '0';
            if (q < 1 || q > 4) fail();
            return quarter(static_cast<int>(to_int(text.substr(0, 4))), q);
        }
        if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
            auto y = text.substr(0, 4), m = text.substr(5, 2), d = text.substr(8, 2);
            if (!digits(y) || !digits(m) || !digits(d)) fail();
            long long month = to_int(m), day = to_int(d);
            if (day != 1 || month < 1 || month > 12 || (month - 1) % 3 != 0) fail();
            return quarter(static_cast<int>(to_int(y)), static_cast<int>((month - 1) / 3 + 1));
        }
        std::string_view body = text;
        if (!body.empty() && body.front() == '-') body.remove_prefix(1);
        if (digits(body)) return index(to_int(text));
        fail();
        return {};
    }

    friend bool operator==(const Period&, const Period&) = default;
    friend auto operator<=>(const Period& a, const Period& b) {
        if (auto c = a.frequency <=> b.frequency; c != 0) return c;
        return a.ordinal <=> b.ordinal;
    }

private:
    static std::int64_t floor_div(std::int64_t a, std::int64_t b) {
        std::int64_t q = a / b;
        return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
    }
};

/// A dated, equally spaced, gap-free sequence of finite observations.
class TimeSeries {
public:
    static constexpr std::size_t min_length = 3;

    TimeSeries(std::string id, std::vector<Period> dates, std::vector<double> values)
        : id_(std::move(id)), dates_(std::move(dates)), values_(std::move(values)) {
        validate();
    }

    /// Integer-indexed series with dates 0, 1, ..., n-1.
    static TimeSeries indexed(std::string id, std::vector<double> values) {
        std::vector<Period> dates(values.size());
        for (std::size_t i = 0; i < dates.size(); ++i) dates[i] = Period::index(static_cast<std::int64_t>(i));
        return TimeSeries(std::move(id), std::move(dates), std::move(values));
    }

    const std::string& id() const noexcept { return id_; }
    const std::vector<Period>& dates() const noexcept { return dates_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::span<const double> view() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Copy with a new label, same dates.
    TimeSeries relabeled(std::string id) const { return TimeSeries(std::move(id), dates_, values_); }

    /// Same dates and label with replaced values.
    TimeSeries with_values(std::vector<double> values) const { return TimeSeries(id_, dates_, std::move(values)); }

    /// Periods [first, last] inclusive.
    TimeSeries clipped(const Period& first, const Period& last) const {
        std::vector<Period> d;
        std::vector<double> v;
        for (std::size_t i = 0; i < size(); ++i) {
            if (dates_[i] >= first && dates_[i] <= last) {
                d.push_back(dates_[i]);
                v.push_back(values_[i]);
            }
        }
        return TimeSeries(id_, std::move(d), std::move(v));
    }

    /// First difference, dated at the later period.
    TimeSeries differenced() const {
        if (size() <= min_length) throw LengthError("series '" + id_ + "' too short to difference");
        std::vector<Period> d(dates_.begin() + 1, dates_.end());
        std::vector<double> v(size() - 1);
        for (std::size_t i = 1; i < size(); ++i) v[i - 1] = values_[i] - values_[i - 1];
        return TimeSeries(id_ + " (diff)", std::move(d), std::move(v));
    }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    void validate() const {
        if (dates_.size() != values_.size())
            throw StructuralError("series '" + id_ + "': " + std::to_string(dates_.size()) + " dates but " +
                                  std::to_string(values_.size()) + " values");
        if (values_.size() < min_length)
            throw LengthError("series '" + id_ + "' has " + std::to_string(values_.size()) +
                              " observations; at least 3 are required");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]))
                throw DataError("series '" + id_ + "' has a non-finite value at " + dates_[i].to_string());
        }
        const auto step = dates_[1].ordinal - dates_[0].ordinal;
        for (std::size_t i = 1; i < dates_.size(); ++i) {
            if (dates_[i].frequency != dates_[0].frequency)
                throw DataError("series '" + id_ + "' mixes period kinds");
            const auto gap = dates_[i].ordinal - dates_[i - 1].ordinal;
            if (gap <= 0)
                throw DataError("series '" + id_ + "' dates not strictly increasing at " + dates_[i].to_string());
            if (gap != step)
                throw GapError("series '" + id_ + "' is not equally spaced before " + dates_[i].to_string(),
                               dates_[i].to_string());
        }
    }

    std::string id_;
    std::vector<Period> dates_;
    std::vector<double> values_;
};

}  // namespace asymcause
