#include "pfw/trace.hpp"

#include "pfw/core.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pfw {

namespace {

bool same_real(double a, double b) {
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        cells.push_back(cell);
    }
    return cells;
}

double parse_real(const std::string& s, const std::filesystem::path& path) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception&) {
        throw Error(path.string() + ": cannot parse real '" + s + "'");
    }
}

}  // namespace

bool RunRecord::operator==(const RunRecord& o) const {
    return iteration == o.iteration && same_real(primal, o.primal) && same_real(dual, o.dual) &&
           same_real(gap, o.gap) && same_real(best_gap, o.best_gap) && same_real(bound, o.bound) &&
           same_real(alpha, o.alpha) && m == o.m && wall_ns == o.wall_ns;
}

std::string format_real(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void ExperimentMeta::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = value;
            return;
        }
    }
    entries_.emplace_back(key, value);
}

void ExperimentMeta::set(const std::string& key, double value) {
    set(key, format_real(value));
}

void ExperimentMeta::set(const std::string& key, std::uint64_t value) {
    set(key, std::to_string(value));
}

const std::string* ExperimentMeta::find(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) {
            return &v;
        }
    }
    return nullptr;
}

std::filesystem::path meta_path_for(const std::filesystem::path& csv_path) {
    auto p = csv_path;
    p.replace_extension(".meta");
    return p;
}

void write_trace(const std::filesystem::path& path, const std::vector<RunRecord>& records,
                 const ExperimentMeta& meta) {
    {
        std::ofstream out(path);
        if (!out) {
            throw Error("cannot open " + path.string() + " for writing");
        }
        out << kTraceHeader << "\n";
        for (const auto& r : records) {
            out << r.iteration << ',' << format_real(r.primal) << ',' << format_real(r.dual) << ','
                << format_real(r.gap) << ',' << format_real(r.best_gap) << ',' << format_real(r.bound) << ','
                << format_real(r.alpha) << ',' << r.m << ',' << r.wall_ns << "\n";
        }
        if (!out) {
            throw Error("write failed for " + path.string());
        }
    }
    const auto mpath = meta_path_for(path);
    std::ofstream out(mpath);
    if (!out) {
        throw Error("cannot open " + mpath.string() + " for writing");
    }
    for (const auto& [k, v] : meta.entries()) {
        out << k << '=' << v << "\n";
    }
    if (!out) {
        throw Error("write failed for " + mpath.string());
    }
}

std::vector<RunRecord> read_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader) {
        throw Error(path.string() + ": unexpected header");
    }
    std::vector<RunRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != 9) {
            throw Error(path.string() + ": expected 9 columns, got " + std::to_string(cells.size()));
        }
        RunRecord r;
        r.iteration = std::stoull(cells[0]);
        r.primal = parse_real(cells[1], path);
        r.dual = parse_real(cells[2], path);
        r.gap = parse_real(cells[3], path);
        r.best_gap = parse_real(cells[4], path);
        r.bound = parse_real(cells[5], path);
        r.alpha = parse_real(cells[6], path);
        r.m = std::stoull(cells[7]);
        r.wall_ns = std::stoll(cells[8]);
        records.push_back(r);
    }
    return records;
}

ExperimentMeta read_meta(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    ExperimentMeta meta;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            continue;
        }
        meta.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return meta;
}

bool LogSchedule::should_log(std::uint64_t iteration) const {
    if (every > 0) {
        return iteration % every == 0;
    }
    if (iteration <= dense_until) {
        return true;
    }
    const double scale = static_cast<double>(per_decade);
    const auto bucket = [scale](std::uint64_t i) {
        return static_cast<std::int64_t>(std::floor(scale * std::log10(static_cast<double>(i))));
    };
    return bucket(iteration) != bucket(iteration - 1);
}

}  // namespace pfw
