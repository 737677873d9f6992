#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace pfw {

/// One telemetry row. `bound` is NaN where no theoretical curve applies.
struct RunRecord {
    std::uint64_t iteration = 0;
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
    double best_gap = 0.0;
    double bound = 0.0;
    double alpha = 0.0;
    std::uint64_t m = 0;
    std::int64_t wall_ns = 0;

    // Field-wise equality where NaN equals NaN.
    bool operator==(const RunRecord& other) const;
};

inline constexpr const char* kTraceHeader = "iteration,primal,dual,gap,best_gap,bound,alpha,m,wall_ns";

/// Ordered key=value metadata written next to every trace.
class ExperimentMeta {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }
    void set(const std::string& key, double value);
    void set(const std::string& key, std::uint64_t value);
    void set(const std::string& key, std::int64_t value) { set(key, std::to_string(value)); }
    void set(const std::string& key, int value) { set(key, std::to_string(value)); }

    const std::string* find(const std::string& key) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string format_real(double value);

std::filesystem::path meta_path_for(const std::filesystem::path& csv_path);

/// Writes the CSV trace and its sibling `.meta` file.
void write_trace(const std::filesystem::path& path, const std::vector<RunRecord>& records,
                 const ExperimentMeta& meta);
std::vector<RunRecord> read_trace(const std::filesystem::path& path);
ExperimentMeta read_meta(const std::filesystem::path& path);

/// Which iterations get a gap evaluation: every iteration up to
/// `dense_until`, then `per_decade` log-spaced points per decade. A nonzero
/// `every` replaces both with a fixed stride.
struct LogSchedule {
    std::uint64_t dense_until = 10000;
    std::uint64_t per_decade = 50;
    std::uint64_t every = 0;

    bool should_log(std::uint64_t iteration) const;
};

}  // namespace pfw
