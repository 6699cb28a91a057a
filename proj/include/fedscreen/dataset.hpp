#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fedscreen/ube.hpp"

namespace fedscreen::data {

inline constexpr int kFeatureCount = 12;

// Column order of the dataset CSV; `class` comes last.
inline constexpr std::array<const char*, kFeatureCount> kFeatureNames = {
    "profession",      "num_requests",   "request_type", "data_limit",
    "historical_data", "leaked_records", "leak_count",   "leak_frequency",
    "data_retention",  "leak_ratio",     "user_type",    "leak_channel",
};

namespace col {
inline constexpr int profession = 0;
inline constexpr int num_requests = 1;
inline constexpr int request_type = 2;
inline constexpr int data_limit = 3;
inline constexpr int historical_data = 4;
inline constexpr int leaked_records = 5;
inline constexpr int leak_count = 6;
inline constexpr int leak_frequency = 7;
inline constexpr int data_retention = 8;
inline constexpr int leak_ratio = 9;
inline constexpr int user_type = 10;
inline constexpr int leak_channel = 11;
}  // namespace col

enum class ClassLabel : int { Malicious = 1, NonMalicious = 2, Unknown = 3 };

struct FeatureRecord {
    std::array<double, kFeatureCount> features{};
    int label = static_cast<int>(ClassLabel::NonMalicious);
};

// Per-column (min, max) captured when a dataset is normalized; needed to
// map new samples into the same [0,1] frame or to invert the mapping.
struct NormalizationStats {
    std::array<double, kFeatureCount> min{};
    std::array<double, kFeatureCount> max{};
};

struct Dataset {
    std::vector<FeatureRecord> records;
    std::optional<NormalizationStats> stats;

    bool normalized() const { return stats.has_value(); }
    std::size_t size() const { return records.size(); }
};

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
};

Dataset load_csv(const std::string& path);
void save_csv(const std::string& path, const Dataset& data);

// Min-max rescaling per column into [0,1]; constant columns map to 0.
Dataset normalize(const Dataset& data);
Dataset denormalize(const Dataset& data);

// Map one record into the [0,1] frame of previously captured stats.
std::array<double, kFeatureCount> apply_stats(const NormalizationStats& stats,
                                              const std::array<double, kFeatureCount>& features);

// Seeded shuffle, then cut at round(train_fraction * N).
std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec);

// Seeded shuffle, then contiguous shards; the first N mod k shards take
// one extra record so sizes differ by at most 1.
std::vector<Dataset> partition(const Dataset& data, int num_clients, std::uint64_t seed);

// Closed value range one feature is drawn from; integral ranges produce
// whole numbers, real ones are quantized to a tenth.
struct FeatureRange {
    double lo = 0.0;
    double hi = 0.0;
    bool integral = true;
};

// Per-class feature ranges for the synthetic generator. The defaults keep
// deliberate overlap between neighbouring classes on every informative
// column, so the labels are learnable but not trivially so.
struct GeneratorConfig {
    std::array<std::array<FeatureRange, kFeatureCount>, 3> ranges{};
    std::uint64_t seed = 42;

    static GeneratorConfig defaults();
    static GeneratorConfig load(const std::string& path);
    void save(const std::string& path) const;
};

Dataset synthesize(long long n, std::uint64_t seed, const std::array<double, 3>& class_mix,
                   const GeneratorConfig& config = GeneratorConfig::defaults());

// Persisted user histories and authorization grants, consulted when a
// request is scored.
struct KnowledgeBase {
    std::map<int, ube::UserHistory> histories;
    std::map<int, ube::AuthorizationSet> authorizations;

    ube::UserHistory history_for(int user_id) const;
    ube::AuthorizationSet auth_for(int user_id) const;
};

KnowledgeBase load_knowledge_base(const std::string& history_path, const std::string& auth_path);
void save_history_csv(const std::string& path, const KnowledgeBase& kb);
void save_authorization_csv(const std::string& path, const KnowledgeBase& kb);

}  // namespace fedscreen::data
