#include "fedscreen/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fedscreen/csv.hpp"
#include "fedscreen/seeds.hpp"

namespace fedscreen::data {

namespace {

const std::array<const char*, 3> kClassKeys = {"malicious", "nonmalicious", "unknown"};

std::string dataset_header() {
    std::string header;
    for (const char* name : kFeatureNames) {
        header += name;
        header += ',';
    }
    header += "class";
    return header;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw std::runtime_error("cannot open " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out.is_open()) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

std::string line_context(const std::string& path, std::size_t line_no) {
    return path + ":" + std::to_string(line_no);
}

bool parse_bool(const std::string& field, const std::string& context) {
    if (field == "0") return false;
    if (field == "1") return true;
    throw std::runtime_error(context + ": expected 0 or 1, got '" + field + "'");
}

}  // namespace

Dataset load_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file, header expected");
    if (csv::split_line(line) != csv::split_line(dataset_header())) {
        throw std::runtime_error(path + ": header does not match '" + dataset_header() + "'");
    }

    Dataset out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = csv::split_line(line);
        if (fields.size() != kFeatureCount + 1) {
            throw std::runtime_error(line_context(path, line_no) + ": expected " +
                                     std::to_string(kFeatureCount + 1) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        FeatureRecord rec;
        for (int c = 0; c < kFeatureCount; ++c) {
            rec.features[c] = csv::parse_double(fields[c], line_context(path, line_no));
        }
        long long label = csv::parse_int(fields[kFeatureCount], line_context(path, line_no));
        if (label < 1 || label > 3) {
            throw std::runtime_error(line_context(path, line_no) + ": class " +
                                     std::to_string(label) + " outside {1,2,3}");
        }
        rec.label = static_cast<int>(label);
        out.records.push_back(rec);
    }
    return out;
}

void save_csv(const std::string& path, const Dataset& data) {
    std::ofstream out = open_output(path);
    out << dataset_header() << '\n';
    for (const FeatureRecord& rec : data.records) {
        std::vector<std::string> fields;
        fields.reserve(kFeatureCount + 1);
        for (double v : rec.features) fields.push_back(csv::format_double(v));
        fields.push_back(std::to_string(rec.label));
        out << csv::join(fields) << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + path);
}

Dataset normalize(const Dataset& data) {
    if (data.normalized()) throw std::invalid_argument("dataset is already normalized");
    if (data.records.empty()) throw std::invalid_argument("cannot normalize an empty dataset");

    NormalizationStats stats;
    stats.min = stats.max = data.records.front().features;
    for (const FeatureRecord& rec : data.records) {
        for (int c = 0; c < kFeatureCount; ++c) {
            stats.min[c] = std::min(stats.min[c], rec.features[c]);
            stats.max[c] = std::max(stats.max[c], rec.features[c]);
        }
    }

    Dataset out;
    out.records.reserve(data.records.size());
    for (const FeatureRecord& rec : data.records) {
        FeatureRecord scaled = rec;
        scaled.features = apply_stats(stats, rec.features);
        out.records.push_back(scaled);
    }
    out.stats = stats;
    return out;
}

Dataset denormalize(const Dataset& data) {
    if (!data.normalized()) throw std::invalid_argument("dataset has no normalization stats");
    const NormalizationStats& stats = *data.stats;
    Dataset out;
    out.records.reserve(data.records.size());
    for (const FeatureRecord& rec : data.records) {
        FeatureRecord raw = rec;
        for (int c = 0; c < kFeatureCount; ++c) {
            raw.features[c] = rec.features[c] * (stats.max[c] - stats.min[c]) + stats.min[c];
        }
        out.records.push_back(raw);
    }
    return out;
}

std::array<double, kFeatureCount> apply_stats(const NormalizationStats& stats,
                                              const std::array<double, kFeatureCount>& features) {
    std::array<double, kFeatureCount> out{};
    for (int c = 0; c < kFeatureCount; ++c) {
        double range = stats.max[c] - stats.min[c];
        out[c] = range == 0.0 ? 0.0 : (features[c] - stats.min[c]) / range;
    }
    return out;
}

std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw std::invalid_argument("train fraction must lie strictly between 0 and 1");
    }
    const std::size_t n = data.records.size();
    if (n < 5) throw std::invalid_argument("need at least 5 records to split");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(spec.seed);
    seeds::shuffle(order, rng);

    auto n_train = static_cast<std::size_t>(
        std::llround(spec.train_fraction * static_cast<double>(n)));
    n_train = std::clamp(n_train, std::size_t{1}, n - 1);

    Dataset train, test;
    train.stats = test.stats = data.stats;
    train.records.reserve(n_train);
    test.records.reserve(n - n_train);
    for (std::size_t i = 0; i < n; ++i) {
        (i < n_train ? train : test).records.push_back(data.records[order[i]]);
    }
    return {std::move(train), std::move(test)};
}

std::vector<Dataset> partition(const Dataset& data, int num_clients, std::uint64_t seed) {
    if (num_clients < 1) throw std::invalid_argument("need at least one client");
    const std::size_t n = data.records.size();
    if (n < static_cast<std::size_t>(num_clients)) {
        throw std::invalid_argument("more clients than records");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    seeds::shuffle(order, rng);

    const std::size_t base = n / static_cast<std::size_t>(num_clients);
    const std::size_t extra = n % static_cast<std::size_t>(num_clients);

    std::vector<Dataset> shards(static_cast<std::size_t>(num_clients));
    std::size_t next = 0;
    for (std::size_t s = 0; s < shards.size(); ++s) {
        std::size_t take = base + (s < extra ? 1 : 0);
        shards[s].stats = data.stats;
        shards[s].records.reserve(take);
        for (std::size_t i = 0; i < take; ++i) {
            shards[s].records.push_back(data.records[order[next++]]);
        }
    }
    return shards;
}

GeneratorConfig GeneratorConfig::defaults() {
    GeneratorConfig cfg;
    auto& mal = cfg.ranges[0];
    auto& non = cfg.ranges[1];
    auto& unk = cfg.ranges[2];

    mal[col::profession] = {1, 8, true};
    mal[col::num_requests] = {120, 400, true};
    mal[col::request_type] = {1, 4, true};
    mal[col::data_limit] = {10, 60, true};
    mal[col::historical_data] = {0, 1, true};
    mal[col::leaked_records] = {0, 1, true};
    mal[col::leak_count] = {3, 15, true};
    mal[col::leak_frequency] = {2, 20, true};
    mal[col::data_retention] = {1, 12, true};
    mal[col::leak_ratio] = {3.5, 25.0, false};
    mal[col::user_type] = {1, 3, true};
    mal[col::leak_channel] = {1, 6, true};

    non[col::profession] = {1, 8, true};
    non[col::num_requests] = {5, 150, true};
    non[col::request_type] = {1, 4, true};
    non[col::data_limit] = {5, 40, true};
    non[col::historical_data] = {1, 1, true};
    non[col::leaked_records] = {0, 1, true};
    non[col::leak_count] = {0, 4, true};
    non[col::leak_frequency] = {0, 3, true};
    non[col::data_retention] = {1, 12, true};
    non[col::leak_ratio] = {0.0, 5.0, false};
    non[col::user_type] = {1, 3, true};
    non[col::leak_channel] = {0, 3, true};

    unk[col::profession] = {1, 8, true};
    unk[col::num_requests] = {0, 30, true};
    unk[col::request_type] = {1, 4, true};
    unk[col::data_limit] = {1, 15, true};
    unk[col::historical_data] = {0, 0, true};
    unk[col::leaked_records] = {0, 0, true};
    unk[col::leak_count] = {0, 0, true};
    unk[col::leak_frequency] = {0, 0, true};
    unk[col::data_retention] = {0, 2, true};
    unk[col::leak_ratio] = {0.0, 0.0, false};
    unk[col::user_type] = {1, 3, true};
    unk[col::leak_channel] = {0, 1, true};

    return cfg;
}

GeneratorConfig GeneratorConfig::load(const std::string& path) {
    GeneratorConfig cfg = defaults();
    std::ifstream in = open_input(path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        std::istringstream tokens(line);
        std::string key;
        tokens >> key;
        if (key == "seed") {
            std::string value;
            if (!(tokens >> value)) {
                throw std::runtime_error(line_context(path, line_no) + ": seed needs a value");
            }
            cfg.seed = static_cast<std::uint64_t>(
                csv::parse_int(value, line_context(path, line_no)));
            continue;
        }

        auto dot = key.find('.');
        if (dot == std::string::npos) {
            throw std::runtime_error(line_context(path, line_no) + ": unknown key '" + key + "'");
        }
        std::string class_key = key.substr(0, dot);
        std::string feature_key = key.substr(dot + 1);
        auto class_it = std::find(kClassKeys.begin(), kClassKeys.end(), class_key);
        auto feature_it = std::find(kFeatureNames.begin(), kFeatureNames.end(), feature_key);
        if (class_it == kClassKeys.end() || feature_it == kFeatureNames.end()) {
            throw std::runtime_error(line_context(path, line_no) + ": unknown key '" + key + "'");
        }

        std::string lo, hi, kind;
        if (!(tokens >> lo >> hi >> kind) || (kind != "int" && kind != "real")) {
            throw std::runtime_error(line_context(path, line_no) +
                                     ": expected '<key> <lo> <hi> int|real'");
        }
        FeatureRange range;
        range.lo = csv::parse_double(lo, line_context(path, line_no));
        range.hi = csv::parse_double(hi, line_context(path, line_no));
        range.integral = kind == "int";
        if (range.lo > range.hi) {
            throw std::runtime_error(line_context(path, line_no) + ": lo exceeds hi");
        }
        cfg.ranges[class_it - kClassKeys.begin()][feature_it - kFeatureNames.begin()] = range;
    }
    return cfg;
}

void GeneratorConfig::save(const std::string& path) const {
    std::ofstream out = open_output(path);
    out << "# per-class feature ranges: <class>.<feature> <lo> <hi> int|real\n";
    out << "seed " << seed << '\n';
    for (std::size_t k = 0; k < kClassKeys.size(); ++k) {
        for (int c = 0; c < kFeatureCount; ++c) {
            const FeatureRange& r = ranges[k][c];
            out << kClassKeys[k] << '.' << kFeatureNames[c] << ' ' << csv::format_double(r.lo)
                << ' ' << csv::format_double(r.hi) << ' ' << (r.integral ? "int" : "real")
                << '\n';
        }
    }
    if (!out) throw std::runtime_error("failed writing " + path);
}

Dataset synthesize(long long n, std::uint64_t seed, const std::array<double, 3>& class_mix,
                   const GeneratorConfig& config) {
    if (n < 1) throw std::invalid_argument("record count must be positive");
    double mix_sum = 0.0;
    for (double m : class_mix) {
        if (m < 0.0 || m > 1.0) throw std::invalid_argument("class ratios must lie in [0, 1]");
        mix_sum += m;
    }
    if (std::abs(mix_sum - 1.0) > 1e-9) throw std::invalid_argument("class ratios must sum to 1");

    // Largest-remainder apportionment of n across the three classes.
    std::array<long long, 3> counts{};
    std::array<double, 3> fractions{};
    long long assigned = 0;
    for (int k = 0; k < 3; ++k) {
        double exact = class_mix[k] * static_cast<double>(n);
        counts[k] = static_cast<long long>(std::floor(exact));
        fractions[k] = exact - std::floor(exact);
        assigned += counts[k];
    }
    std::array<int, 3> by_fraction = {0, 1, 2};
    std::stable_sort(by_fraction.begin(), by_fraction.end(),
                     [&](int a, int b) { return fractions[a] > fractions[b]; });
    for (long long i = 0; i < n - assigned; ++i) ++counts[by_fraction[i % 3]];

    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < 3; ++k) {
        labels.insert(labels.end(), static_cast<std::size_t>(counts[k]), k + 1);
    }

    std::mt19937_64 rng(seed);
    seeds::shuffle(labels, rng);

    Dataset out;
    out.records.reserve(labels.size());
    for (int label : labels) {
        FeatureRecord rec;
        rec.label = label;
        const auto& ranges = config.ranges[label - 1];
        for (int c = 0; c < kFeatureCount; ++c) {
            const FeatureRange& r = ranges[c];
            if (r.integral) {
                auto lo = static_cast<long long>(r.lo);
                auto span = static_cast<std::uint64_t>(static_cast<long long>(r.hi) - lo);
                rec.features[c] = static_cast<double>(
                    lo + static_cast<long long>(span == 0 ? 0 : seeds::bounded(rng, span + 1)));
            } else {
                double v = r.lo + seeds::unit_real(rng) * (r.hi - r.lo);
                rec.features[c] = static_cast<double>(std::llround(v * 10.0)) / 10.0;
            }
        }
        out.records.push_back(rec);
    }
    return out;
}

ube::UserHistory KnowledgeBase::history_for(int user_id) const {
    auto it = histories.find(user_id);
    if (it != histories.end()) return it->second;
    ube::UserHistory empty;
    empty.user_id = user_id;
    return empty;
}

ube::AuthorizationSet KnowledgeBase::auth_for(int user_id) const {
    auto it = authorizations.find(user_id);
    return it != authorizations.end() ? it->second : ube::AuthorizationSet{};
}

KnowledgeBase load_knowledge_base(const std::string& history_path, const std::string& auth_path) {
    KnowledgeBase kb;

    {
        std::ifstream in = open_input(history_path);
        std::string line;
        if (!std::getline(in, line) ||
            csv::split_line(line) !=
                std::vector<std::string>{"user_id", "data_id", "category_id", "timestamp",
                                         "authorized", "leaked"}) {
            throw std::runtime_error(history_path + ": bad history header");
        }
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line == "\r") continue;
            auto fields = csv::split_line(line);
            if (fields.size() != 6) {
                throw std::runtime_error(line_context(history_path, line_no) +
                                         ": expected 6 fields");
            }
            auto ctx = line_context(history_path, line_no);
            int user = static_cast<int>(csv::parse_int(fields[0], ctx));
            ube::AccessRecord rec;
            rec.data_id = static_cast<int>(csv::parse_int(fields[1], ctx));
            rec.category_id = static_cast<int>(csv::parse_int(fields[2], ctx));
            rec.timestamp = csv::parse_int(fields[3], ctx);
            rec.authorized = parse_bool(fields[4], ctx);
            rec.leaked = parse_bool(fields[5], ctx);
            auto& history = kb.histories[user];
            history.user_id = user;
            history.records.push_back(rec);
        }
        for (auto& [user, history] : kb.histories) {
            std::stable_sort(history.records.begin(), history.records.end(),
                             [](const ube::AccessRecord& a, const ube::AccessRecord& b) {
                                 return a.timestamp < b.timestamp;
                             });
        }
    }

    {
        std::ifstream in = open_input(auth_path);
        std::string line;
        if (!std::getline(in, line) ||
            csv::split_line(line) !=
                std::vector<std::string>{"user_id", "category_id", "data_id"}) {
            throw std::runtime_error(auth_path + ": bad authorization header");
        }
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line == "\r") continue;
            auto fields = csv::split_line(line);
            if (fields.size() != 3) {
                throw std::runtime_error(line_context(auth_path, line_no) +
                                         ": expected 3 fields");
            }
            auto ctx = line_context(auth_path, line_no);
            int user = static_cast<int>(csv::parse_int(fields[0], ctx));
            int category = static_cast<int>(csv::parse_int(fields[1], ctx));
            int data_id = static_cast<int>(csv::parse_int(fields[2], ctx));
            kb.authorizations[user].add(category, data_id);
        }
    }

    return kb;
}

void save_history_csv(const std::string& path, const KnowledgeBase& kb) {
    std::ofstream out = open_output(path);
    out << "user_id,data_id,category_id,timestamp,authorized,leaked\n";
    for (const auto& [user, history] : kb.histories) {
        for (const ube::AccessRecord& rec : history.records) {
            out << user << ',' << rec.data_id << ',' << rec.category_id << ',' << rec.timestamp
                << ',' << (rec.authorized ? 1 : 0) << ',' << (rec.leaked ? 1 : 0) << '\n';
        }
    }
    if (!out) throw std::runtime_error("failed writing " + path);
}

void save_authorization_csv(const std::string& path, const KnowledgeBase& kb) {
    std::ofstream out = open_output(path);
    out << "user_id,category_id,data_id\n";
    for (const auto& [user, auths] : kb.authorizations) {
        for (const auto& [category, data_id] : auths.entries()) {
            out << user << ',' << category << ',' << data_id << '\n';
        }
    }
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace fedscreen::data
