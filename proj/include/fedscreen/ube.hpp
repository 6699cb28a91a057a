#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fedscreen::ube {

// One past access by a user. `authorized` records what the grant decision
// was at the time; `leaked` marks accesses later tied to a data leak.
struct AccessRecord {
    int data_id = 0;
    int category_id = 0;
    std::int64_t timestamp = 0;
    bool authorized = false;
    bool leaked = false;
};

struct UserHistory {
    int user_id = 0;
    std::vector<AccessRecord> records;

    // Records must be sorted by timestamp (ties allowed).
    void validate() const;
};

// Pairs of (category_id, data_id) a user may access.
class AuthorizationSet {
public:
    void add(int category_id, int data_id) { pairs_.emplace(category_id, data_id); }
    bool contains(int category_id, int data_id) const {
        return pairs_.count({category_id, data_id}) > 0;
    }
    std::size_t size() const { return pairs_.size(); }
    const std::set<std::pair<int, int>>& entries() const { return pairs_; }

private:
    std::set<std::pair<int, int>> pairs_;
};

struct AccessRequest {
    int user_id = 0;
    int data_id = 0;
    int category_id = 0;
    std::int64_t timestamp = 0;
};

// Closed interval of timestamps the risk evaluation looks at.
struct TimeWindow {
    std::int64_t start = 0;
    std::int64_t end = 0;

    bool contains(std::int64_t ts) const { return ts >= start && ts <= end; }
    void validate() const;
};

struct SecurityThresholds {
    double thr_attack = 0.5;  // flag raised when the attack factor reaches this
    double thr_freq = 0.3;    // flag raised when the leak frequency reaches this

    void validate() const;
};

enum class Intent { NonMalicious = 0, Malicious = 1 };

struct RiskRecord {
    int user_id = 0;
    int data_id = 0;
    Intent intent = Intent::NonMalicious;
    TimeWindow window;
};

// Outcome of evaluating one request against a user's history. Each flag is
// 0 (clean) or 1 (suspicious); any raised flag marks the intent malicious.
struct SecurityAssessment {
    int sigma_history = 0;     // 1 when the user has no recorded past
    int sigma_authorized = 0;  // 1 when the requested pair is not authorized
    int sigma_attack = 0;      // 1 when the attack factor reaches its threshold
    int sigma_leak = 0;        // 1 when the leak frequency reaches its threshold
    double attack_factor = 0.0;
    double leak_frequency = 0.0;
    int sigma_total = 0;
    Intent intent = Intent::NonMalicious;
    RiskRecord risk_record;

    // Named flags in a fixed order, so callers can print or extend the
    // parameter set without caring about the struct layout.
    std::vector<std::pair<std::string, int>> flag_list() const;
};

// 0 when the user has at least one record, 1 for an unknown user.
int history_status(const UserHistory& history);

// 0 when (category, data) is in the set, 1 otherwise.
int authorization_status(const AccessRequest& request, const AuthorizationSet& auth);

// Number of in-window records marked leaked.
long long malicious_distribution_count(const UserHistory& history, const TimeWindow& window);

// malicious / total accesses. Zero total means no observable attack (0.0).
double attack_factor(long long dd_mal, long long da_total);

// Share of in-window accesses not covered by the authorization set.
double leak_frequency(const UserHistory& history, const AuthorizationSet& auth,
                      const TimeWindow& window);

// Strict comparisons: the flag stays clean only while the threshold
// exceeds the measured value, so hitting it exactly already raises it.
int attack_flag(double kappa, const SecurityThresholds& thresholds);
int leak_flag(double freq, const SecurityThresholds& thresholds);

SecurityAssessment assess(const AccessRequest& request, const UserHistory& history,
                          const AuthorizationSet& auth, const TimeWindow& window,
                          const SecurityThresholds& thresholds);

}  // namespace fedscreen::ube
