#include "fedscreen/ube.hpp"

#include <stdexcept>
#include <string>

namespace fedscreen::ube {

void UserHistory::validate() const {
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].timestamp < records[i - 1].timestamp) {
            throw std::invalid_argument("user " + std::to_string(user_id) +
                                        ": history records out of timestamp order");
        }
    }
}

void TimeWindow::validate() const {
    if (start > end) throw std::invalid_argument("time window start is after its end");
}

void SecurityThresholds::validate() const {
    if (!(thr_attack >= 0.0 && thr_attack <= 1.0) || !(thr_freq >= 0.0 && thr_freq <= 1.0)) {
        throw std::invalid_argument("security thresholds must lie in [0, 1]");
    }
}

std::vector<std::pair<std::string, int>> SecurityAssessment::flag_list() const {
    return {{"history", sigma_history},
            {"authorization", sigma_authorized},
            {"attack", sigma_attack},
            {"leak", sigma_leak}};
}

int history_status(const UserHistory& history) {
    return history.records.empty() ? 1 : 0;
}

int authorization_status(const AccessRequest& request, const AuthorizationSet& auth) {
    return auth.contains(request.category_id, request.data_id) ? 0 : 1;
}

long long malicious_distribution_count(const UserHistory& history, const TimeWindow& window) {
    window.validate();
    long long count = 0;
    for (const AccessRecord& rec : history.records) {
        if (rec.leaked && window.contains(rec.timestamp)) ++count;
    }
    return count;
}

double attack_factor(long long dd_mal, long long da_total) {
    if (dd_mal < 0 || da_total < 0) {
        throw std::invalid_argument("attack factor counts must be non-negative");
    }
    if (dd_mal > da_total) {
        throw std::invalid_argument("malicious access count exceeds total access count");
    }
    if (da_total == 0) return 0.0;
    return static_cast<double>(dd_mal) / static_cast<double>(da_total);
}

double leak_frequency(const UserHistory& history, const AuthorizationSet& auth,
                      const TimeWindow& window) {
    window.validate();
    long long total = 0;
    long long unauthorized = 0;
    for (const AccessRecord& rec : history.records) {
        if (!window.contains(rec.timestamp)) continue;
        ++total;
        if (!auth.contains(rec.category_id, rec.data_id)) ++unauthorized;
    }
    if (total == 0) return 0.0;
    return static_cast<double>(unauthorized) / static_cast<double>(total);
}

int attack_flag(double kappa, const SecurityThresholds& thresholds) {
    return thresholds.thr_attack > kappa ? 0 : 1;
}

int leak_flag(double freq, const SecurityThresholds& thresholds) {
    return thresholds.thr_freq > freq ? 0 : 1;
}

SecurityAssessment assess(const AccessRequest& request, const UserHistory& history,
                          const AuthorizationSet& auth, const TimeWindow& window,
                          const SecurityThresholds& thresholds) {
    window.validate();
    thresholds.validate();
    history.validate();
    if (!history.records.empty() && request.timestamp < history.records.back().timestamp) {
        throw std::invalid_argument("request predates the end of the user's history");
    }

    SecurityAssessment out;
    out.sigma_history = history_status(history);
    out.sigma_authorized = authorization_status(request, auth);

    long long in_window = 0;
    for (const AccessRecord& rec : history.records) {
        if (window.contains(rec.timestamp)) ++in_window;
    }
    out.attack_factor = attack_factor(malicious_distribution_count(history, window), in_window);
    out.sigma_attack = attack_flag(out.attack_factor, thresholds);

    out.leak_frequency = leak_frequency(history, auth, window);
    out.sigma_leak = leak_flag(out.leak_frequency, thresholds);

    out.sigma_total =
        out.sigma_history + out.sigma_authorized + out.sigma_attack + out.sigma_leak;
    out.intent = out.sigma_total >= 1 ? Intent::Malicious : Intent::NonMalicious;
    out.risk_record = {request.user_id, request.data_id, out.intent, window};
    return out;
}

}  // namespace fedscreen::ube
