#include "fedscreen/gate.hpp"

#include <fstream>
#include <stdexcept>

#include "fedscreen/model.hpp"

namespace fedscreen::gate {

const char* verdict_name(Verdict verdict) {
    return verdict == Verdict::Granted ? "granted" : "denied";
}

const char* reason_name(Reason reason) {
    switch (reason) {
        case Reason::ModelMalicious: return "model_malicious";
        case Reason::UbeMalicious: return "ube_malicious";
        case Reason::Clean: return "clean";
    }
    return "clean";
}

AccessDecision decide(const ube::AccessRequest& request,
                      const std::array<double, data::kFeatureCount>& features,
                      const ube::SecurityAssessment& assessment, const fed::GlobalModel& global) {
    AccessDecision out;
    out.request = request;
    out.predicted_class = model::predict(global.params, global.spec, features);
    out.ube_intent = assessment.intent;

    const bool model_malicious =
        out.predicted_class == static_cast<int>(data::ClassLabel::Malicious);
    const bool ube_malicious = assessment.intent == ube::Intent::Malicious;

    if (model_malicious) {
        out.verdict = Verdict::Denied;
        out.reason = Reason::ModelMalicious;
    } else if (ube_malicious) {
        out.verdict = Verdict::Denied;
        out.reason = Reason::UbeMalicious;
    } else {
        out.verdict = Verdict::Granted;
        out.reason = Reason::Clean;
    }
    return out;
}

void write_decision_log(
    const std::string& path,
    const std::vector<std::pair<AccessDecision, ube::SecurityAssessment>>& rows) {
    std::ofstream out(path);
    if (!out.is_open()) throw std::runtime_error("cannot open " + path + " for writing");
    out << "user_id,data_id,predicted_class,sigma_total,verdict,reason\n";
    for (const auto& [decision, assessment] : rows) {
        out << decision.request.user_id << ',' << decision.request.data_id << ','
            << decision.predicted_class << ',' << assessment.sigma_total << ','
            << verdict_name(decision.verdict) << ',' << reason_name(decision.reason) << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace fedscreen::gate
