#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "fedscreen/fed.hpp"
#include "fedscreen/ube.hpp"

namespace fedscreen::gate {

enum class Verdict { Granted, Denied };

// Which trigger produced the verdict; the model outranks the behaviour
// flags in labeling when both fire.
enum class Reason { ModelMalicious, UbeMalicious, Clean };

const char* verdict_name(Verdict verdict);
const char* reason_name(Reason reason);

struct AccessDecision {
    ube::AccessRequest request;
    int predicted_class = 0;
    ube::Intent ube_intent = ube::Intent::NonMalicious;
    Verdict verdict = Verdict::Granted;
    Reason reason = Reason::Clean;
};

// Denies when either the classifier calls the user malicious or any
// behaviour flag is raised; a prediction of Unknown never denies by itself.
AccessDecision decide(const ube::AccessRequest& request,
                      const std::array<double, data::kFeatureCount>& features,
                      const ube::SecurityAssessment& assessment, const fed::GlobalModel& global);

void write_decision_log(
    const std::string& path,
    const std::vector<std::pair<AccessDecision, ube::SecurityAssessment>>& rows);

}  // namespace fedscreen::gate
