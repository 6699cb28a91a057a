#include <doctest.h>

#include <random>

#include "fedscreen/gate.hpp"
#include "fedscreen/seeds.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace fedscreen;

namespace {

// Zero-weight model whose output biases force a fixed prediction.
fed::GlobalModel biased_model(int favoured_class) {
    fed::GlobalModel global;
    global.spec = model::NetworkSpec::afed();
    global.params.values.assign(global.spec.param_count(), 0.0);
    global.params.fingerprint = global.spec.fingerprint();
    const std::size_t nb = global.spec.param_count();
    global.params.values[nb - 3 + favoured_class - 1] = 5.0;
    return global;
}

ube::SecurityAssessment assessment_with_total(int total) {
    ube::SecurityAssessment a;
    a.sigma_history = total > 0 ? 1 : 0;
    a.sigma_authorized = total > 1 ? 1 : 0;
    a.sigma_attack = total > 2 ? 1 : 0;
    a.sigma_leak = total > 3 ? 1 : 0;
    a.sigma_total = total;
    a.intent = total >= 1 ? ube::Intent::Malicious : ube::Intent::NonMalicious;
    return a;
}

}  // namespace

TEST_CASE("either trigger denies, and the model names the reason first") {
    ube::AccessRequest req{4, 2, 1, 100};
    std::array<double, data::kFeatureCount> x{};

    struct Case {
        int predicted;
        int sigma_total;
        gate::Verdict verdict;
        gate::Reason reason;
    };
    const Case table[] = {
        {1, 0, gate::Verdict::Denied, gate::Reason::ModelMalicious},
        {1, 2, gate::Verdict::Denied, gate::Reason::ModelMalicious},
        {2, 1, gate::Verdict::Denied, gate::Reason::UbeMalicious},
        {2, 0, gate::Verdict::Granted, gate::Reason::Clean},
        {3, 0, gate::Verdict::Granted, gate::Reason::Clean},
        {3, 4, gate::Verdict::Denied, gate::Reason::UbeMalicious},
    };

    for (const Case& c : table) {
        CAPTURE(c.predicted);
        CAPTURE(c.sigma_total);
        gate::AccessDecision d = gate::decide(req, x, assessment_with_total(c.sigma_total),
                                              biased_model(c.predicted));
        CHECK(d.verdict == c.verdict);
        CHECK(d.reason == c.reason);
        CHECK(d.predicted_class == c.predicted);
        CHECK(d.request.user_id == 4);
        CHECK((d.ube_intent == ube::Intent::Malicious) == (c.sigma_total >= 1));
    }
}

TEST_CASE("decisions are internally consistent on random inputs") {
    std::mt19937_64 rng(314);
    ube::AccessRequest req{1, 1, 1, 10};
    for (int trial = 0; trial < 150; ++trial) {
        fed::GlobalModel global;
        global.spec = model::NetworkSpec::afed();
        global.params = oracles::random_params(global.spec, rng);
        std::array<double, data::kFeatureCount> x{};
        for (double& v : x) v = seeds::unit_real(rng);
        ube::SecurityAssessment a =
            assessment_with_total(static_cast<int>(seeds::bounded(rng, 5)));

        gate::AccessDecision d = gate::decide(req, x, a, global);
        const bool model_fired = d.predicted_class == 1;
        const bool ube_fired = a.intent == ube::Intent::Malicious;
        CHECK((d.verdict == gate::Verdict::Denied) == (model_fired || ube_fired));
        if (model_fired) {
            CHECK(d.reason == gate::Reason::ModelMalicious);
        } else if (ube_fired) {
            CHECK(d.reason == gate::Reason::UbeMalicious);
        } else {
            CHECK(d.reason == gate::Reason::Clean);
        }
        CHECK(d.predicted_class == model::predict(global.params, global.spec, x));
    }
}

TEST_CASE("clearing flags never turns a grant into a denial") {
    ube::AccessRequest req{1, 1, 1, 10};
    std::array<double, data::kFeatureCount> x{};
    fed::GlobalModel benign = biased_model(2);
    for (int total = 4; total >= 1; --total) {
        gate::AccessDecision more = gate::decide(req, x, assessment_with_total(total), benign);
        gate::AccessDecision less =
            gate::decide(req, x, assessment_with_total(total - 1), benign);
        if (less.verdict == gate::Verdict::Denied) {
            CHECK(more.verdict == gate::Verdict::Denied);
        }
    }
}

TEST_CASE("names match the log vocabulary") {
    CHECK(std::string(gate::verdict_name(gate::Verdict::Granted)) == "granted");
    CHECK(std::string(gate::verdict_name(gate::Verdict::Denied)) == "denied");
    CHECK(std::string(gate::reason_name(gate::Reason::ModelMalicious)) == "model_malicious");
    CHECK(std::string(gate::reason_name(gate::Reason::UbeMalicious)) == "ube_malicious");
    CHECK(std::string(gate::reason_name(gate::Reason::Clean)) == "clean");
}

TEST_CASE("the decision log captures verdicts line by line") {
    auto dir = testutil::scratch_dir("gate_log");
    ube::AccessRequest r1{7, 3, 1, 50};
    ube::AccessRequest r2{8, 4, 2, 60};
    std::array<double, data::kFeatureCount> x{};

    gate::AccessDecision d1 = gate::decide(r1, x, assessment_with_total(0), biased_model(1));
    gate::AccessDecision d2 = gate::decide(r2, x, assessment_with_total(2), biased_model(2));

    auto path = dir / "decisions.csv";
    gate::write_decision_log(path.string(),
                             {{d1, assessment_with_total(0)}, {d2, assessment_with_total(2)}});
    CHECK(testutil::slurp(path) ==
          "user_id,data_id,predicted_class,sigma_total,verdict,reason\n"
          "7,3,1,0,denied,model_malicious\n"
          "8,4,2,2,denied,ube_malicious\n");
}
