#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fedscreen/dataset.hpp"

namespace fedscreen::model {

enum class Variant { AFed, DFed };

std::string variant_name(Variant variant);
Variant parse_variant(const std::string& name);

// Feedforward net shape: ReLU hidden layers, softmax output. AFed is the
// single-hidden-layer variant, DFed the deeper one.
struct NetworkSpec {
    std::vector<int> layer_sizes;
    Variant variant = Variant::AFed;

    static NetworkSpec afed() { return {{data::kFeatureCount, 16, 3}, Variant::AFed}; }
    static NetworkSpec dfed() { return {{data::kFeatureCount, 32, 16, 3}, Variant::DFed}; }

    void validate() const;
    std::size_t param_count() const;
    // Hash of shape + variant; binds a ParameterVector to its architecture.
    std::uint64_t fingerprint() const;
};

// Flat parameter storage: every weight matrix (row-major, output index
// major) in layer order, then every bias vector in layer order.
struct ParameterVector {
    std::vector<double> values;
    std::uint64_t fingerprint = 0;
};

struct TrainingConfig {
    int epochs = 90;
    int batch_size = 32;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 0;

    void validate() const;
};

// Scaled-uniform weights in (-1/sqrt(fan_in), 1/sqrt(fan_in)), zero biases.
ParameterVector init_params(const NetworkSpec& spec, std::uint64_t seed);

std::array<double, 3> forward(const ParameterVector& params, const NetworkSpec& spec,
                              const std::array<double, data::kFeatureCount>& features);

// Mean categorical cross-entropy; probabilities clamped at 1e-12.
double loss(const ParameterVector& params, const NetworkSpec& spec,
            const std::vector<data::FeatureRecord>& batch);

// Exact gradient of `loss`, same layout as the parameters.
ParameterVector gradient(const ParameterVector& params, const NetworkSpec& spec,
                         const std::vector<data::FeatureRecord>& batch);

struct TrainResult {
    ParameterVector params;
    double final_loss = 0.0;
};

// Mini-batch Adam for config.epochs passes over the shard. Batch order is
// reshuffled each epoch from config.seed; moments start at zero. The
// reported loss is the mean pre-update loss over the final epoch.
TrainResult train_local(const ParameterVector& params, const NetworkSpec& spec,
                        const data::Dataset& shard, const TrainingConfig& config);

// Argmax class in {1,2,3}; ties resolve to the lowest index.
int predict(const ParameterVector& params, const NetworkSpec& spec,
            const std::array<double, data::kFeatureCount>& features);

struct Checkpoint {
    ParameterVector params;
    NetworkSpec spec;
    std::map<std::string, std::string> meta;
};

// Text format, hex floats, bit-exact round trip.
void save_checkpoint(const std::string& path, const ParameterVector& params,
                     const NetworkSpec& spec, const std::map<std::string, std::string>& meta);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace fedscreen::model
