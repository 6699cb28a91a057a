#pragma once

#include <array>
#include <vector>

namespace fedscreen::metrics {

// Rows are true classes, columns predicted; labels 1..3 map to indices 0..2.
struct ConfusionMatrix {
    std::array<std::array<long long, 3>, 3> counts{};

    long long total() const;
    long long trace() const;
};

ConfusionMatrix confusion(const std::vector<int>& true_labels,
                          const std::vector<int>& predicted_labels);

// One-vs-rest reduction for a single class.
struct PerClassMetrics {
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
    long long tn = 0;
    long long support = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

std::array<PerClassMetrics, 3> per_class(const ConfusionMatrix& cm);

// Support-weighted averages. Weighted recall telescopes to trace/total,
// which is also the accuracy, so those two fields always coincide.
struct MetricsReport {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

MetricsReport report(const ConfusionMatrix& cm);

}  // namespace fedscreen::metrics
