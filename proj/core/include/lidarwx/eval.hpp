#pragma once

#include <string>
#include <vector>

#include "lidarwx/types.hpp"

namespace lidarwx {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }
    ConfusionCounts& operator+=(const ConfusionCounts& other) {
        tp += other.tp;
        fp += other.fp;
        fn += other.fn;
        tn += other.tn;
        return *this;
    }
};

/// Metrics as percentages in [0, 100]. "iou" is the single-class IoU of the
/// noise class (often reported as "mIoU"). degenerate marks entries where
/// a zero denominator forced a metric to 0.
struct MetricsEntry {
    std::string scope;
    ConfusionCounts counts;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double iou = 0.0;
    bool degenerate = false;
};

struct MetricsReport {
    std::vector<MetricsEntry> per_frame;
    MetricsEntry micro;  // pooled counts, the headline aggregate
    MetricsEntry macro;  // mean of per-frame metrics, informational
};

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt);

MetricsEntry metrics(const ConfusionCounts& counts, const std::string& scope = "");

/// F1 = 2 P R / (P + R); inputs and output in percent. Returns 0 at P+R=0.
double f1_from_pr(double precision, double recall);
/// IoU = F1 / (2 - F1) with percent scaling; returns 100 at F1 = 100.
double iou_from_f1(double f1);

MetricsReport aggregate(const std::vector<MetricsEntry>& per_frame);

std::string report_text(const MetricsReport& report);
std::string report_csv(const MetricsReport& report);

}  // namespace lidarwx
