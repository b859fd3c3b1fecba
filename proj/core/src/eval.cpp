#include "lidarwx/eval.hpp"

#include <iomanip>
#include <sstream>

namespace lidarwx {

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
    require(pred.size() == gt.size(), "confusion: mask length mismatch");
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] && gt[i]) {
            ++c.tp;
        } else if (pred[i] && !gt[i]) {
            ++c.fp;
        } else if (!pred[i] && gt[i]) {
            ++c.fn;
        } else {
            ++c.tn;
        }
    }
    return c;
}

MetricsEntry metrics(const ConfusionCounts& counts, const std::string& scope) {
    MetricsEntry e;
    e.scope = scope;
    e.counts = counts;
    const double tp = static_cast<double>(counts.tp);
    if (counts.tp + counts.fp > 0) {
        e.precision = 100.0 * tp / static_cast<double>(counts.tp + counts.fp);
    } else {
        e.degenerate = true;
    }
    if (counts.tp + counts.fn > 0) {
        e.recall = 100.0 * tp / static_cast<double>(counts.tp + counts.fn);
    } else {
        e.degenerate = true;
    }
    e.f1 = f1_from_pr(e.precision, e.recall);
    if (counts.tp + counts.fp + counts.fn > 0) {
        e.iou = 100.0 * tp / static_cast<double>(counts.tp + counts.fp + counts.fn);
    } else {
        e.degenerate = true;
    }
    if (counts.tp == 0) e.degenerate = true;
    return e;
}

double f1_from_pr(double precision, double recall) {
    if (precision + recall <= 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double iou_from_f1(double f1) {
    // Percent form of IoU = F1 / (2 - F1).
    if (f1 >= 200.0) return 100.0;
    return 100.0 * f1 / (200.0 - f1);
}

MetricsReport aggregate(const std::vector<MetricsEntry>& per_frame) {
    require(!per_frame.empty(), "aggregate: no reports");
    MetricsReport report;
    report.per_frame = per_frame;

    ConfusionCounts pooled;
    double p_sum = 0, r_sum = 0, f1_sum = 0, iou_sum = 0;
    for (const auto& e : per_frame) {
        pooled += e.counts;
        p_sum += e.precision;
        r_sum += e.recall;
        f1_sum += e.f1;
        iou_sum += e.iou;
    }
    report.micro = metrics(pooled, "micro");

    const double inv = 1.0 / static_cast<double>(per_frame.size());
    report.macro.scope = "macro";
    report.macro.counts = pooled;
    report.macro.precision = p_sum * inv;
    report.macro.recall = r_sum * inv;
    report.macro.f1 = f1_sum * inv;
    report.macro.iou = iou_sum * inv;
    return report;
}

namespace {
void entry_csv_row(std::ostringstream& out, const MetricsEntry& e) {
    out << e.scope << ',' << e.counts.tp << ',' << e.counts.fp << ',' << e.counts.fn << ','
        << e.counts.tn << ',' << std::fixed << std::setprecision(4) << e.precision << ','
        << e.recall << ',' << e.f1 << ',' << e.iou << '\n';
}
}  // namespace

std::string report_text(const MetricsReport& report) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    auto line = [&out](const MetricsEntry& e) {
        out << e.scope << ": precision=" << e.precision << " recall=" << e.recall
            << " f1=" << e.f1 << " noise-iou(mIoU)=" << e.iou << " [tp=" << e.counts.tp
            << " fp=" << e.counts.fp << " fn=" << e.counts.fn << " tn=" << e.counts.tn << ']';
        if (e.degenerate) out << " (degenerate)";
        out << '\n';
    };
    for (const auto& e : report.per_frame) line(e);
    line(report.micro);
    line(report.macro);
    return out.str();
}

std::string report_csv(const MetricsReport& report) {
    std::ostringstream out;
    out << "scope,tp,fp,fn,tn,precision,recall,f1,iou\n";
    for (const auto& e : report.per_frame) entry_csv_row(out, e);
    entry_csv_row(out, report.micro);
    entry_csv_row(out, report.macro);
    return out.str();
}

}  // namespace lidarwx
