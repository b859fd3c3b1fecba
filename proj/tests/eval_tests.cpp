#include <doctest.h>

#include "lidarwx/eval.hpp"
#include "lidarwx/rng.hpp"

using namespace lidarwx;

TEST_CASE("confusion counting basics") {
    const BinaryMask all_true(5, true);
    const ConfusionCounts a = confusion(all_true, all_true);
    CHECK(a.tp == 5);
    CHECK(a.fp == 0);
    CHECK(a.fn == 0);
    CHECK(a.tn == 0);

    BinaryMask pred(4), gt(4);
    pred[0] = pred[1] = true;
    gt[2] = gt[3] = true;  // pred = !gt
    const ConfusionCounts b = confusion(pred, gt);
    CHECK(b.tp == 0);
    CHECK(b.tn == 0);
    CHECK(b.fp == 2);
    CHECK(b.fn == 2);

    CHECK_THROWS_AS(confusion(BinaryMask(3), BinaryMask(4)), InvalidArgument);
}

TEST_CASE("confusion matches a naive recount on random masks") {
    Rng rng(31);
    BinaryMask pred(200), gt(200);
    for (std::size_t i = 0; i < 200; ++i) {
        pred[i] = rng.next_double() < 0.3;
        gt[i] = rng.next_double() < 0.4;
    }
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < 200; ++i) {
        if (pred[i] && gt[i]) ++tp;
        else if (pred[i]) ++fp;
        else if (gt[i]) ++fn;
        else ++tn;
    }
    const ConfusionCounts counts = confusion(pred, gt);
    CHECK(counts.tp == tp);
    CHECK(counts.fp == fp);
    CHECK(counts.fn == fn);
    CHECK(counts.tn == tn);
    CHECK(counts.total() == 200);
}

TEST_CASE("metric hand arithmetic: TP=90, FP=10, FN=10") {
    const MetricsEntry entry = metrics({90, 10, 10, 0});
    CHECK(entry.precision == doctest::Approx(90.0));
    CHECK(entry.recall == doctest::Approx(90.0));
    CHECK(entry.f1 == doctest::Approx(90.0));
    CHECK(entry.iou == doctest::Approx(81.82).epsilon(0.001));
    CHECK(!entry.degenerate);
}

TEST_CASE("zero TP degenerates all metrics to zero") {
    const MetricsEntry entry = metrics({0, 5, 5, 10});
    CHECK(entry.precision == 0.0);
    CHECK(entry.recall == 0.0);
    CHECK(entry.f1 == 0.0);
    CHECK(entry.iou == 0.0);
    CHECK(entry.degenerate);
}

TEST_CASE("metrics are invariant to uniform count scaling") {
    const MetricsEntry base = metrics({37, 11, 5, 900});
    const MetricsEntry scaled = metrics({37 * 7, 11 * 7, 5 * 7, 900 * 7});
    CHECK(base.precision == doctest::Approx(scaled.precision));
    CHECK(base.recall == doctest::Approx(scaled.recall));
    CHECK(base.f1 == doctest::Approx(scaled.f1));
    CHECK(base.iou == doctest::Approx(scaled.iou));
}

TEST_CASE("f1/iou identities hold on random counts") {
    Rng rng(32);
    for (int trial = 0; trial < 200; ++trial) {
        const ConfusionCounts counts{1 + rng.next_u64() % 1000, rng.next_u64() % 1000,
                                     rng.next_u64() % 1000, rng.next_u64() % 1000};
        const MetricsEntry entry = metrics(counts);
        const double f1 = f1_from_pr(entry.precision, entry.recall);
        CHECK(entry.f1 == doctest::Approx(f1).epsilon(1e-9));
        CHECK(entry.iou == doctest::Approx(iou_from_f1(entry.f1)).epsilon(1e-9));
        // Direct single-class IoU definition.
        const double direct =
            100.0 * double(counts.tp) / double(counts.tp + counts.fp + counts.fn);
        CHECK(entry.iou == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("published benchmark spot values") {
    // DSOR-class precision/recall pair.
    const double f1 = f1_from_pr(65.92, 90.93);
    CHECK(f1 == doctest::Approx(76.43).epsilon(0.0002));
    CHECK(iou_from_f1(f1) == doctest::Approx(61.86).epsilon(0.0005));
    CHECK(iou_from_f1(88.28) == doctest::Approx(79.02).epsilon(0.0002));
    CHECK(iou_from_f1(95.13) == doctest::Approx(90.71).epsilon(0.0006));
    CHECK(iou_from_f1(100.0) == doctest::Approx(100.0));
    CHECK(f1_from_pr(0.0, 0.0) == 0.0);
}

TEST_CASE("aggregate micro pools counts; macro averages metrics") {
    const MetricsEntry a = metrics({1, 0, 0, 9}, "f0");
    const MetricsEntry b = metrics({0, 1, 1, 8}, "f1");
    const MetricsReport report = aggregate({a, b});
    CHECK(report.micro.precision == doctest::Approx(50.0));
    CHECK(report.micro.recall == doctest::Approx(50.0));
    CHECK(report.per_frame.size() == 2);

    const MetricsReport single = aggregate({a});
    CHECK(single.micro.precision == doctest::Approx(a.precision));
    CHECK(single.micro.iou == doctest::Approx(a.iou));

    const MetricsReport twin = aggregate({a, a});
    CHECK(twin.micro.f1 == doctest::Approx(a.f1));
    CHECK(twin.macro.f1 == doctest::Approx(a.f1));

    CHECK_THROWS_AS(aggregate({}), InvalidArgument);
}

TEST_CASE("report serializations carry the headline numbers") {
    const MetricsEntry a = metrics({90, 10, 10, 890}, "seq/frame");
    const MetricsReport report = aggregate({a});
    const std::string text = report_text(report);
    CHECK(text.find("micro") != std::string::npos);
    const std::string csv = report_csv(report);
    CHECK(csv.rfind("scope,tp,fp,fn,tn,precision,recall,f1,iou", 0) == 0);
    CHECK(csv.find("seq/frame,90,10,10,890") != std::string::npos);
}
