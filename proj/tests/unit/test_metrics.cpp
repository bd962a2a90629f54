#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sockspot/errors.hpp"
#include "sockspot/metrics.hpp"
#include "sockspot/rng.hpp"

using namespace sockspot;

namespace {

// brute-force rank oracle: P[score_pos > score_neg] + 0.5 P[tie]
double auc_pair_counting(const std::vector<double>& scores, const std::vector<int8_t>& truth) {
    double num = 0;
    int64_t pairs = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
        if (truth[i] != 1)
            continue;
        for (size_t j = 0; j < scores.size(); ++j) {
            if (truth[j] != 0)
                continue;
            ++pairs;
            if (scores[i] > scores[j])
                num += 1.0;
            else if (scores[i] == scores[j])
                num += 0.5;
        }
    }
    return num / static_cast<double>(pairs);
}

} // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("confusion on degenerate and random inputs") {
    std::vector<int8_t> ones(10, 1);
    Confusion all = confusion(ones, ones);
    CHECK(all.tp == 10);
    CHECK(all.fp + all.tn + all.fn == 0);

    std::vector<int8_t> flipped(10);
    for (int i = 0; i < 10; ++i)
        flipped[i] = static_cast<int8_t>(1 - ones[i]);
    Confusion inv = confusion(flipped, ones);
    CHECK(inv.tp == 0);
    CHECK(inv.tn == 0);
    CHECK(inv.fn == 10);

    Rng rng(7);
    std::vector<int8_t> pred(200), truth(200);
    for (int i = 0; i < 200; ++i) {
        pred[i] = static_cast<int8_t>(rng.below(2));
        truth[i] = static_cast<int8_t>(rng.below(2));
    }
    Confusion cm = confusion(pred, truth);
    int64_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (int i = 0; i < 200; ++i) {
        if (pred[i] == 1 && truth[i] == 1)
            ++tp;
        if (pred[i] == 1 && truth[i] == 0)
            ++fp;
        if (pred[i] == 0 && truth[i] == 0)
            ++tn;
        if (pred[i] == 0 && truth[i] == 1)
            ++fn;
    }
    CHECK(cm.tp == tp);
    CHECK(cm.fp == fp);
    CHECK(cm.tn == tn);
    CHECK(cm.fn == fn);
    CHECK(cm.total() == 200);

    CHECK_THROWS_AS(confusion(ones, flipped = std::vector<int8_t>(3)), DataError);
}

TEST_CASE("rates: direct substitution and degenerate denominators") {
    Rates r = rates({3, 1, 4, 2});
    CHECK(r.precision == doctest::Approx(0.75));
    CHECK(r.recall == doctest::Approx(0.6));
    CHECK(r.f1 == doctest::Approx(2.0 * 3 / (2 * 3 + 1 + 2)));
    CHECK(r.accuracy == doctest::Approx(0.7));

    Rates degenerate = rates({0, 0, 5, 0});
    CHECK_FALSE(degenerate.precision_defined);
    CHECK_FALSE(degenerate.recall_defined);
    CHECK(degenerate.precision == 0.0);
    CHECK(degenerate.accuracy == 1.0);

    Rates perfect = rates({4, 0, 6, 0});
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.f1 == 1.0);
    CHECK(perfect.accuracy == 1.0);
}

TEST_CASE("f1 equals the harmonic mean whenever defined") {
    Rng rng(13);
    for (int rep = 0; rep < 50; ++rep) {
        Confusion cm{static_cast<int64_t>(rng.below(20) + 1), static_cast<int64_t>(rng.below(20)),
                     static_cast<int64_t>(rng.below(20)), static_cast<int64_t>(rng.below(20))};
        Rates r = rates(cm);
        if (r.precision_defined && r.recall_defined && r.precision + r.recall > 0) {
            double harmonic = 2 * r.precision * r.recall / (r.precision + r.recall);
            CHECK(r.f1 == doctest::Approx(harmonic).epsilon(1e-12));
        }
    }
}

TEST_CASE("auc: perfect, random-equivalent, and oracle equality with ties") {
    std::vector<double> s1 = {0, 1, 0, 1};
    std::vector<int8_t> t1 = {0, 1, 0, 1};
    CHECK(roc_auc(s1, t1) == 1.0);

    std::vector<double> s2 = {0.4, 0.4, 0.4, 0.4};
    CHECK(roc_auc(s2, t1) == 0.5);

    Rng rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> scores(100);
        std::vector<int8_t> truth(100);
        bool both = false;
        for (int i = 0; i < 100; ++i) {
            scores[i] = static_cast<double>(rng.below(12)) / 3.0; // force ties
            truth[i] = static_cast<int8_t>(rng.below(2));
        }
        truth[0] = 1;
        truth[1] = 0;
        both = true;
        (void)both;
        CHECK(roc_auc(scores, truth) ==
              doctest::Approx(auc_pair_counting(scores, truth)).epsilon(1e-12));
    }
}

TEST_CASE("auc invariances") {
    Rng rng(31);
    std::vector<double> scores(80);
    std::vector<int8_t> truth(80);
    for (int i = 0; i < 80; ++i) {
        scores[i] = rng.normal();
        truth[i] = static_cast<int8_t>(rng.below(2));
    }
    truth[0] = 1;
    truth[1] = 0;
    double base = roc_auc(scores, truth);

    std::vector<double> warped(80);
    for (int i = 0; i < 80; ++i)
        warped[i] = std::exp(scores[i] * 0.7) + scores[i];
    CHECK(roc_auc(warped, truth) == doctest::Approx(base).epsilon(1e-12));

    std::vector<double> negated(80);
    for (int i = 0; i < 80; ++i)
        negated[i] = -scores[i];
    CHECK(roc_auc(negated, truth) == doctest::Approx(1.0 - base).epsilon(1e-12));
}

TEST_CASE("single-class truth is fatal") {
    std::vector<double> s = {1, 2, 3};
    std::vector<int8_t> t = {1, 1, 1};
    CHECK_THROWS_AS(roc_auc(s, t), DataError);
}

TEST_CASE("evaluate excludes unknown pairs and counts them") {
    std::vector<double> scores = {0.9, 0.8, 0.1, 0.3};
    std::vector<int8_t> pred = {1, 1, 0, 0};
    std::vector<int8_t> truth = {1, -1, 0, -1};
    EvalReport rep = evaluate(scores, pred, truth);
    CHECK(rep.n_scored == 2);
    CHECK(rep.n_unknown == 2);
    CHECK(rep.cm.tp == 1);
    CHECK(rep.cm.tn == 1);
    CHECK(rep.auc == 1.0);
}

TEST_CASE("roc points sweep from the origin to (1,1)") {
    std::vector<double> scores = {0.1, 0.5, 0.5, 0.9};
    std::vector<int8_t> truth = {0, 1, 0, 1};
    auto pts = roc_points(scores, truth);
    CHECK(pts.front().fpr == 0.0);
    CHECK(pts.front().tpr == 0.0);
    CHECK(pts.back().fpr == 1.0);
    CHECK(pts.back().tpr == 1.0);
}

TEST_SUITE_END();
