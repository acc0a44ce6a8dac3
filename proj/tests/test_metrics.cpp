#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "srtfd/metrics.hpp"

using namespace srtfd;
using namespace srtfd::metrics;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("a perfect diagonal scores 1 on every metric") {
  ConfusionMatrix m(3);
  m.add(0, 0, 10);
  m.add(1, 1, 5);
  m.add(2, 2, 7);
  const auto s = compute_summary(m);
  CHECK(s.macro_recall == doctest::Approx(1.0));
  CHECK(s.macro_precision == doctest::Approx(1.0));
  CHECK(s.macro_f1 == doctest::Approx(1.0));
  CHECK(s.gmean == doctest::Approx(1.0));
}

TEST_CASE("the worked binary example reproduces exactly") {
  // TP=8, FN=2, FP=1, TN=9 with class 1 as the positive class.
  ConfusionMatrix m(2);
  m.add(1, 1, 8);
  m.add(1, 0, 2);
  m.add(0, 1, 1);
  m.add(0, 0, 9);
  const auto s = compute_summary(m);
  CHECK(std::abs(s.per_class[1].recall - 0.8) < 1e-12);
  CHECK(std::abs(s.per_class[1].precision - 8.0 / 9.0) < 1e-12);
  CHECK(std::abs(s.per_class[1].f1 - 2.0 * (8.0 / 9.0) * 0.8 / (8.0 / 9.0 + 0.8)) < 1e-12);
  CHECK(std::abs(s.gmean - std::sqrt(0.8 * 0.9)) < 1e-12);
  CHECK(s.per_class[1].precision == doctest::Approx(0.8889).epsilon(1e-3));
  CHECK(s.per_class[1].f1 == doctest::Approx(0.8421).epsilon(1e-3));
  CHECK(s.gmean == doctest::Approx(0.8485).epsilon(1e-3));
}

TEST_CASE("a never-predicted class zeroes the G-mean and is flagged") {
  ConfusionMatrix m(3);
  m.add(0, 0, 10);
  m.add(1, 1, 10);
  m.add(2, 0, 5);  // class 2 exists but is never predicted
  const auto s = compute_summary(m);
  CHECK(s.gmean == 0.0);
  REQUIRE(s.never_predicted_classes.size() == 1);
  CHECK(s.never_predicted_classes[0] == 2);
  CHECK(s.per_class[2].recall == 0.0);
  CHECK(s.per_class[2].f1 == 0.0);
  // Macro precision averages only over predicted classes.
  CHECK(s.macro_precision == doctest::Approx((10.0 / 15.0 + 1.0) / 2.0));
}

TEST_CASE("zero-support classes are excluded and reported") {
  ConfusionMatrix m(4);
  m.add(0, 0, 10);
  m.add(1, 1, 10);
  m.add(3, 3, 10);  // class 2 never appears as a true label
  const auto s = compute_summary(m);
  REQUIRE(s.zero_support_classes.size() == 1);
  CHECK(s.zero_support_classes[0] == 2);
  CHECK(s.macro_recall == doctest::Approx(1.0));
}

TEST_CASE("an all-zero matrix is an undefined-metric error") {
  ConfusionMatrix m(3);
  CHECK_THROWS_AS(compute_summary(m), UndefinedMetricError);
  CHECK_THROWS_AS(compute_metrics({}), UndefinedMetricError);
}

TEST_CASE("summaries match the brute-force oracle on random matrices") {
  Rng rng(99);
  std::uniform_int_distribution<int> classes(2, 8);
  std::uniform_int_distribution<int64_t> cell(0, 30);
  int checked = 0;
  while (checked < 1000) {
    const int c = classes(rng);
    ConfusionMatrix m(c);
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < c; ++j) m.add(i, j, cell(rng));
    if (m.total() == 0) continue;
    bool any_support = false;
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < c; ++j)
        if (m.at(i, j) > 0) any_support = true;
    if (!any_support) continue;
    ++checked;
    const auto s = compute_summary(m);
    const auto b = oracles::brute_metrics(m);
    CHECK(std::abs(s.macro_recall - b.recall) < 1e-12);
    CHECK(std::abs(s.macro_precision - b.precision) < 1e-12);
    CHECK(std::abs(s.macro_f1 - b.f1) < 1e-12);
    CHECK(std::abs(s.gmean - b.gmean) < 1e-12);
  }
}

TEST_CASE("Avg-End metrics are plain means over the per-task summaries") {
  ConfusionMatrix t0(2);
  t0.add(0, 0, 10);
  t0.add(1, 1, 10);
  ConfusionMatrix t1(2);
  t1.add(0, 0, 5);
  t1.add(0, 1, 5);
  t1.add(1, 1, 10);
  const auto rm = compute_metrics({t0, t1});
  REQUIRE(rm.per_task_summary.size() == 2);
  CHECK(rm.avg_end_recall ==
        doctest::Approx((rm.per_task_summary[0].macro_recall +
                         rm.per_task_summary[1].macro_recall) /
                        2.0));
  CHECK(rm.avg_end_f1 == doctest::Approx((rm.per_task_summary[0].macro_f1 +
                                          rm.per_task_summary[1].macro_f1) /
                                         2.0));
  CHECK(rm.per_task.size() == 2);
}

TEST_SUITE_END();
