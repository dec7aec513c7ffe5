#include <doctest.h>

#include <random>

#include "rws/errors.hpp"
#include "rws/io_util.hpp"
#include "rws/metrics.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace rws;

namespace {

RankedList from_labels(const std::vector<int>& labels) {
    std::vector<RankedEntry> entries;
    double score = static_cast<double>(labels.size());
    for (int l : labels) entries.push_back({score--, l});
    return RankedList("q", entries);
}

}  // namespace

TEST_CASE("worked average precision examples") {
    CHECK(*average_precision(from_labels({1, 0, 1})) == doctest::Approx(0.83333333).epsilon(1e-7));
    CHECK(*average_precision(from_labels({1})) == 1.0);
    CHECK(*average_precision(from_labels({0, 0, 1})) == doctest::Approx(1.0 / 3));
}

TEST_CASE("worked reciprocal rank and precision at 1 examples") {
    CHECK(*reciprocal_rank(from_labels({0, 1})) == 0.5);
    CHECK(*precision_at_1(from_labels({0, 1})) == 0);
    CHECK(*reciprocal_rank(from_labels({1, 0, 0})) == 1.0);
    CHECK(*precision_at_1(from_labels({1, 0, 0})) == 1);
    CHECK(*reciprocal_rank(from_labels({0, 0, 0, 1})) == 0.25);
}

TEST_CASE("lists without positives are skipped, not scored") {
    auto list = from_labels({0, 0, 0});
    CHECK(!average_precision(list));
    CHECK(!reciprocal_rank(list));
    CHECK(!precision_at_1(list));
}

TEST_CASE("aggregate means the per-question values") {
    std::vector<RankedList> lists = {from_labels({1, 0, 1}), from_labels({0, 1})};
    auto report = aggregate(lists);
    CHECK(report.map == doctest::Approx((0.83333333 + 0.5) / 2).epsilon(1e-7));
    CHECK(report.mrr == doctest::Approx((1.0 + 0.5) / 2));
    CHECK(report.p_at_1 == doctest::Approx(0.5));
    CHECK(report.num_questions_scored == 2);
    CHECK(report.num_questions_skipped == 0);

    // worked aggregate: MAP of {0.8333..., 0.5} is 0.6667
    CHECK(report.map == doctest::Approx(0.6667).epsilon(1e-4));
    CHECK(report.mrr == doctest::Approx(0.75));
}

TEST_CASE("skipped questions are counted separately") {
    std::vector<RankedList> lists = {from_labels({1}), from_labels({0, 0})};
    auto report = aggregate(lists);
    CHECK(report.num_questions_scored == 1);
    CHECK(report.num_questions_skipped == 1);
    CHECK(report.map == 1.0);
}

TEST_CASE("aggregate with nothing scorable is an error") {
    std::vector<RankedList> lists = {from_labels({0}), from_labels({0, 0})};
    CHECK_THROWS_AS(aggregate(lists), Error);
}

TEST_CASE("construction sorts by score with stable ties") {
    RankedList list("q", {{0.1, 1}, {0.9, 0}, {0.5, 0}, {0.5, 1}});
    REQUIRE(list.entries().size() == 4);
    CHECK(list.entries()[0].score == 0.9);
    CHECK(list.entries()[1].score == 0.5);
    CHECK(list.entries()[1].label == 0);  // first 0.5 keeps its earlier position
    CHECK(list.entries()[2].label == 1);
    CHECK(list.entries()[3].score == 0.1);
    CHECK_THROWS_AS(RankedList("q", {}), Error);
}

TEST_CASE("metrics match the definition oracle on random small lists") {
    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 1000; ++iter) {
        std::size_t n = 1 + rng() % 8;
        std::vector<int> labels;
        for (std::size_t i = 0; i < n; ++i) labels.push_back(static_cast<int>(rng() % 2));
        auto list = from_labels(labels);
        auto expected_ap = oracle::average_precision(labels);
        auto actual_ap = average_precision(list);
        REQUIRE(expected_ap.has_value() == actual_ap.has_value());
        if (expected_ap) {
            CHECK(*actual_ap == doctest::Approx(*expected_ap).epsilon(1e-12));
            CHECK(*reciprocal_rank(list) == doctest::Approx(*oracle::reciprocal_rank(labels)));
            CHECK(*precision_at_1(list) == *oracle::precision_at_1(labels));
        }
    }
}

TEST_CASE("p@1 <= mrr <= 1 and map <= 1") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<RankedList> lists;
        std::size_t m = 1 + rng() % 6;
        bool any = false;
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t n = 1 + rng() % 8;
            std::vector<int> labels;
            for (std::size_t j = 0; j < n; ++j) labels.push_back(static_cast<int>(rng() % 2));
            any = any || std::any_of(labels.begin(), labels.end(), [](int l) { return l; });
            lists.push_back(from_labels(labels));
        }
        if (!any) continue;
        auto report = aggregate(lists);
        CHECK(report.p_at_1 <= report.mrr + 1e-12);
        CHECK(report.mrr <= 1.0);
        CHECK(report.map <= 1.0);
        CHECK(report.p_at_1 >= 0.0);
    }
}

TEST_CASE("positives on top maximize ap, positives at bottom minimize it") {
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 40; ++iter) {
        std::size_t n = 2 + rng() % 5;  // n! stays small
        std::vector<int> labels;
        int pos = 0;
        for (std::size_t i = 0; i < n; ++i) {
            labels.push_back(static_cast<int>(rng() % 2));
            pos += labels.back();
        }
        if (pos == 0) continue;
        auto [best, worst] = oracle::ap_extremes(labels);

        std::vector<int> sorted_top(labels);
        std::sort(sorted_top.begin(), sorted_top.end(), std::greater<int>());
        std::vector<int> sorted_bottom(labels);
        std::sort(sorted_bottom.begin(), sorted_bottom.end());

        CHECK(*average_precision(from_labels(sorted_top)) == doctest::Approx(best));
        CHECK(*average_precision(from_labels(sorted_top)) == 1.0);  // positives form a prefix
        CHECK(*average_precision(from_labels(sorted_bottom)) == doctest::Approx(worst));
    }
}

TEST_CASE("metrics depend only on the ranking, not the scores") {
    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 100; ++iter) {
        std::size_t n = 1 + rng() % 8;
        std::vector<RankedEntry> entries;
        for (std::size_t i = 0; i < n; ++i) {
            entries.push_back({static_cast<double>(rng() % 100), static_cast<int>(rng() % 2)});
        }
        RankedList base("q", entries);
        auto shifted_entries = entries;
        for (auto& e : shifted_entries) e.score += 123.5;
        RankedList shifted("q", shifted_entries);
        auto base_ap = average_precision(base);
        auto shifted_ap = average_precision(shifted);
        REQUIRE(base_ap.has_value() == shifted_ap.has_value());
        if (base_ap) {
            CHECK(*base_ap == *shifted_ap);
            CHECK(*reciprocal_rank(base) == *reciprocal_rank(shifted));
            CHECK(*precision_at_1(base) == *precision_at_1(shifted));
        }
    }
}

TEST_CASE("grade joins scores to gold on qid and answer") {
    auto dir = fixtures::scratch_dir("metrics-grade");
    write_file(dir / "gold.tsv",
               "q1\twho\tright answer\t1\n"
               "q1\twho\twrong answer\t0\n"
               "q2\twhat\tgood\t1\n"
               "q2\twhat\tbad\t0\n");
    write_file(dir / "scores.tsv",
               "q1\tright answer\t0.9\n"
               "q1\twrong answer\t0.2\n"
               "q2\tgood\t0.1\n"
               "q2\tbad\t0.4\n");
    auto report = grade_files(dir / "gold.tsv", dir / "scores.tsv");
    CHECK(report.p_at_1 == doctest::Approx(0.5));
    CHECK(report.mrr == doctest::Approx((1.0 + 0.5) / 2));
    CHECK(report.map == doctest::Approx((1.0 + 0.5) / 2));
    CHECK(to_json(report).find("\"map\"") != std::string::npos);
}

TEST_CASE("grade errors on unmatched rows") {
    auto dir = fixtures::scratch_dir("metrics-unmatched");
    write_file(dir / "gold.tsv", "q1\twho\ta\t1\nq1\twho\tb\t0\n");
    write_file(dir / "scores.tsv", "q1\ta\t0.9\n");
    CHECK_THROWS_AS(grade_files(dir / "gold.tsv", dir / "scores.tsv"), Error);

    write_file(dir / "scores2.tsv", "q1\ta\t0.9\nq1\tb\t0.2\nq9\tzz\t0.5\n");
    CHECK_THROWS_AS(grade_files(dir / "gold.tsv", dir / "scores2.tsv"), Error);

    write_file(dir / "scores3.tsv", "q1\ta\t0.9\nq1\tb\tnot-a-number\n");
    CHECK_THROWS_AS(grade_files(dir / "gold.tsv", dir / "scores3.tsv"), ParseError);
}
