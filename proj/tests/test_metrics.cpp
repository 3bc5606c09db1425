#include "gig/errors.hpp"
#include "gig/io.hpp"
#include "gig/metrics.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace gig;

namespace {

PredictionScores two_class(std::vector<std::size_t> truth, std::vector<double> score1) {
    PredictionScores p;
    p.classes = {"0", "1"};
    for (std::size_t i = 0; i < truth.size(); ++i) {
        p.sample_ids.push_back("S" + std::to_string(i));
        p.truth.push_back(truth[i]);
        p.scores.push_back({1.0 - score1[i], score1[i]});
    }
    return p;
}

PredictionScores random_scores(std::size_t n, std::size_t c, Rng& rng) {
    PredictionScores p;
    for (std::size_t k = 0; k < c; ++k) p.classes.push_back("c" + std::to_string(k));
    for (std::size_t i = 0; i < n; ++i) {
        p.sample_ids.push_back("S" + std::to_string(i));
        p.truth.push_back(i < c ? i : rng.below(c));
        std::vector<double> row(c);
        // coarse values so ties occur
        for (auto& v : row) v = static_cast<double>(rng.below(8)) / 8.0;
        p.scores.push_back(row);
    }
    return p;
}

// Probability a random positive outranks a random negative, ties half.
double pairwise_auc(const PredictionScores& p, std::size_t cls) {
    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < p.truth.size(); ++i) {
        if (p.truth[i] != cls) continue;
        for (std::size_t j = 0; j < p.truth.size(); ++j) {
            if (p.truth[j] == cls) continue;
            pairs += 1;
            double a = p.scores[i][cls], b = p.scores[j][cls];
            wins += a > b ? 1.0 : a == b ? 0.5 : 0.0;
        }
    }
    return wins / pairs;
}

} // namespace

TEST_CASE("confusion-matrix fixture") {
    auto p = two_class({0, 0, 1, 1}, {0.2, 0.7, 0.9, 0.6});
    auto cm = confusion_matrix(p);
    CHECK(cm == ConfusionMatrix{{1, 1}, {0, 2}});
    CHECK(accuracy(cm) == doctest::Approx(0.75));
    CHECK(macro_f1(cm) == doctest::Approx(0.733333).epsilon(1e-6));
    auto ss = sensitivity_specificity(cm);
    CHECK(ss.macro_sensitivity == doctest::Approx(0.75));
    CHECK(ss.macro_specificity == doctest::Approx(0.75));
}

TEST_CASE("argmax ties go to the lower class") {
    auto p = two_class({0, 1}, {0.5, 0.5});
    CHECK(confusion_matrix(p) == ConfusionMatrix{{1, 0}, {1, 0}});
}

TEST_CASE("majority-class predictor") {
    PredictionScores p;
    p.classes = {"a", "b", "c"};
    for (std::size_t i = 0; i < 9; ++i) {
        p.sample_ids.push_back(std::to_string(i));
        p.truth.push_back(i % 3);
        p.scores.push_back({1.0, 0.0, 0.0});
    }
    std::vector<std::string> warnings;
    auto f1 = f1_scores(confusion_matrix(p), &warnings);
    CHECK(f1.f1[0] == doctest::Approx(0.5));
    CHECK(f1.macro == doctest::Approx(1.0 / 6.0));
    CHECK(warnings.size() == 2);  // precision of b and c is 0/0

    PredictionScores all_one;
    all_one.classes = {"a", "b"};
    for (std::size_t i = 0; i < 4; ++i) {
        all_one.sample_ids.push_back(std::to_string(i));
        all_one.truth.push_back(0);
        all_one.scores.push_back({1.0, 0.0});
    }
    warnings.clear();
    CHECK(macro_f1(confusion_matrix(all_one), &warnings) == doctest::Approx(0.5));
    CHECK_FALSE(warnings.empty());
}

TEST_CASE("roc examples") {
    auto constant = two_class({0, 1, 0, 1, 1}, {0.5, 0.5, 0.5, 0.5, 0.5});
    auto roc = macro_roc(constant);
    CHECK(roc.auc == doctest::Approx(0.5));
    CHECK(roc.fpr.size() == curve_grid_points);
    CHECK(roc.tpr.front() == 0.0);
    CHECK(roc.tpr.back() == 1.0);

    auto perfect = two_class({0, 1, 0, 1, 1}, {0.1, 0.9, 0.2, 0.8, 0.7});
    CHECK(macro_roc(perfect).auc == doctest::Approx(1.0));
    CHECK(macro_roc(perfect).class_auc[1] == 1.0);

    auto inverted = two_class({0, 1, 0, 1, 1}, {0.9, 0.1, 0.8, 0.2, 0.3});
    CHECK(macro_roc(inverted).class_auc[1] == 0.0);
    // the grid curve can only resolve the final vertical jump to half a cell
    CHECK(macro_roc(inverted).auc <= 0.5 / static_cast<double>(curve_grid_points - 1) + 1e-12);

    std::vector<std::string> warnings;
    auto one_class = two_class({1, 1}, {0.3, 0.6});
    CHECK_THROWS_AS(macro_roc(one_class, &warnings), DataError);
}

TEST_CASE("roc and pr properties on random scores") {
    Rng rng(31);
    for (int t = 0; t < 40; ++t) {
        auto c = 2 + rng.below(3);
        auto p = random_scores(c + 5 + rng.below(40), c, rng);
        auto roc = macro_roc(p);
        auto pr = macro_pr(p);
        for (std::size_t k = 0; k < c; ++k) {
            CHECK(roc.class_auc[k] == doctest::Approx(pairwise_auc(p, k)).epsilon(1e-12));
        }
        for (std::size_t i = 1; i < roc.tpr.size(); ++i) CHECK(roc.tpr[i] >= roc.tpr[i - 1] - 1e-12);
        for (std::size_t i = 1; i < pr.precision.size(); ++i) CHECK(pr.precision[i] <= pr.precision[i - 1] + 1e-12);
        CHECK(roc.auc >= 0.0);
        CHECK(roc.auc <= 1.0);

        // strictly increasing transforms leave every curve unchanged
        auto q = p;
        for (auto& row : q.scores)
            for (auto& v : row) v = std::exp(3.0 * v) - 7.0;
        auto roc_q = macro_roc(q);
        CHECK(roc_q.tpr == roc.tpr);
        CHECK(roc_q.auc == roc.auc);
        CHECK(macro_pr(q).macro_average_precision == pr.macro_average_precision);

        // relabelling classes permutes the per-class values only
        auto r = p;
        for (auto& y : r.truth) y = c - 1 - y;
        for (auto& row : r.scores) std::reverse(row.begin(), row.end());
        CHECK(macro_roc(r).auc == doctest::Approx(roc.auc).epsilon(1e-12));
        CHECK(macro_pr(r).macro_average_precision == doctest::Approx(pr.macro_average_precision).epsilon(1e-12));
        CHECK(confusion_matrix(r).size() == c);
    }
}

TEST_CASE("precision-recall baseline") {
    // uninformative scores: average precision equals the positive rate
    auto p = two_class({0, 1, 0, 0, 1, 0, 0, 0}, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    auto pr = macro_pr(p);
    CHECK(pr.class_average_precision[1] == doctest::Approx(0.25));
    CHECK(pr.class_average_precision[0] == doctest::Approx(0.75));
    CHECK(pr.macro_average_precision == doctest::Approx(0.5));
    auto perfect = two_class({0, 1, 0, 1}, {0.1, 0.9, 0.2, 0.8});
    CHECK(macro_pr(perfect).macro_average_precision == doctest::Approx(1.0));
}

TEST_CASE("scores file round trip and labels") {
    std::istringstream in("sample_id\ttrue_class\tscore_localized\tscore_metastatic\n"
                          "S1\tlocalized\t0.8\t0.2\nS2\t1\t0.4\t0.6\nS3\tmetastatic\t0.7\t0.3\n");
    auto p = read_scores(in);
    CHECK(p.classes == std::vector<std::string>{"localized", "metastatic"});
    CHECK(p.truth == std::vector<std::size_t>{0, 1, 1});
    std::ostringstream out;
    write_scores(out, p);
    std::istringstream back(out.str());
    auto q = read_scores(back);
    CHECK(q.truth == p.truth);
    CHECK(q.scores == p.scores);

    std::istringstream bare("S1\t0\t0.1\t0.9\nS2\t1\t0.3\t0.7\n");
    auto b = read_scores(bare);
    CHECK(b.classes == std::vector<std::string>{"0", "1"});

    apply_labels(p, {{"S1", "b"}, {"S2", "b"}, {"S3", "a"}});
    CHECK(p.classes == std::vector<std::string>{"a", "b"});
    CHECK(p.truth == std::vector<std::size_t>{1, 1, 0});
    CHECK_THROWS_AS(apply_labels(p, {{"S1", "a"}, {"S2", "b"}}), DataError);

    for (const char* bad : {"S1\t0\t0.1\nS1\t0\t0.2\n", "S1\t0\t0.1\t0.2\nS2\t0\t0.1\n", "S1\t5\t0.1\t0.2\n",
                            "S1\t0\tx\t0.2\n", "S1\t0\n"}) {
        std::istringstream s(bad);
        CHECK_THROWS_AS(read_scores(s), DataError);
    }
}

TEST_CASE("metrics files") {
    auto p = two_class({0, 0, 1, 1}, {0.2, 0.7, 0.9, 0.6});
    testing::TempDir dir;
    write_metrics(p, dir.path());
    auto report = nlohmann::json::parse(read_file(dir / "metrics.json"));
    CHECK(report["accuracy"].get<double>() == doctest::Approx(0.75));
    CHECK(report["confusion_matrix"] == nlohmann::json::parse("[[1,1],[0,2]]"));
    auto roc = read_file(dir / "roc.tsv");
    CHECK(roc.starts_with("fpr\ttpr\n"));
    CHECK(std::count(roc.begin(), roc.end(), '\n') == static_cast<long>(curve_grid_points) + 1);
    CHECK(read_file(dir / "pr.tsv").starts_with("recall\tprecision\n"));
}
