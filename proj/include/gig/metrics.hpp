#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace gig {

struct PredictionScores {
    std::vector<std::string> classes;
    std::vector<std::string> sample_ids;
    std::vector<std::size_t> truth;            // index into classes
    std::vector<std::vector<double>> scores;   // one row of |classes| scores per sample
};

// scores.tsv: sample_id<TAB>true_class<TAB>score_0..score_{C-1}. A header line
// starting with "sample_id" is optional; columns named score_<name> give the
// class names, otherwise classes are "0".."C-1". true_class is a class name or
// an index.
PredictionScores read_scores(std::istream& in);
PredictionScores load_scores(const std::filesystem::path& path);
void write_scores(std::ostream& out, const PredictionScores& p);

// Replaces the truth column with sample -> class labels. Classes become the
// sorted label names, which must match the score column count.
void apply_labels(PredictionScores& p, const std::map<std::string, std::string>& labels);

using ConfusionMatrix = std::vector<std::vector<std::int64_t>>;

// Rows are true classes, columns argmax predictions; ties go to the lower class.
ConfusionMatrix confusion_matrix(const PredictionScores& p);

double accuracy(const ConfusionMatrix& cm);

// Undefined ratios (0/0) count as 0; each one adds a line to warnings.
struct PerClassF1 {
    std::vector<double> precision, recall, f1;
    double macro = 0.0;
};
PerClassF1 f1_scores(const ConfusionMatrix& cm, std::vector<std::string>* warnings = nullptr);
double macro_f1(const ConfusionMatrix& cm, std::vector<std::string>* warnings = nullptr);

struct SensitivitySpecificity {
    std::vector<double> sensitivity, specificity;
    double macro_sensitivity = 0.0;
    double macro_specificity = 0.0;
};
SensitivitySpecificity sensitivity_specificity(const ConfusionMatrix& cm,
                                               std::vector<std::string>* warnings = nullptr);

inline constexpr std::size_t curve_grid_points = 1001;

struct RocCurve {
    std::vector<double> fpr;   // shared grid 0, 0.001, ..., 1
    std::vector<double> tpr;   // macro average
    double auc = 0.0;          // trapezoid over the macro curve
    std::vector<double> class_auc;  // exact per-class AUC, NaN for skipped classes
};

// One-vs-rest. Classes without positives or negatives are skipped with a
// warning; throws DataError when every class is skipped.
RocCurve macro_roc(const PredictionScores& p, std::vector<std::string>* warnings = nullptr);

struct PrCurve {
    std::vector<double> recall;     // shared grid 0, 0.001, ..., 1
    std::vector<double> precision;  // macro average of interpolated precision
    std::vector<double> class_average_precision;
    double macro_average_precision = 0.0;
};

// Interpolated precision: the best precision reached at recall >= r.
PrCurve macro_pr(const PredictionScores& p, std::vector<std::string>* warnings = nullptr);

nlohmann::json metrics_report(const PredictionScores& p);

// Writes metrics.json, roc.tsv and pr.tsv into dir.
void write_metrics(const PredictionScores& p, const std::filesystem::path& dir);

} // namespace gig
