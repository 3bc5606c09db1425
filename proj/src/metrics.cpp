#include "gig/metrics.hpp"

#include "gig/errors.hpp"
#include "gig/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace gig {

namespace {

std::size_t parse_index(const std::string& s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw DataError("true_class '" + s + "' is not a class name or index");
    return v;
}

double ratio(std::int64_t num, std::int64_t den, const std::string& what, std::vector<std::string>* warnings) {
    if (den == 0) {
        if (warnings) warnings->push_back(what + " is 0/0, reported as 0");
        return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

void check_matrix(const ConfusionMatrix& cm) {
    std::int64_t total = 0;
    for (const auto& row : cm) {
        if (row.size() != cm.size()) throw DataError("confusion matrix is not square");
        total += std::accumulate(row.begin(), row.end(), std::int64_t{0});
    }
    if (total <= 0) throw DataError("confusion matrix is empty");
}

std::vector<double> unit_grid() {
    std::vector<double> g(curve_grid_points);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<double>(i) / static_cast<double>(curve_grid_points - 1);
    return g;
}

// Operating points of a one-vs-rest sweep, one per distinct score, highest first.
struct Sweep {
    std::vector<std::int64_t> tp, fp;
    std::int64_t positives = 0;
    std::int64_t negatives = 0;
};

Sweep sweep(const PredictionScores& p, std::size_t c) {
    std::vector<std::size_t> order(p.sample_ids.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p.scores[a][c] > p.scores[b][c]; });
    Sweep s;
    for (auto t : p.truth) (t == c ? s.positives : s.negatives) += 1;
    std::int64_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        (p.truth[order[i]] == c ? tp : fp) += 1;
        bool last_of_group = i + 1 == order.size() || p.scores[order[i + 1]][c] != p.scores[order[i]][c];
        if (last_of_group) {
            s.tp.push_back(tp);
            s.fp.push_back(fp);
        }
    }
    return s;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double area = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) area += (x[i] - x[i - 1]) * (y[i] + y[i - 1]) / 2.0;
    return area;
}

bool usable(const Sweep& s, const std::string& name, const char* curve, std::vector<std::string>* warnings) {
    if (s.positives > 0 && s.negatives > 0) return true;
    if (warnings)
        warnings->push_back(std::string(curve) + ": class '" + name + "' has no " +
                            (s.positives == 0 ? "positives" : "negatives") + ", skipped");
    return false;
}

void validate(const PredictionScores& p) {
    if (p.sample_ids.empty()) throw DataError("no prediction rows");
    if (p.classes.empty()) throw DataError("no classes");
    for (std::size_t i = 0; i < p.sample_ids.size(); ++i) {
        if (p.scores[i].size() != p.classes.size()) throw DataError("sample " + p.sample_ids[i] + " has the wrong number of scores");
        if (p.truth[i] >= p.classes.size()) throw DataError("sample " + p.sample_ids[i] + " has an unknown class");
    }
}

} // namespace

PredictionScores read_scores(std::istream& in) {
    PredictionScores p;
    std::string line;
    bool first = true;
    bool header = false;
    std::vector<std::string> raw_truth;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto cols = split(line, '\t');
        if (first) {
            first = false;
            if (cols[0] == "sample_id") {
                header = true;
                for (std::size_t i = 2; i < cols.size(); ++i) {
                    std::string name = cols[i];
                    if (name.starts_with("score_")) name = name.substr(6);
                    p.classes.push_back(name);
                }
                continue;
            }
        }
        if (cols.size() < 3) throw DataError("scores line needs sample_id, true_class and at least one score: " + line);
        if (!seen.insert(cols[0]).second) throw DataError("duplicate sample_id in scores: " + cols[0]);
        std::vector<double> row;
        for (std::size_t i = 2; i < cols.size(); ++i) {
            double v = 0.0;
            try {
                v = parse_double(cols[i]);
            } catch (const std::exception&) {
                throw DataError("bad score '" + cols[i] + "' for sample " + cols[0]);
            }
            if (!std::isfinite(v)) throw DataError("non-finite score for sample " + cols[0]);
            row.push_back(v);
        }
        if (!p.scores.empty() && row.size() != p.scores.front().size()) throw DataError("ragged scores table at " + cols[0]);
        p.sample_ids.push_back(cols[0]);
        raw_truth.push_back(cols[1]);
        p.scores.push_back(std::move(row));
    }
    if (p.sample_ids.empty()) throw DataError("scores file has no rows");
    const std::size_t c = p.scores.front().size();
    if (header && p.classes.size() != c) throw DataError("scores header does not match the score columns");
    if (!header)
        for (std::size_t i = 0; i < c; ++i) p.classes.push_back(std::to_string(i));
    for (const auto& t : raw_truth) {
        auto it = std::find(p.classes.begin(), p.classes.end(), t);
        std::size_t idx = it != p.classes.end() ? static_cast<std::size_t>(it - p.classes.begin()) : parse_index(t);
        if (idx >= c) throw DataError("true_class " + t + " is out of range");
        p.truth.push_back(idx);
    }
    return p;
}

PredictionScores load_scores(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open scores file");
    return read_scores(in);
}

void write_scores(std::ostream& out, const PredictionScores& p) {
    out << "sample_id\ttrue_class";
    for (const auto& c : p.classes) out << "\tscore_" << c;
    out << '\n';
    for (std::size_t i = 0; i < p.sample_ids.size(); ++i) {
        out << p.sample_ids[i] << '\t' << p.classes[p.truth[i]];
        for (double v : p.scores[i]) out << '\t' << format_double(v);
        out << '\n';
    }
}

void apply_labels(PredictionScores& p, const std::map<std::string, std::string>& labels) {
    std::set<std::string> names;
    for (const auto& [sample, cls] : labels) names.insert(cls);
    std::vector<std::string> classes(names.begin(), names.end());
    if (!p.scores.empty() && classes.size() != p.scores.front().size())
        throw DataError("labels name " + std::to_string(classes.size()) + " classes but scores have " +
                        std::to_string(p.scores.front().size()) + " columns");
    for (std::size_t i = 0; i < p.sample_ids.size(); ++i) {
        auto it = labels.find(p.sample_ids[i]);
        if (it == labels.end()) throw DataError("sample " + p.sample_ids[i] + " has no label");
        p.truth[i] = static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(), it->second) - classes.begin());
    }
    p.classes = std::move(classes);
}

ConfusionMatrix confusion_matrix(const PredictionScores& p) {
    validate(p);
    const std::size_t c = p.classes.size();
    ConfusionMatrix cm(c, std::vector<std::int64_t>(c, 0));
    for (std::size_t i = 0; i < p.sample_ids.size(); ++i) {
        const auto& s = p.scores[i];
        auto pred = static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin());
        ++cm[p.truth[i]][pred];
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    check_matrix(cm);
    std::int64_t hit = 0, total = 0;
    for (std::size_t i = 0; i < cm.size(); ++i) {
        hit += cm[i][i];
        total += std::accumulate(cm[i].begin(), cm[i].end(), std::int64_t{0});
    }
    return static_cast<double>(hit) / static_cast<double>(total);
}

PerClassF1 f1_scores(const ConfusionMatrix& cm, std::vector<std::string>* warnings) {
    check_matrix(cm);
    const std::size_t c = cm.size();
    PerClassF1 out;
    for (std::size_t k = 0; k < c; ++k) {
        std::int64_t tp = cm[k][k], predicted = 0, actual = 0;
        for (std::size_t j = 0; j < c; ++j) {
            predicted += cm[j][k];
            actual += cm[k][j];
        }
        const std::string tag = "class " + std::to_string(k);
        double precision = ratio(tp, predicted, tag + " precision", warnings);
        double recall = ratio(tp, actual, tag + " recall", warnings);
        double f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        out.precision.push_back(precision);
        out.recall.push_back(recall);
        out.f1.push_back(f1);
    }
    out.macro = std::accumulate(out.f1.begin(), out.f1.end(), 0.0) / static_cast<double>(c);
    return out;
}

double macro_f1(const ConfusionMatrix& cm, std::vector<std::string>* warnings) { return f1_scores(cm, warnings).macro; }

SensitivitySpecificity sensitivity_specificity(const ConfusionMatrix& cm, std::vector<std::string>* warnings) {
    check_matrix(cm);
    const std::size_t c = cm.size();
    std::int64_t total = 0;
    for (const auto& row : cm) total += std::accumulate(row.begin(), row.end(), std::int64_t{0});
    SensitivitySpecificity out;
    for (std::size_t k = 0; k < c; ++k) {
        std::int64_t tp = cm[k][k], fn = 0, fp = 0;
        for (std::size_t j = 0; j < c; ++j) {
            if (j == k) continue;
            fn += cm[k][j];
            fp += cm[j][k];
        }
        std::int64_t tn = total - tp - fn - fp;
        const std::string tag = "class " + std::to_string(k);
        out.sensitivity.push_back(ratio(tp, tp + fn, tag + " sensitivity", warnings));
        out.specificity.push_back(ratio(tn, tn + fp, tag + " specificity", warnings));
    }
    out.macro_sensitivity = std::accumulate(out.sensitivity.begin(), out.sensitivity.end(), 0.0) / static_cast<double>(c);
    out.macro_specificity = std::accumulate(out.specificity.begin(), out.specificity.end(), 0.0) / static_cast<double>(c);
    return out;
}

RocCurve macro_roc(const PredictionScores& p, std::vector<std::string>* warnings) {
    validate(p);
    RocCurve out;
    out.fpr = unit_grid();
    out.tpr.assign(out.fpr.size(), 0.0);
    out.class_auc.assign(p.classes.size(), std::numeric_limits<double>::quiet_NaN());
    std::size_t used = 0;
    for (std::size_t c = 0; c < p.classes.size(); ++c) {
        auto s = sweep(p, c);
        if (!usable(s, p.classes[c], "roc", warnings)) continue;
        std::vector<double> fx{0.0}, ty{0.0};
        for (std::size_t i = 0; i < s.tp.size(); ++i) {
            fx.push_back(static_cast<double>(s.fp[i]) / static_cast<double>(s.negatives));
            ty.push_back(static_cast<double>(s.tp[i]) / static_cast<double>(s.positives));
        }
        out.class_auc[c] = trapezoid(fx, ty);
        for (std::size_t g = 0; g < out.fpr.size(); ++g) {
            const double x = out.fpr[g];
            // last point at or left of x, then linear toward the next one
            auto k = static_cast<std::size_t>(std::upper_bound(fx.begin(), fx.end(), x) - fx.begin()) - 1;
            double y = ty[k];
            if (k + 1 < fx.size()) y += (ty[k + 1] - ty[k]) * (x - fx[k]) / (fx[k + 1] - fx[k]);
            out.tpr[g] += y;
        }
        ++used;
    }
    if (used == 0) throw DataError("ROC is undefined: the truth contains a single class");
    for (auto& y : out.tpr) y /= static_cast<double>(used);
    out.auc = trapezoid(out.fpr, out.tpr);
    return out;
}

PrCurve macro_pr(const PredictionScores& p, std::vector<std::string>* warnings) {
    validate(p);
    PrCurve out;
    out.recall = unit_grid();
    out.precision.assign(out.recall.size(), 0.0);
    out.class_average_precision.assign(p.classes.size(), std::numeric_limits<double>::quiet_NaN());
    std::size_t used = 0;
    double ap_sum = 0.0;
    for (std::size_t c = 0; c < p.classes.size(); ++c) {
        auto s = sweep(p, c);
        if (!usable(s, p.classes[c], "pr", warnings)) continue;
        std::vector<double> rx, py;
        double ap = 0.0, prev_recall = 0.0;
        for (std::size_t i = 0; i < s.tp.size(); ++i) {
            double r = static_cast<double>(s.tp[i]) / static_cast<double>(s.positives);
            double pr = static_cast<double>(s.tp[i]) / static_cast<double>(s.tp[i] + s.fp[i]);
            ap += (r - prev_recall) * pr;
            prev_recall = r;
            rx.push_back(r);
            py.push_back(pr);
        }
        out.class_average_precision[c] = ap;
        ap_sum += ap;
        // suffix maximum: best precision at recall >= rx[i]
        for (std::size_t i = py.size() - 1; i-- > 0;) py[i] = std::max(py[i], py[i + 1]);
        for (std::size_t g = 0; g < out.recall.size(); ++g) {
            auto k = static_cast<std::size_t>(std::lower_bound(rx.begin(), rx.end(), out.recall[g]) - rx.begin());
            out.precision[g] += k < py.size() ? py[k] : 0.0;
        }
        ++used;
    }
    if (used == 0) throw DataError("precision-recall is undefined: the truth contains a single class");
    for (auto& v : out.precision) v /= static_cast<double>(used);
    out.macro_average_precision = ap_sum / static_cast<double>(used);
    return out;
}

nlohmann::json metrics_report(const PredictionScores& p) {
    std::vector<std::string> warnings;
    auto cm = confusion_matrix(p);
    auto f1 = f1_scores(cm, &warnings);
    auto ss = sensitivity_specificity(cm, &warnings);
    auto roc = macro_roc(p, &warnings);
    auto pr = macro_pr(p, &warnings);

    nlohmann::json j;
    j["classes"] = p.classes;
    j["n"] = p.sample_ids.size();
    j["confusion_matrix"] = cm;
    j["accuracy"] = accuracy(cm);
    j["macro_f1"] = f1.macro;
    j["macro_sensitivity"] = ss.macro_sensitivity;
    j["macro_specificity"] = ss.macro_specificity;
    j["macro_roc_auc"] = roc.auc;
    j["macro_average_precision"] = pr.macro_average_precision;
    auto per_class = nlohmann::json::array();
    for (std::size_t c = 0; c < p.classes.size(); ++c) {
        nlohmann::json row{{"class", p.classes[c]},
                           {"precision", f1.precision[c]},
                           {"recall", f1.recall[c]},
                           {"f1", f1.f1[c]},
                           {"sensitivity", ss.sensitivity[c]},
                           {"specificity", ss.specificity[c]}};
        row["roc_auc"] = std::isnan(roc.class_auc[c]) ? nlohmann::json(nullptr) : nlohmann::json(roc.class_auc[c]);
        row["average_precision"] = std::isnan(pr.class_average_precision[c])
                                       ? nlohmann::json(nullptr)
                                       : nlohmann::json(pr.class_average_precision[c]);
        per_class.push_back(row);
    }
    j["per_class"] = per_class;
    j["warnings"] = warnings;
    return j;
}

void write_metrics(const PredictionScores& p, const std::filesystem::path& dir) {
    auto report = metrics_report(p);
    auto roc = macro_roc(p);
    auto pr = macro_pr(p);
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "metrics.json", report.dump(2) + "\n");
    std::ostringstream r;
    r << "fpr\ttpr\n";
    for (std::size_t i = 0; i < roc.fpr.size(); ++i) r << format_double(roc.fpr[i]) << '\t' << format_double(roc.tpr[i]) << '\n';
    write_file_atomic(dir / "roc.tsv", r.str());
    std::ostringstream q;
    q << "recall\tprecision\n";
    for (std::size_t i = 0; i < pr.recall.size(); ++i)
        q << format_double(pr.recall[i]) << '\t' << format_double(pr.precision[i]) << '\n';
    write_file_atomic(dir / "pr.tsv", q.str());
}

} // namespace gig
