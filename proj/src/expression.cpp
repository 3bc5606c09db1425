#include "gig/expression.hpp"

#include "gig/errors.hpp"
#include "gig/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace gig {

std::vector<double> DenseMatrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = data_[r * cols_ + c];
    return out;
}

ExpressionMatrix::ExpressionMatrix(std::vector<GeneSymbol> genes, std::vector<std::string> samples,
                                   DenseMatrix values)
    : genes_(std::move(genes)), samples_(std::move(samples)), values_(std::move(values)) {
    if (genes_.empty() || samples_.empty()) throw DataError("expression matrix has no genes or no samples");
    if (values_.rows() != genes_.size() || values_.cols() != samples_.size())
        throw DataError("expression matrix shape does not match its labels");
    std::set<GeneSymbol> seen_genes;
    for (const auto& g : genes_) {
        if (!seen_genes.insert(g).second) throw DataError("duplicate gene " + g.str());
    }
    std::set<std::string> seen_samples;
    for (const auto& s : samples_) {
        if (s.empty()) throw DataError("empty sample id");
        if (!seen_samples.insert(s).second) throw DataError("duplicate sample " + s);
    }
    for (std::size_t r = 0; r < values_.rows(); ++r) {
        for (std::size_t c = 0; c < values_.cols(); ++c) {
            if (!std::isfinite(values_(r, c)))
                throw DataError("non-finite value for " + genes_[r].str() + " in " + samples_[c]);
        }
    }
}

GeneSet ExpressionMatrix::gene_set() const { return GeneSet(genes_.begin(), genes_.end()); }

namespace {

char sniff_delimiter(const std::string& header) { return header.find('\t') != std::string::npos ? '\t' : ','; }

bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!trim(line).empty()) return true;
    }
    return false;
}

} // namespace

RawMatrix read_raw_matrix(std::istream& in, Orientation orientation) {
    std::string line;
    if (!next_data_line(in, line)) throw DataError("expression matrix is empty");
    char sep = sniff_delimiter(line);
    auto header = split(line, sep);
    if (header.size() < 2) throw DataError("expression matrix header has no data columns");
    std::vector<std::string> columns;
    for (std::size_t i = 1; i < header.size(); ++i) columns.emplace_back(trim(header[i]));

    std::vector<std::string> ids;
    std::vector<double> values;
    std::size_t lineno = 1;
    while (next_data_line(in, line)) {
        ++lineno;
        auto fields = split(line, sep);
        if (fields.size() != header.size())
            throw DataError("expression matrix line " + std::to_string(lineno) + ": expected " +
                            std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
        ids.emplace_back(trim(fields[0]));
        for (std::size_t i = 1; i < fields.size(); ++i) {
            double v = parse_double(fields[i]);
            if (!std::isfinite(v))
                throw DataError("expression matrix line " + std::to_string(lineno) + ": non-finite value");
            values.push_back(v);
        }
    }
    if (ids.empty()) throw DataError("expression matrix has no data rows");

    RawMatrix raw;
    if (orientation == Orientation::genes_in_rows) {
        raw.row_ids = std::move(ids);
        raw.samples = std::move(columns);
        raw.values = DenseMatrix(raw.row_ids.size(), raw.samples.size());
        for (std::size_t r = 0; r < raw.row_ids.size(); ++r)
            for (std::size_t c = 0; c < raw.samples.size(); ++c) raw.values(r, c) = values[r * raw.samples.size() + c];
    } else {
        raw.row_ids = std::move(columns);
        raw.samples = std::move(ids);
        raw.values = DenseMatrix(raw.row_ids.size(), raw.samples.size());
        for (std::size_t s = 0; s < raw.samples.size(); ++s)
            for (std::size_t g = 0; g < raw.row_ids.size(); ++g) raw.values(g, s) = values[s * raw.row_ids.size() + g];
    }
    std::set<std::string> seen;
    for (const auto& s : raw.samples) {
        if (!seen.insert(s).second) throw DataError("duplicate sample id " + s);
    }
    return raw;
}

RawMatrix load_raw_matrix(const std::filesystem::path& path, Orientation orientation) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open expression matrix");
    return read_raw_matrix(in, orientation);
}

ExpressionMatrix canonicalize_rows(const RawMatrix& raw, const GeneIdMapping& table,
                                   bool require_protein_coding, CanonicalizationReport* report) {
    std::vector<GeneSymbol> genes;
    std::vector<std::size_t> kept;
    std::set<GeneSymbol> taken;
    for (std::size_t r = 0; r < raw.row_ids.size(); ++r) {
        auto symbol = canonicalize(raw.row_ids[r], table, require_protein_coding);
        if (!symbol) {
            if (report) report->unmapped.push_back(raw.row_ids[r]);
            continue;
        }
        if (!taken.insert(*symbol).second) {
            if (report) report->duplicates.push_back(raw.row_ids[r]);
            continue;
        }
        genes.push_back(*symbol);
        kept.push_back(r);
    }
    if (genes.empty()) throw DataError("no expression rows map to an HGNC symbol");
    DenseMatrix values(kept.size(), raw.samples.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        auto src = raw.values.row(kept[i]);
        std::copy(src.begin(), src.end(), values.row(i).begin());
    }
    return ExpressionMatrix(std::move(genes), raw.samples, std::move(values));
}

void write_expression_matrix(std::ostream& out, const ExpressionMatrix& m) {
    out << "gene";
    for (const auto& s : m.samples()) out << '\t' << s;
    out << '\n';
    for (std::size_t r = 0; r < m.gene_count(); ++r) {
        out << m.genes()[r].str();
        for (double v : m.values().row(r)) out << '\t' << format_double(v);
        out << '\n';
    }
}

ExpressionMatrix read_expression_matrix(std::istream& in) {
    auto raw = read_raw_matrix(in, Orientation::genes_in_rows);
    std::vector<GeneSymbol> genes;
    for (const auto& id : raw.row_ids) genes.emplace_back(id);
    return ExpressionMatrix(std::move(genes), std::move(raw.samples), std::move(raw.values));
}

void save_expression_matrix(const std::filesystem::path& path, const ExpressionMatrix& m) {
    std::ostringstream buf;
    write_expression_matrix(buf, m);
    write_file_atomic(path, buf.str());
}

ExpressionMatrix load_expression_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open expression matrix");
    return read_expression_matrix(in);
}

double mean_of(std::span<const double> v) {
    if (v.empty()) return 0.0;
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double population_sd(std::span<const double> v) {
    if (v.empty()) return 0.0;
    double mu = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

ExpressionMatrix log1p_transform(const ExpressionMatrix& m) {
    DenseMatrix out(m.gene_count(), m.sample_count());
    for (std::size_t r = 0; r < m.gene_count(); ++r) {
        for (std::size_t c = 0; c < m.sample_count(); ++c) {
            double v = m.values()(r, c);
            if (v < 0.0)
                throw DomainError("log1p of negative value " + format_double(v) + " for gene " +
                                  m.genes()[r].str() + " in sample " + m.samples()[c]);
            out(r, c) = std::log1p(v);
        }
    }
    return ExpressionMatrix(m.genes(), m.samples(), std::move(out));
}

ExpressionMatrix select_hvg(const ExpressionMatrix& m, std::size_t n) {
    if (n == 0) throw UsageError("HVG count must be at least 1");
    const std::size_t g = m.gene_count();
    if (n >= g) return m;
    std::vector<double> variance(g);
    for (std::size_t r = 0; r < g; ++r) {
        double sd = population_sd(m.values().row(r));
        variance[r] = sd * sd;
    }
    std::vector<std::size_t> order(g);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return variance[a] > variance[b]; });
    order.resize(n);
    std::sort(order.begin(), order.end());

    std::vector<GeneSymbol> genes;
    DenseMatrix values(n, m.sample_count());
    for (std::size_t i = 0; i < n; ++i) {
        genes.push_back(m.genes()[order[i]]);
        auto src = m.values().row(order[i]);
        std::copy(src.begin(), src.end(), values.row(i).begin());
    }
    return ExpressionMatrix(std::move(genes), m.samples(), std::move(values));
}

DenseMatrix samplewise_zscores(const ExpressionMatrix& m, double epsilon) {
    if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
    const auto& x = m.values();
    DenseMatrix z(x.rows(), x.cols());
    const auto cols = static_cast<std::ptrdiff_t>(x.cols());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ci = 0; ci < cols; ++ci) {
        auto c = static_cast<std::size_t>(ci);
        auto column = x.column(c);
        double mu = mean_of(column);
        double denom = population_sd(column) + epsilon;
        for (std::size_t r = 0; r < x.rows(); ++r) z(r, c) = (column[r] - mu) / denom;
    }
    return z;
}

DenseMatrix genewise_zscores(const ExpressionMatrix& m, double epsilon) {
    if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
    const auto& x = m.values();
    DenseMatrix z(x.rows(), x.cols());
    const auto rows = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ri = 0; ri < rows; ++ri) {
        auto r = static_cast<std::size_t>(ri);
        auto row = x.row(r);
        double mu = mean_of(row);
        double denom = population_sd(row) + epsilon;
        for (std::size_t c = 0; c < x.cols(); ++c) z(r, c) = (row[c] - mu) / denom;
    }
    return z;
}

namespace {

double row_dot_over_n(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum / static_cast<double>(a.size());
}

// Mean of the m largest entries of |r| (excluding self), summed in a fixed
// order (descending value, then ascending index) so every route agrees bit for bit.
double top_k_mean(std::vector<std::pair<double, std::size_t>>& partners, std::size_t k) {
    if (partners.empty()) return 0.0;
    const std::size_t m = std::min(k, partners.size());
    auto better = [](const auto& a, const auto& b) {
        return a.first > b.first || (a.first == b.first && a.second < b.second);
    };
    std::partial_sort(partners.begin(), partners.begin() + static_cast<std::ptrdiff_t>(m), partners.end(), better);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += partners[i].first;
    return sum / static_cast<double>(m);
}

} // namespace

DenseMatrix pcc_matrix(const DenseMatrix& zg) {
    const std::size_t g = zg.rows();
    DenseMatrix r(g, g);
    const auto rows = static_cast<std::ptrdiff_t>(g);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t ai = 0; ai < rows; ++ai) {
        auto a = static_cast<std::size_t>(ai);
        for (std::size_t b = a; b < g; ++b) r(a, b) = row_dot_over_n(zg.row(a), zg.row(b));
    }
    for (std::size_t a = 0; a < g; ++a)
        for (std::size_t b = 0; b < a; ++b) r(a, b) = r(b, a);
    return r;
}

std::vector<double> pcc_node_feature(const DenseMatrix& r, std::size_t k) {
    if (k == 0) throw UsageError("k must be at least 1");
    const std::size_t g = r.rows();
    std::vector<double> out(g, 0.0);
    for (std::size_t a = 0; a < g; ++a) {
        std::vector<std::pair<double, std::size_t>> partners;
        partners.reserve(g);
        for (std::size_t b = 0; b < g; ++b) {
            if (b != a) partners.emplace_back(std::fabs(r(a, b)), b);
        }
        out[a] = top_k_mean(partners, k);
    }
    return out;
}

std::vector<double> pcc_topk_feature(const DenseMatrix& zg, std::size_t k) {
    if (k == 0) throw UsageError("k must be at least 1");
    const std::size_t g = zg.rows();
    std::vector<double> out(g, 0.0);
    const auto rows = static_cast<std::ptrdiff_t>(g);
#pragma omp parallel
    {
        std::vector<std::pair<double, std::size_t>> partners;
        partners.reserve(g);
#pragma omp for schedule(dynamic, 8)
        for (std::ptrdiff_t ai = 0; ai < rows; ++ai) {
            auto a = static_cast<std::size_t>(ai);
            partners.clear();
            for (std::size_t b = 0; b < g; ++b) {
                if (b == a) continue;
                // same operand order as pcc_matrix so both routes round identically
                double v = a < b ? row_dot_over_n(zg.row(a), zg.row(b)) : row_dot_over_n(zg.row(b), zg.row(a));
                partners.emplace_back(std::fabs(v), b);
            }
            out[a] = top_k_mean(partners, k);
        }
    }
    return out;
}

double percentile_linear(std::span<const double> values, double tau) {
    if (values.empty()) throw DataError("percentile of an empty set");
    if (!(tau >= 0.0 && tau <= 100.0)) throw UsageError("percentile must be within [0, 100]");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    double pos = tau / 100.0 * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo >= v.size() - 1) return v.back();
    double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

std::vector<std::size_t> dysregulated_rows(std::span<const double> z_column, double tau) {
    std::vector<double> magnitude(z_column.size());
    std::transform(z_column.begin(), z_column.end(), magnitude.begin(), [](double z) { return std::fabs(z); });
    double threshold = percentile_linear(magnitude, tau);
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < magnitude.size(); ++i) {
        if (magnitude[i] >= threshold) rows.push_back(i);
    }
    return rows;
}

GeneSet dysregulated_genes(std::span<const double> z_column, const std::vector<GeneSymbol>& genes,
                           double tau) {
    if (z_column.size() != genes.size()) throw DataError("z column and gene list differ in length");
    GeneSet out;
    for (auto r : dysregulated_rows(z_column, tau)) out.insert(genes[r]);
    return out;
}

} // namespace gig
