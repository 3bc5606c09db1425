#pragma once

#include "gig/geneid.hpp"
#include "gig/graph.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gig {

// Dense row-major matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::vector<double> column(std::size_t c) const;

    const std::vector<double>& data() const noexcept { return data_; }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Genes x samples expression values. Gene symbols and sample ids are unique,
// values finite, and both dimensions non-zero.
class ExpressionMatrix {
public:
    ExpressionMatrix(std::vector<GeneSymbol> genes, std::vector<std::string> samples, DenseMatrix values);

    const std::vector<GeneSymbol>& genes() const noexcept { return genes_; }
    const std::vector<std::string>& samples() const noexcept { return samples_; }
    const DenseMatrix& values() const noexcept { return values_; }
    std::size_t gene_count() const noexcept { return genes_.size(); }
    std::size_t sample_count() const noexcept { return samples_.size(); }

    GeneSet gene_set() const;

    friend bool operator==(const ExpressionMatrix&, const ExpressionMatrix&) = default;

private:
    std::vector<GeneSymbol> genes_;
    std::vector<std::string> samples_;
    DenseMatrix values_;
};

enum class Orientation { genes_in_rows, genes_in_cols };

// A matrix file as read from disk, before identifier canonicalization.
struct RawMatrix {
    std::vector<std::string> row_ids;
    std::vector<std::string> samples;
    DenseMatrix values;
};

// TSV or CSV (delimiter sniffed from the header line). The first column holds
// identifiers and the header row holds the other axis.
RawMatrix read_raw_matrix(std::istream& in, Orientation orientation);
RawMatrix load_raw_matrix(const std::filesystem::path& path, Orientation orientation);

struct CanonicalizationReport {
    std::vector<std::string> unmapped;    // no HGNC symbol (or not protein-coding when required)
    std::vector<std::string> duplicates;  // later rows whose symbol was already taken
};

// Maps row identifiers to HGNC symbols. When several rows share a symbol the
// first one in file order is kept.
ExpressionMatrix canonicalize_rows(const RawMatrix& raw, const GeneIdMapping& table,
                                   bool require_protein_coding, CanonicalizationReport* report = nullptr);

void write_expression_matrix(std::ostream& out, const ExpressionMatrix& m);
ExpressionMatrix read_expression_matrix(std::istream& in);
void save_expression_matrix(const std::filesystem::path& path, const ExpressionMatrix& m);
ExpressionMatrix load_expression_matrix(const std::filesystem::path& path);

// Population (divide-by-n) mean and standard deviation.
double mean_of(std::span<const double> v);
double population_sd(std::span<const double> v);

ExpressionMatrix log1p_transform(const ExpressionMatrix& m);

// Keeps the min(n, G) genes with the largest across-sample variance, in their
// original relative order. Ties go to the earlier row.
ExpressionMatrix select_hvg(const ExpressionMatrix& m, std::size_t n);

// (x - mean) / (sd + epsilon) down each sample column.
DenseMatrix samplewise_zscores(const ExpressionMatrix& m, double epsilon = 1e-8);
// (x - mean) / (sd + epsilon) along each gene row.
DenseMatrix genewise_zscores(const ExpressionMatrix& m, double epsilon = 1e-8);

// r(g,h) = (1/N) sum_i zg(g,i) zg(h,i) over gene-wise z-scores. G x G, symmetric.
DenseMatrix pcc_matrix(const DenseMatrix& zg);

// Mean |r(g,h)| over the min(k, G-1) partners h != g with the largest |r|
// (ties to the lower row). Zero when G == 1.
std::vector<double> pcc_node_feature(const DenseMatrix& r, std::size_t k);

// Same result as pcc_node_feature(pcc_matrix(zg), k) without materializing the
// G x G matrix; rows are processed in parallel.
std::vector<double> pcc_topk_feature(const DenseMatrix& zg, std::size_t k);

// Linear interpolation between order statistics (position tau/100 * (n-1)).
double percentile_linear(std::span<const double> values, double tau);

// Rows whose |z| is at least the tau-th percentile of |z| over the column, ascending.
std::vector<std::size_t> dysregulated_rows(std::span<const double> z_column, double tau);
GeneSet dysregulated_genes(std::span<const double> z_column, const std::vector<GeneSymbol>& genes,
                           double tau);

} // namespace gig
