#pragma once
// Joint-grade analysis: contingency tables of two grade variables, their
// normalised distributions, divergence and residuals.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ordsoft::joint {

inline constexpr double kDefaultKldEpsilon = 1e-6;

// Row-major counts; rows follow the first grading axis, columns the second.
class ContingencyTable {
public:
    ContingencyTable(int rows, int cols);
    ContingencyTable(int rows, int cols, std::vector<std::int64_t> counts);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::int64_t at(int i, int j) const { return counts_[index(i, j)]; }
    void add(int i, int j, std::int64_t count = 1);
    std::int64_t total() const;
    std::span<const std::int64_t> counts() const { return counts_; }

    // Copy enlarged with zero cells.
    ContingencyTable padded(int rows, int cols) const;

    // Table of paired grades.
    static ContingencyTable from_pairs(std::span<const int> a, std::span<const int> b, int rows, int cols);

    std::string row_axis = "a";
    std::string col_axis = "b";

    void write_csv(std::ostream& out) const;
    static ContingencyTable read_csv(std::istream& in);
    void save(const std::string& path) const;
    static ContingencyTable load(const std::string& path);

    bool operator==(const ContingencyTable& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && counts_ == o.counts_;
    }

private:
    std::size_t index(int i, int j) const;

    int rows_;
    int cols_;
    std::vector<std::int64_t> counts_;
};

// Row-major real matrix; used for distributions and residuals.
struct Grid {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    double at(int i, int j) const {
        return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)];
    }
    double sum() const;
    bool same_shape(const Grid& o) const { return rows == o.rows && cols == o.cols; }
};

// Entries >= 0 summing to 1.
class JointDistribution {
public:
    explicit JointDistribution(Grid probs);
    const Grid& grid() const { return grid_; }
    int rows() const { return grid_.rows; }
    int cols() const { return grid_.cols; }
    double at(int i, int j) const { return grid_.at(i, j); }

private:
    Grid grid_;
};

JointDistribution normalise(const ContingencyTable& table);

// Mean of several distributions of equal shape.
JointDistribution average(std::span<const JointDistribution> dists);

// sum P' log(P' / Q') with X' = (X + eps) / (1 + eps * cells) on both sides;
// natural log. Identical inputs give exactly zero.
// Returns +infinity when eps = 0 and Q vanishes where P does not.
double kld(const JointDistribution& p, const JointDistribution& q, double epsilon = kDefaultKldEpsilon);

// R = P - Q.
Grid residuals(const JointDistribution& p, const JointDistribution& q);

// Mean absolute cell difference between two distributions.
double table_mae(const JointDistribution& p, const JointDistribution& q);

// Mean absolute cell difference between raw count tables.
double table_mae_counts(const ContingencyTable& a, const ContingencyTable& b);

}  // namespace ordsoft::joint
