#include "ordsoft/joint.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "ordsoft/csv.hpp"

namespace ordsoft::joint {

ContingencyTable::ContingencyTable(int rows, int cols)
    : ContingencyTable(rows, cols,
                       std::vector<std::int64_t>(static_cast<std::size_t>(std::max(rows, 0)) *
                                                     static_cast<std::size_t>(std::max(cols, 0)),
                                                 0)) {}

ContingencyTable::ContingencyTable(int rows, int cols, std::vector<std::int64_t> counts)
    : rows_(rows), cols_(cols), counts_(std::move(counts)) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("ContingencyTable: empty shape");
    if (counts_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        throw std::invalid_argument("ContingencyTable: count vector does not match shape");
    }
    for (auto c : counts_)
        if (c < 0) throw std::invalid_argument("ContingencyTable: negative count");
}

std::size_t ContingencyTable::index(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw std::out_of_range("ContingencyTable: cell out of range");
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
}

void ContingencyTable::add(int i, int j, std::int64_t count) {
    if (count < 0) throw std::invalid_argument("ContingencyTable: negative count");
    counts_[index(i, j)] += count;
}

std::int64_t ContingencyTable::total() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

ContingencyTable ContingencyTable::padded(int rows, int cols) const {
    if (rows < rows_ || cols < cols_) throw std::invalid_argument("ContingencyTable::padded: cannot shrink");
    ContingencyTable out(rows, cols);
    out.row_axis = row_axis;
    out.col_axis = col_axis;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.add(i, j, at(i, j));
    return out;
}

ContingencyTable ContingencyTable::from_pairs(std::span<const int> a, std::span<const int> b, int rows, int cols) {
    if (a.size() != b.size()) throw std::invalid_argument("ContingencyTable::from_pairs: length mismatch");
    ContingencyTable t(rows, cols);
    for (std::size_t n = 0; n < a.size(); ++n) t.add(a[n], b[n]);
    return t;
}

void ContingencyTable::write_csv(std::ostream& out) const {
    out << row_axis << '\\' << col_axis;
    for (int j = 0; j < cols_; ++j) out << ',' << j;
    out << '\n';
    for (int i = 0; i < rows_; ++i) {
        out << i;
        for (int j = 0; j < cols_; ++j) out << ',' << at(i, j);
        out << '\n';
    }
}

ContingencyTable ContingencyTable::read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("contingency CSV: missing header");
    const auto header = csv::split(line);
    if (header.size() < 2) throw std::runtime_error("contingency CSV: header needs at least one column grade");
    const int cols = static_cast<int>(header.size()) - 1;
    for (int j = 0; j < cols; ++j) {
        if (csv::parse_int(header[static_cast<std::size_t>(j) + 1]) != j) {
            throw std::runtime_error("contingency CSV: column grades must be 0..J-1 in order");
        }
    }
    std::vector<std::int64_t> counts;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = csv::split(line);
        if (static_cast<int>(cells.size()) != cols + 1) throw std::runtime_error("contingency CSV: ragged row");
        if (csv::parse_int(cells[0]) != rows) throw std::runtime_error("contingency CSV: row grades must be 0..J-1 in order");
        for (int j = 0; j < cols; ++j) {
            const double v = csv::parse_double(cells[static_cast<std::size_t>(j) + 1]);
            if (v < 0 || v != std::floor(v)) throw std::runtime_error("contingency CSV: counts must be non-negative integers");
            counts.push_back(static_cast<std::int64_t>(v));
        }
        ++rows;
    }
    if (rows == 0) throw std::runtime_error("contingency CSV: no rows");
    ContingencyTable t(rows, cols, std::move(counts));
    const auto slash = header[0].find('\\');
    if (slash != std::string::npos) {
        t.row_axis = header[0].substr(0, slash);
        t.col_axis = header[0].substr(slash + 1);
    }
    return t;
}

void ContingencyTable::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_csv(out);
}

ContingencyTable ContingencyTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return read_csv(in);
}

double Grid::sum() const {
    return std::accumulate(values.begin(), values.end(), 0.0);
}

JointDistribution::JointDistribution(Grid probs) : grid_(std::move(probs)) {
    if (grid_.rows < 1 || grid_.cols < 1 ||
        grid_.values.size() != static_cast<std::size_t>(grid_.rows) * static_cast<std::size_t>(grid_.cols)) {
        throw std::invalid_argument("JointDistribution: bad shape");
    }
    for (double v : grid_.values)
        if (!(v >= 0.0)) throw std::invalid_argument("JointDistribution: negative or NaN entry");
    if (std::fabs(grid_.sum() - 1.0) > 1e-9) throw std::invalid_argument("JointDistribution: entries do not sum to 1");
}

JointDistribution normalise(const ContingencyTable& table) {
    const auto total = table.total();
    if (total <= 0) throw std::invalid_argument("normalise: empty contingency table");
    Grid g{table.rows(), table.cols(), {}};
    g.values.reserve(table.counts().size());
    for (auto c : table.counts()) g.values.push_back(static_cast<double>(c) / static_cast<double>(total));
    return JointDistribution(std::move(g));
}

JointDistribution average(std::span<const JointDistribution> dists) {
    if (dists.empty()) throw std::invalid_argument("average: no distributions");
    Grid g{dists[0].rows(), dists[0].cols(), std::vector<double>(dists[0].grid().values.size(), 0.0)};
    for (const auto& d : dists) {
        if (!d.grid().same_shape(g)) throw std::invalid_argument("average: shape mismatch");
        for (std::size_t c = 0; c < g.values.size(); ++c) g.values[c] += d.grid().values[c];
    }
    for (double& v : g.values) v /= static_cast<double>(dists.size());
    return JointDistribution(std::move(g));
}

double kld(const JointDistribution& p, const JointDistribution& q, double epsilon) {
    if (!p.grid().same_shape(q.grid())) throw std::invalid_argument("kld: shape mismatch");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("kld: epsilon must be non-negative");
    const auto& pv = p.grid().values;
    const auto& qv = q.grid().values;
    const double norm = 1.0 + epsilon * static_cast<double>(pv.size());
    double d = 0.0;
    for (std::size_t c = 0; c < pv.size(); ++c) {
        // Both sides get the same additive smoothing so identical inputs give exactly zero.
        const double ps = (pv[c] + epsilon) / norm;
        if (ps == 0.0) continue;
        const double qs = (qv[c] + epsilon) / norm;
        if (qs == 0.0) return std::numeric_limits<double>::infinity();
        if (ps != qs) d += ps * std::log(ps / qs);
    }
    return std::max(d, 0.0);
}

Grid residuals(const JointDistribution& p, const JointDistribution& q) {
    if (!p.grid().same_shape(q.grid())) throw std::invalid_argument("residuals: shape mismatch");
    Grid r{p.rows(), p.cols(), std::vector<double>(p.grid().values.size())};
    for (std::size_t c = 0; c < r.values.size(); ++c) r.values[c] = p.grid().values[c] - q.grid().values[c];
    return r;
}

double table_mae(const JointDistribution& p, const JointDistribution& q) {
    if (!p.grid().same_shape(q.grid())) throw std::invalid_argument("table_mae: shape mismatch");
    double s = 0.0;
    for (std::size_t c = 0; c < p.grid().values.size(); ++c) s += std::fabs(p.grid().values[c] - q.grid().values[c]);
    return s / static_cast<double>(p.grid().values.size());
}

double table_mae_counts(const ContingencyTable& a, const ContingencyTable& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("table_mae_counts: shape mismatch");
    double s = 0.0;
    for (std::size_t c = 0; c < a.counts().size(); ++c)
        s += std::fabs(static_cast<double>(a.counts()[c] - b.counts()[c]));
    return s / static_cast<double>(a.counts().size());
}

}  // namespace ordsoft::joint
