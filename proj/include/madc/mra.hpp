#pragma once

// MapReduce Arrays: construction from a Steiner system, an independent
// validator for arbitrary grids, structural statistics and CSV exchange.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "madc/design.hpp"
#include "madc/error.hpp"
#include "madc/subsets.hpp"

namespace madc {

/// Either the Star symbol or a non-negative integer.
class MraEntry {
  public:
    constexpr MraEntry() = default;
    static constexpr MraEntry star() { return MraEntry(); }
    static constexpr MraEntry integer(std::uint64_t v) {
        MraEntry e;
        e.star_ = false;
        e.value_ = v;
        return e;
    }

    constexpr bool is_star() const noexcept { return star_; }
    constexpr bool is_integer() const noexcept { return !star_; }
    std::uint64_t value() const {
        if (star_) throw std::logic_error("MraEntry::value on a Star entry");
        return value_;
    }

    std::string to_string() const { return star_ ? "*" : std::to_string(value_); }

    friend constexpr bool operator==(const MraEntry&, const MraEntry&) = default;

  private:
    bool star_ = true;
    std::uint64_t value_ = 0;
};

/// Dense row-major F×K grid; indices are 0-based.
class MraGrid {
  public:
    MraGrid() = default;
    MraGrid(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols) {}
    MraGrid(std::initializer_list<std::initializer_list<MraEntry>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        for (const auto& r : rows) {
            if (r.size() != cols_) throw ValidationError("MraGrid: ragged rows");
            cells_.insert(cells_.end(), r.begin(), r.end());
        }
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const MraEntry& at(std::size_t r, std::size_t c) const { return cells_.at(r * cols_ + c); }
    MraEntry& at(std::size_t r, std::size_t c) { return cells_.at(r * cols_ + c); }

    friend bool operator==(const MraGrid&, const MraGrid&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<MraEntry> cells_;
};

struct MraColumn {
    std::size_t block_index = 0;  // position of the block in design order
    KSubset block;                // A
    KSubset u;                    // U ⊆ A, |U| = t
    friend bool operator==(const MraColumn&, const MraColumn&) = default;
};

/// Array built from (or labelled like) a design: rows are mappers 1..Λ,
/// columns are (A, U) pairs grouped by block.
struct Mra {
    int num_points = 0;  // Λ = F
    int t = 0;
    int alpha = 0;
    std::vector<KSubset> blocks;  // design order
    std::vector<int> row_labels;
    std::vector<MraColumn> columns;
    MraGrid grid;

    std::size_t rows() const noexcept { return grid.rows(); }
    std::size_t cols() const noexcept { return grid.cols(); }
    /// Number of columns per block, C(α, t).
    std::size_t cols_per_block() const { return static_cast<std::size_t>(binomial(alpha, t)); }
    const MraEntry& at(std::size_t r, std::size_t c) const { return grid.at(r, c); }

    friend bool operator==(const Mra&, const Mra&) = default;
};

/// Algorithm over a Steiner system: entry (λ, (A, U)) is Star when λ ∈ A and
/// otherwise the lexicographic rank of {λ} ∪ U among (t+1)-subsets of [Λ].
inline Mra build_mra(const Design& design) {
    if (design.m != 1) {
        throw UnsupportedDesign("build_mra: requires a t-(Λ,α,1) design, got m=" +
                                std::to_string(design.m));
    }
    if (design.num_points <= design.alpha) {
        throw UnsupportedDesign("build_mra: requires Λ > α, got " + design.label());
    }
    const DesignReport report = validate_design(design);
    if (!report.valid) throw ValidationError("build_mra: invalid design: " + report.summary());

    Mra mra;
    mra.num_points = design.num_points;
    mra.t = design.t;
    mra.alpha = design.alpha;
    mra.blocks = design.blocks;
    for (int lambda = 1; lambda <= design.num_points; ++lambda) mra.row_labels.push_back(lambda);
    for (std::size_t b = 0; b < design.blocks.size(); ++b) {
        for (KSubset& u : subsets_of(design.blocks[b], design.t)) {
            mra.columns.push_back({b, design.blocks[b], std::move(u)});
        }
    }
    mra.grid = MraGrid(mra.row_labels.size(), mra.columns.size());
    for (std::size_t r = 0; r < mra.row_labels.size(); ++r) {
        const int lambda = mra.row_labels[r];
        for (std::size_t c = 0; c < mra.columns.size(); ++c) {
            const MraColumn& col = mra.columns[c];
            mra.grid.at(r, c) = col.block.contains(lambda)
                                    ? MraEntry::star()
                                    : MraEntry::integer(rank_subset(design.num_points, col.u.with(lambda)));
        }
    }
    return mra;
}

struct MraViolation {
    std::size_t row = 0;  // 0-based position of the first entry involved
    std::size_t col = 0;
    std::string message;
};

struct MraReport {
    bool is_mra = true;
    std::optional<std::uint64_t> g;  // common multiplicity (>= 2) of all integers, if any
    std::uint64_t S = 0;             // distinct integers present
    std::vector<MraViolation> violations;

    std::string regularity() const { return g ? std::to_string(*g) : "irregular"; }
};

/// Position of an integer inside a grid (0-based).
struct Cell {
    std::size_t row = 0;
    std::size_t col = 0;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Every integer mapped to its cells in row-major order.
inline std::map<std::uint64_t, std::vector<Cell>> integer_cells(const MraGrid& grid) {
    std::map<std::uint64_t, std::vector<Cell>> out;
    for (std::size_t r = 0; r < grid.rows(); ++r) {
        for (std::size_t c = 0; c < grid.cols(); ++c) {
            const MraEntry& e = grid.at(r, c);
            if (e.is_integer()) out[e.value()].push_back({r, c});
        }
    }
    return out;
}

/// Checks C1 (every integer occurs more than once) and C2 (equal integers sit
/// in distinct rows and columns with Star at both crossings) over all pairs.
inline MraReport validate_mra(const MraGrid& grid) {
    MraReport report;
    const auto cells = integer_cells(grid);
    report.S = cells.size();

    std::set<std::uint64_t> multiplicities;
    for (const auto& [value, where] : cells) {
        multiplicities.insert(where.size());
        if (where.size() < 2) {
            report.violations.push_back({where[0].row, where[0].col,
                                         "C1: integer " + std::to_string(value) + " occurs once"});
        }
        for (std::size_t i = 0; i < where.size(); ++i) {
            for (std::size_t j = i + 1; j < where.size(); ++j) {
                const Cell a = where[i];
                const Cell b = where[j];
                std::string why;
                if (a.row == b.row) {
                    why = "share row " + std::to_string(a.row + 1);
                } else if (a.col == b.col) {
                    why = "share column " + std::to_string(a.col + 1);
                } else if (!grid.at(a.row, b.col).is_star() || !grid.at(b.row, a.col).is_star()) {
                    why = "crossing entries are not both Star";
                }
                if (!why.empty()) {
                    report.violations.push_back(
                        {a.row, a.col,
                         "C2: integer " + std::to_string(value) + " at (" +
                             std::to_string(a.row + 1) + "," + std::to_string(a.col + 1) + ") and (" +
                             std::to_string(b.row + 1) + "," + std::to_string(b.col + 1) + ") " + why});
                }
            }
        }
    }
    std::stable_sort(report.violations.begin(), report.violations.end(),
                     [](const MraViolation& x, const MraViolation& y) {
                         return std::tie(x.row, x.col) < std::tie(y.row, y.col);
                     });
    report.is_mra = report.violations.empty();
    if (multiplicities.size() == 1 && *multiplicities.begin() >= 2) report.g = *multiplicities.begin();
    return report;
}

inline MraReport validate_mra(const Mra& mra) { return validate_mra(mra.grid); }

struct MraStats {
    std::uint64_t S = 0;
    std::optional<std::uint64_t> g;
    std::vector<std::uint64_t> stars_per_column;
    std::vector<std::uint64_t> stars_per_row;
    std::vector<std::uint64_t> missing_ranks;  // ranks in [C(Λ,t+1)] absent from the grid
    std::uint64_t S_prime = 0;
    bool closed_forms_hold = false;  // S + S' = C(Λ,t+1) and S' = C(Λ,t)(α−t)/(t+1)
};

inline MraStats mra_stats(const Mra& mra) {
    MraStats stats;
    const auto cells = integer_cells(mra.grid);
    stats.S = cells.size();
    const MraReport report = validate_mra(mra.grid);
    stats.g = report.g;

    stats.stars_per_column.assign(mra.cols(), 0);
    stats.stars_per_row.assign(mra.rows(), 0);
    for (std::size_t r = 0; r < mra.rows(); ++r) {
        for (std::size_t c = 0; c < mra.cols(); ++c) {
            if (mra.at(r, c).is_star()) {
                ++stats.stars_per_column[c];
                ++stats.stars_per_row[r];
            }
        }
    }
    const std::uint64_t total = binomial(mra.num_points, mra.t + 1);
    for (std::uint64_t rank = 1; rank <= total; ++rank) {
        if (!cells.contains(rank)) stats.missing_ranks.push_back(rank);
    }
    stats.S_prime = stats.missing_ranks.size();

    const std::uint64_t tp1 = static_cast<std::uint64_t>(mra.t + 1);
    const std::uint64_t s_prime_num =
        binomial(mra.num_points, mra.t) * static_cast<std::uint64_t>(mra.alpha - mra.t);
    stats.closed_forms_hold = stats.S + stats.S_prime == total && s_prime_num % tp1 == 0 &&
                              stats.S_prime == s_prime_num / tp1;
    return stats;
}

/// CSV: a block label row and a U label row (first cell empty), then one row
/// per mapper starting with its "{λ}" label. Labels concatenate digits when
/// Λ <= 9 and are space separated otherwise.
inline std::string export_mra(const Mra& mra) {
    const bool compact = mra.num_points <= 9;
    std::string out;
    for (const auto& col : mra.columns) out += "," + col.block.to_string(compact);
    out += "\n";
    for (const auto& col : mra.columns) out += "," + col.u.to_string(compact);
    out += "\n";
    for (std::size_t r = 0; r < mra.rows(); ++r) {
        out += KSubset{mra.row_labels[r]}.to_string(compact);
        for (std::size_t c = 0; c < mra.cols(); ++c) out += "," + mra.at(r, c).to_string();
        out += "\n";
    }
    return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        cells.emplace_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

inline int parse_positive(std::string_view s, std::string_view what) {
    int v = 0;
    if (s.empty()) throw ParseError(std::string(what) + ": empty number");
    for (char ch : s) {
        if (ch < '0' || ch > '9') throw ParseError(std::string(what) + ": bad number \"" + std::string(s) + "\"");
        v = v * 10 + (ch - '0');
        if (v > kMaxGroundSet) throw ParseError(std::string(what) + ": point too large");
    }
    if (v < 1) throw ParseError(std::string(what) + ": point must be positive");
    return v;
}

inline KSubset parse_label(std::string_view s, bool compact) {
    if (s.size() < 2 || s.front() != '{' || s.back() != '}') {
        throw ParseError("MRA CSV: bad set label \"" + std::string(s) + "\"");
    }
    s = s.substr(1, s.size() - 2);
    std::vector<int> pts;
    if (compact) {
        for (char ch : s) pts.push_back(parse_positive(std::string_view(&ch, 1), "MRA CSV label"));
    } else {
        std::size_t start = 0;
        for (;;) {
            const std::size_t sp = s.find(' ', start);
            pts.push_back(parse_positive(s.substr(start, sp - start), "MRA CSV label"));
            if (sp == std::string_view::npos) break;
            start = sp + 1;
        }
    }
    try {
        return KSubset(std::move(pts));
    } catch (const ValidationError& e) {
        throw ParseError(std::string("MRA CSV: ") + e.what());
    }
}

}  // namespace detail

inline Mra import_mra(std::string_view text) {
    std::vector<std::string> lines;
    {
        std::string buf(text);
        std::istringstream in(buf);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.push_back(line);
        }
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.size() < 3) throw ParseError("MRA CSV: need two header rows and at least one data row");

    Mra mra;
    mra.num_points = static_cast<int>(lines.size() - 2);
    const bool compact = mra.num_points <= 9;
    const auto block_row = detail::split_csv_line(lines[0]);
    const auto u_row = detail::split_csv_line(lines[1]);
    if (block_row.size() != u_row.size() || block_row.size() < 2 || !block_row[0].empty() ||
        !u_row[0].empty()) {
        throw ParseError("MRA CSV: malformed header rows");
    }
    const std::size_t cols = block_row.size() - 1;
    for (std::size_t c = 0; c < cols; ++c) {
        KSubset block = detail::parse_label(block_row[c + 1], compact);
        KSubset u = detail::parse_label(u_row[c + 1], compact);
        if (!u.is_subset_of(block)) throw ParseError("MRA CSV: U label not inside its block");
        if (mra.blocks.empty() || mra.blocks.back() != block) mra.blocks.push_back(block);
        mra.columns.push_back({mra.blocks.size() - 1, std::move(block), std::move(u)});
    }
    mra.t = static_cast<int>(mra.columns.front().u.size());
    mra.alpha = static_cast<int>(mra.columns.front().block.size());

    mra.grid = MraGrid(static_cast<std::size_t>(mra.num_points), cols);
    for (std::size_t r = 0; r < static_cast<std::size_t>(mra.num_points); ++r) {
        const auto cells = detail::split_csv_line(lines[r + 2]);
        if (cells.size() != cols + 1) {
            throw ParseError("MRA CSV: row " + std::to_string(r + 1) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(cols + 1));
        }
        const KSubset row_label = detail::parse_label(cells[0], compact);
        if (row_label.size() != 1) throw ParseError("MRA CSV: row label must be a single point");
        mra.row_labels.push_back(row_label[0]);
        for (std::size_t c = 0; c < cols; ++c) {
            const std::string& cell = cells[c + 1];
            if (cell == "*") continue;
            if (cell.empty() || cell.find_first_not_of("0123456789") != std::string::npos ||
                cell.size() > 19) {
                throw ParseError("MRA CSV: bad cell \"" + cell + "\"");
            }
            mra.grid.at(r, c) = MraEntry::integer(std::stoull(cell));
        }
    }
    return mra;
}

}  // namespace madc
