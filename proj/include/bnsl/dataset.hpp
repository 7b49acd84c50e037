#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace bnsl {

enum class ColumnKind { Discrete, Continuous };

struct SchemaColumn {
    std::string name;
    ColumnKind kind = ColumnKind::Continuous;
    std::vector<std::string> levels;  // discrete only, ordered
};

struct Schema {
    std::vector<SchemaColumn> columns;

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i].name == name) return static_cast<int>(i);
        return -1;
    }

    void validate() const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            const auto& c = columns[i];
            if (c.name.empty()) throw std::invalid_argument("schema: empty column name");
            for (std::size_t k = i + 1; k < columns.size(); ++k)
                if (columns[k].name == c.name)
                    throw std::invalid_argument("schema: duplicate column name '" + c.name + "'");
            if (c.kind == ColumnKind::Discrete && c.levels.size() < 2)
                throw std::invalid_argument("schema: discrete column '" + c.name + "' needs >= 2 levels");
        }
    }
};

// Columnar table: discrete columns as 0-based level codes, continuous
// columns as doubles. Immutable after construction.
class Dataset {
public:
    Dataset() = default;
    Dataset(Schema schema, std::size_t n,
            std::vector<std::vector<std::int32_t>> codes,
            std::vector<std::vector<double>> reals)
        : schema_(std::move(schema)), n_(n), codes_(std::move(codes)), reals_(std::move(reals)) {
        check();
    }

    const Schema& schema() const { return schema_; }
    std::size_t n() const { return n_; }
    std::size_t num_columns() const { return schema_.columns.size(); }
    ColumnKind kind(int col) const { return schema_.columns[col].kind; }
    bool is_discrete(int col) const { return kind(col) == ColumnKind::Discrete; }
    int num_levels(int col) const { return static_cast<int>(schema_.columns[col].levels.size()); }
    const std::string& name(int col) const { return schema_.columns[col].name; }
    int column(const std::string& name) const {
        int c = schema_.index_of(name);
        if (c < 0) throw std::invalid_argument("no such column: " + name);
        return c;
    }

    const std::vector<std::int32_t>& codes(int col) const { return codes_[col]; }
    const std::vector<double>& reals(int col) const { return reals_[col]; }

    Dataset take_rows(const std::vector<std::uint32_t>& rows) const {
        std::vector<std::vector<std::int32_t>> codes(codes_.size());
        std::vector<std::vector<double>> reals(reals_.size());
        for (std::size_t c = 0; c < schema_.columns.size(); ++c) {
            if (is_discrete(static_cast<int>(c))) {
                codes[c].reserve(rows.size());
                for (auto r : rows) codes[c].push_back(codes_[c][r]);
            } else {
                reals[c].reserve(rows.size());
                for (auto r : rows) reals[c].push_back(reals_[c][r]);
            }
        }
        return Dataset(schema_, rows.size(), std::move(codes), std::move(reals));
    }

private:
    void check() const {
        schema_.validate();
        if (codes_.size() != schema_.columns.size() || reals_.size() != schema_.columns.size())
            throw std::invalid_argument("dataset: column storage mismatch");
        for (std::size_t c = 0; c < schema_.columns.size(); ++c) {
            if (is_discrete(static_cast<int>(c))) {
                if (codes_[c].size() != n_) throw std::invalid_argument("dataset: ragged column");
                int l = num_levels(static_cast<int>(c));
                for (auto v : codes_[c])
                    if (v < 0 || v >= l) throw std::invalid_argument("dataset: level code out of range");
            } else {
                if (reals_[c].size() != n_) throw std::invalid_argument("dataset: ragged column");
            }
        }
    }

    Schema schema_;
    std::size_t n_ = 0;
    std::vector<std::vector<std::int32_t>> codes_;
    std::vector<std::vector<double>> reals_;
};

struct SplitSpec {
    double test_fraction = 0.25;
    std::uint64_t seed = 0;
};

namespace detail {

inline bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e && std::isfinite(out);
}

// RFC-4180-style field splitter; supports quoted fields with "" escapes and
// embedded separators/newlines. `text` is the full file contents.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false, field_started = false, any = false;
    std::size_t i = 0;
    auto end_field = [&] {
        row.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
        any = false;
    };
    while (i < text.size()) {
        char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (ch == ',') {
            end_field();
            any = true;
        } else if (ch == '\n') {
            if (any || !field.empty() || field_started) end_row();
        } else if (ch == '\r') {
            // swallowed; handled with the following '\n'
        } else {
            field += ch;
            field_started = true;
        }
        ++i;
    }
    if (in_quotes) throw std::runtime_error("csv: unterminated quoted field");
    if (any || !field.empty() || field_started) end_row();
    return rows;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

inline Dataset load_csv_text(const std::string& text, const Schema* schema = nullptr) {
    auto rows = detail::parse_csv(text);
    if (rows.empty()) throw std::runtime_error("csv: no header row");
    const auto& header = rows.front();
    const std::size_t ncol = header.size();
    const std::size_t nrow = rows.size() - 1;
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r].size() != ncol)
            throw std::runtime_error("csv: ragged row " + std::to_string(r));
    for (std::size_t r = 1; r < rows.size(); ++r)
        for (const auto& v : rows[r])
            if (v.empty()) throw std::runtime_error("csv: empty field (missing values rejected)");

    Schema sch;
    if (schema) {
        sch = *schema;
        sch.validate();
        if (sch.columns.size() != ncol) throw std::runtime_error("csv: header does not match schema");
        for (std::size_t c = 0; c < ncol; ++c)
            if (sch.columns[c].name != header[c])
                throw std::runtime_error("csv: header column '" + header[c] + "' does not match schema");
    } else {
        // Inference: continuous iff every value parses as a finite number;
        // otherwise discrete with levels in first-appearance order.
        sch.columns.resize(ncol);
        for (std::size_t c = 0; c < ncol; ++c) {
            sch.columns[c].name = header[c];
            bool numeric = true;
            double tmp;
            for (std::size_t r = 1; r < rows.size() && numeric; ++r)
                numeric = detail::parse_double(rows[r][c], tmp);
            if (numeric) {
                sch.columns[c].kind = ColumnKind::Continuous;
            } else {
                sch.columns[c].kind = ColumnKind::Discrete;
                for (std::size_t r = 1; r < rows.size(); ++r) {
                    const auto& v = rows[r][c];
                    if (std::find(sch.columns[c].levels.begin(), sch.columns[c].levels.end(), v) ==
                        sch.columns[c].levels.end())
                        sch.columns[c].levels.push_back(v);
                }
            }
        }
        sch.validate();
    }

    std::vector<std::vector<std::int32_t>> codes(ncol);
    std::vector<std::vector<double>> reals(ncol);
    for (std::size_t c = 0; c < ncol; ++c) {
        if (sch.columns[c].kind == ColumnKind::Discrete) {
            codes[c].reserve(nrow);
            for (std::size_t r = 1; r < rows.size(); ++r) {
                const auto& v = rows[r][c];
                auto it = std::find(sch.columns[c].levels.begin(), sch.columns[c].levels.end(), v);
                if (it == sch.columns[c].levels.end())
                    throw std::runtime_error("csv: value '" + v + "' not in declared levels of '" +
                                             sch.columns[c].name + "'");
                codes[c].push_back(static_cast<std::int32_t>(it - sch.columns[c].levels.begin()));
            }
        } else {
            reals[c].reserve(nrow);
            for (std::size_t r = 1; r < rows.size(); ++r) {
                double v;
                if (!detail::parse_double(rows[r][c], v))
                    throw std::runtime_error("csv: non-finite or non-numeric value '" + rows[r][c] +
                                             "' in continuous column '" + sch.columns[c].name + "'");
                reals[c].push_back(v);
            }
        }
    }
    return Dataset(std::move(sch), nrow, std::move(codes), std::move(reals));
}

inline Dataset load_csv(const std::string& path, const Schema* schema = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_csv_text(ss.str(), schema);
}

inline std::string format_real(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

inline void write_csv(const Dataset& ds, std::ostream& out) {
    const auto& cols = ds.schema().columns;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c) out << ',';
        out << detail::csv_quote(cols[c].name);
    }
    out << '\n';
    for (std::size_t r = 0; r < ds.n(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) out << ',';
            if (cols[c].kind == ColumnKind::Discrete)
                out << detail::csv_quote(cols[c].levels[ds.codes(static_cast<int>(c))[r]]);
            else
                out << format_real(ds.reals(static_cast<int>(c))[r]);
        }
        out << '\n';
    }
}

inline void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    write_csv(ds, out);
}

// Seeded shuffle; first round-half-up(n * test_fraction) shuffled rows form
// the test set, the rest the training set.
inline std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>
split_rows(std::size_t n, const SplitSpec& spec) {
    if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0))
        throw std::invalid_argument("split: test_fraction must be in (0,1)");
    if (n < 2) throw std::invalid_argument("split: need at least 2 rows");
    std::size_t test_n = static_cast<std::size_t>(std::floor(n * spec.test_fraction + 0.5));
    if (test_n < 1 || test_n >= n) throw std::invalid_argument("split: degenerate split");
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    std::mt19937_64 rng(spec.seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::uint32_t> test(perm.begin(), perm.begin() + test_n);
    std::vector<std::uint32_t> train(perm.begin() + test_n, perm.end());
    return {std::move(train), std::move(test)};
}

inline std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
    auto [train, test] = split_rows(ds.n(), spec);
    return {ds.take_rows(train), ds.take_rows(test)};
}

// Empirical means and covariance matrix (divisor m, MLE convention) of the
// selected continuous columns; exactly symmetric by construction.
inline std::pair<std::vector<double>, std::vector<std::vector<double>>>
moments(const Dataset& ds, const std::vector<int>& vars,
        const std::vector<std::uint32_t>* rows = nullptr) {
    for (int v : vars)
        if (ds.is_discrete(v)) throw std::invalid_argument("moments: column is not continuous");
    const std::size_t m = rows ? rows->size() : ds.n();
    if (m == 0) throw std::invalid_argument("moments: empty row selection");
    const std::size_t p = vars.size();
    std::vector<double> mean(p, 0.0);
    for (std::size_t a = 0; a < p; ++a) {
        const auto& col = ds.reals(vars[a]);
        double s = 0.0;
        if (rows)
            for (auto r : *rows) s += col[r];
        else
            for (std::size_t r = 0; r < m; ++r) s += col[r];
        mean[a] = s / static_cast<double>(m);
    }
    std::vector<std::vector<double>> cov(p, std::vector<double>(p, 0.0));
    for (std::size_t a = 0; a < p; ++a) {
        const auto& ca = ds.reals(vars[a]);
        for (std::size_t b = a; b < p; ++b) {
            const auto& cb = ds.reals(vars[b]);
            double s = 0.0;
            if (rows)
                for (auto r : *rows) s += (ca[r] - mean[a]) * (cb[r] - mean[b]);
            else
                for (std::size_t r = 0; r < m; ++r) s += (ca[r] - mean[a]) * (cb[r] - mean[b]);
            cov[a][b] = cov[b][a] = s / static_cast<double>(m);
        }
    }
    return {std::move(mean), std::move(cov)};
}

inline Schema schema_from_json(const nlohmann::json& j) {
    Schema sch;
    for (const auto& jc : j.at("columns")) {
        SchemaColumn c;
        c.name = jc.at("name").get<std::string>();
        std::string kind = jc.at("kind").get<std::string>();
        if (kind == "discrete") {
            c.kind = ColumnKind::Discrete;
            c.levels = jc.at("levels").get<std::vector<std::string>>();
        } else if (kind == "continuous") {
            c.kind = ColumnKind::Continuous;
        } else {
            throw std::runtime_error("schema: unknown kind '" + kind + "'");
        }
        sch.columns.push_back(std::move(c));
    }
    sch.validate();
    return sch;
}

inline nlohmann::json schema_to_json(const Schema& sch) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : sch.columns) {
        nlohmann::json jc;
        jc["name"] = c.name;
        jc["kind"] = c.kind == ColumnKind::Discrete ? "discrete" : "continuous";
        if (c.kind == ColumnKind::Discrete) jc["levels"] = c.levels;
        cols.push_back(std::move(jc));
    }
    return nlohmann::json{{"columns", std::move(cols)}};
}

}  // namespace bnsl
