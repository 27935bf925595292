#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "hvar/simulation.hpp"
#include "hvar/timeseries.hpp"
#include "hvar/types.hpp"

namespace hvar {

namespace detail {

/// Shortest decimal form that round-trips the double exactly.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& field, const std::string& where) {
    if (field.empty())
        throw std::runtime_error("csv: missing cell at " + where);
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end)
        throw std::runtime_error("csv: cannot parse '" + field + "' as a number at " + where);
    if (!std::isfinite(value))
        throw std::runtime_error("csv: non-finite value at " + where);
    return value;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace detail

/// Reads a panel from CSV: header of component names, then one row per time
/// point with one column per component. Missing cells and non-numeric or
/// non-finite values are rejected.
inline TimeSeriesPanel read_panel_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: '" + path + "' is empty");
    const auto names = detail::split_csv_line(line);
    if (names.empty() || (names.size() == 1 && names[0].empty()))
        throw std::runtime_error("csv: '" + path + "' has no header of component names");
    const std::size_t k = names.size();
    std::vector<std::vector<double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() && in.peek() == EOF) break;  // trailing newline
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != k)
            throw std::runtime_error("csv: line " + std::to_string(line_no) + " of '" + path +
                                     "' has " + std::to_string(fields.size()) + " cells, expected " +
                                     std::to_string(k));
        std::vector<double> row(k);
        for (std::size_t c = 0; c < k; ++c)
            row[c] = detail::parse_double(fields[c], "line " + std::to_string(line_no) +
                                                         ", column " + std::to_string(c + 1));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("csv: '" + path + "' has no data rows");
    Matrix values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (std::size_t c = 0; c < k; ++c)
            values(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(t)) = rows[t][c];
    return TimeSeriesPanel(std::move(values), names);
}

inline void write_panel_csv(const TimeSeriesPanel& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    for (int i = 0; i < panel.k(); ++i) out << (i ? "," : "") << panel.component_names[static_cast<std::size_t>(i)];
    out << "\n";
    for (int t = 0; t < panel.total_length(); ++t) {
        for (int i = 0; i < panel.k(); ++i)
            out << (i ? "," : "") << detail::format_double(panel.values(i, t));
        out << "\n";
    }
}

/// Long-format coefficient CSV: i,j,ell,value with 1-based indices.
inline void write_coefficients_csv(const CoefficientTensor& B, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << "i,j,ell,value\n";
    for (int i = 0; i < B.k(); ++i)
        for (int j = 0; j < B.k(); ++j)
            for (int ell = 1; ell <= B.p; ++ell)
                out << i + 1 << "," << j + 1 << "," << ell << ","
                    << detail::format_double(B.at(i, j, ell)) << "\n";
}

inline void write_intercept_csv(const CoefficientTensor& B, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << "i,value\n";
    for (int i = 0; i < B.k(); ++i)
        out << i + 1 << "," << detail::format_double(B.intercept(i)) << "\n";
}

/// Reads back the (coefficients, intercept) pair written by the fit command.
inline CoefficientTensor read_coefficients_csv(const std::string& coef_path,
                                               const std::string& intercept_path) {
    std::ifstream in(coef_path);
    if (!in) throw std::runtime_error("cannot open input file '" + coef_path + "'");
    std::string line;
    std::getline(in, line);
    int k = 0, p = 0;
    struct Entry {
        int i, j, ell;
        double value;
    };
    std::vector<Entry> entries;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 4)
            throw std::runtime_error("csv: bad coefficient row at line " + std::to_string(line_no));
        Entry e{std::stoi(f[0]), std::stoi(f[1]), std::stoi(f[2]),
                detail::parse_double(f[3], "line " + std::to_string(line_no))};
        k = std::max(k, std::max(e.i, e.j));
        p = std::max(p, e.ell);
        entries.push_back(e);
    }
    CoefficientTensor B = CoefficientTensor::zero(k, p);
    for (const auto& e : entries) B.at(e.i - 1, e.j - 1, e.ell) = e.value;

    std::ifstream nu_in(intercept_path);
    if (!nu_in) throw std::runtime_error("cannot open input file '" + intercept_path + "'");
    std::getline(nu_in, line);
    line_no = 1;
    while (std::getline(nu_in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 2)
            throw std::runtime_error("csv: bad intercept row at line " + std::to_string(line_no));
        const int i = std::stoi(f[0]);
        if (i < 1 || i > k) throw std::runtime_error("csv: intercept index out of range");
        B.intercept(i - 1) = detail::parse_double(f[1], "line " + std::to_string(line_no));
    }
    return B;
}

/// Maxlag matrix CSV: header of source-component names, one row per equation.
inline void write_maxlag_csv(const MaxlagMatrix& L, const std::vector<std::string>& names,
                             const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    for (Eigen::Index j = 0; j < L.cols(); ++j)
        out << (j ? "," : "") << names[static_cast<std::size_t>(j)];
    out << "\n";
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
        for (Eigen::Index j = 0; j < L.cols(); ++j) out << (j ? "," : "") << L(i, j);
        out << "\n";
    }
}

inline nlohmann::json maxlag_to_json(const MaxlagMatrix& L) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < L.cols(); ++j) row.push_back(L(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline MaxlagMatrix maxlag_from_json(const nlohmann::json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) throw std::runtime_error("truth json: empty maxlag matrix");
    const auto cols = static_cast<Eigen::Index>(j.at(0).size());
    MaxlagMatrix L(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c) L(i, c) = j.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(c)).get<int>();
    return L;
}

/// Truth sidecar for simulated datasets: scenario parameters, true_L, and
/// true_B flattened with index (i*k + j)*p + (ell-1).
inline nlohmann::json dataset_sidecar(const SimulatedDataset& ds, const ScenarioSpec& spec) {
    nlohmann::json j;
    j["scenario"] = static_cast<int>(spec.kind) + 1;
    j["k"] = spec.k;
    j["p"] = spec.p;
    j["T"] = spec.T;
    j["seed"] = spec.seed;
    j["sigma_u"] = spec.sigma_u;
    j["target_spectral_radius"] = spec.target_spectral_radius;
    j["true_p"] = ds.true_B.p;
    j["true_L"] = maxlag_to_json(ds.true_L);
    nlohmann::json values = nlohmann::json::array();
    const int k = ds.true_B.k();
    for (int i = 0; i < k; ++i)
        for (int jj = 0; jj < k; ++jj)
            for (int ell = 1; ell <= ds.true_B.p; ++ell) values.push_back(ds.true_B.at(i, jj, ell));
    j["true_B"] = std::move(values);
    return j;
}

struct DatasetTruth {
    MaxlagMatrix L;
    CoefficientTensor B;
};

inline DatasetTruth read_truth_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open truth file '" + path + "'");
    nlohmann::json j;
    in >> j;
    DatasetTruth truth;
    truth.L = maxlag_from_json(j.at("true_L"));
    const int k = static_cast<int>(truth.L.rows());
    const int p = j.at("true_p").get<int>();
    truth.B = CoefficientTensor::zero(k, p);
    const auto& values = j.at("true_B");
    if (static_cast<int>(values.size()) != k * k * p)
        throw std::runtime_error("truth json: true_B has wrong length");
    std::size_t idx = 0;
    for (int i = 0; i < k; ++i)
        for (int jj = 0; jj < k; ++jj)
            for (int ell = 1; ell <= p; ++ell) truth.B.at(i, jj, ell) = values.at(idx++).get<double>();
    return truth;
}

inline void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace hvar
