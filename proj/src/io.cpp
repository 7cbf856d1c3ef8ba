#include "netinfer/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "netinfer/errors.hpp"

namespace netinfer {

namespace {

std::string fmt_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open for reading: " + path);
    return f;
}

}  // namespace

void write_matrix_csv(const std::string& path, const Mat& m) {
    auto f = open_out(path);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) f << ',';
            f << fmt_full(m(i, j));
        }
        f << '\n';
    }
}

Mat read_matrix_csv(const std::string& path) {
    auto f = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& tok : split(line, ',')) row.push_back(std::stod(tok));
        if (!rows.empty() && row.size() != rows.front().size())
            throw ConfigError("ragged matrix CSV: " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("empty matrix CSV: " + path);
    Mat m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

void write_vector_csv(const std::string& path, const std::vector<double>& v) {
    auto f = open_out(path);
    for (double x : v) f << fmt_full(x) << '\n';
}

std::vector<double> read_vector_csv(const std::string& path) {
    auto f = open_in(path);
    std::vector<double> v;
    std::string line;
    while (std::getline(f, line))
        if (!line.empty()) v.push_back(std::stod(line));
    return v;
}

void write_time_series_csv(const std::string& path, const TimeSeries& ts) {
    auto f = open_out(path);
    f << "T," << ts.T << '\n';
    for (int v = 0; v < ts.n; ++v) {
        auto row = ts.node_row(v);
        for (long t = 0; t < ts.T; ++t) {
            if (t) f << ',';
            f << (row[t] ? '1' : '0');
        }
        f << '\n';
    }
}

TimeSeries read_time_series_csv(const std::string& path) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw ConfigError("empty time series CSV: " + path);
    auto header = split(line, ',');
    if (header.size() != 2 || header[0] != "T")
        throw ConfigError("time series CSV must start with a 'T,<steps>' header");
    long T = std::stol(header[1]);
    std::vector<std::vector<std::uint8_t>> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<std::uint8_t> row;
        for (const auto& tok : split(line, ',')) row.push_back(tok == "1" ? 1 : 0);
        if (static_cast<long>(row.size()) != T)
            throw ConfigError("time series row length != T in " + path);
        rows.push_back(std::move(row));
    }
    TimeSeries ts(static_cast<int>(rows.size()), T);
    for (int v = 0; v < ts.n; ++v)
        for (long t = 0; t < T; ++t) ts.set(v, t, rows[v][t]);
    return ts;
}

void write_occupancy_csv(const std::string& path, const OccupancyTrace& trace) {
    auto f = open_out(path);
    f << "T," << trace.T << '\n';
    for (int v = 0; v < trace.n; ++v) {
        for (long t = 0; t < trace.T; ++t) {
            if (t) f << ',';
            f << trace.at(t, v);
        }
        f << '\n';
    }
}

void write_events_csv(const std::string& path, std::span<const TransmissionEvent> events) {
    auto f = open_out(path);
    f << "node,time,message_id,hop_index\n";
    for (const auto& e : events)
        f << e.node << ',' << fmt_full(e.time) << ',' << e.message_id << ',' << e.hop_index
          << '\n';
}

std::vector<TransmissionEvent> read_events_csv(const std::string& path) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw ConfigError("empty events CSV: " + path);
    std::vector<TransmissionEvent> events;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto tok = split(line, ',');
        if (tok.size() != 4) throw ConfigError("bad events row: " + line);
        events.push_back({std::stoi(tok[0]), std::stod(tok[1]), std::stoi(tok[2]),
                          std::stoi(tok[3])});
    }
    return events;
}

void write_power_csv(const std::string& path, const PowerMatrix& pd) {
    write_matrix_csv(path, pd.values);
}

void write_assignment_csv(const std::string& path, std::span<const long> interval_index,
                          std::span<const int> assignment, std::span<const int> labels) {
    auto f = open_out(path);
    f << "interval,cluster,label\n";
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        int label = labels.empty() ? -1 : labels[assignment[i]];
        f << interval_index[i] << ',' << assignment[i] << ',' << label << '\n';
    }
}

std::string read_text_file(const std::string& path) {
    auto f = open_in(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    auto f = open_out(path);
    f << text;
}

}  // namespace netinfer
