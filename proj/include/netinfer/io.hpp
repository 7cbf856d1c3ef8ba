#pragma once

#include <string>
#include <vector>

#include "netinfer/markov_sim.hpp"
#include "netinfer/matrix.hpp"
#include "netinfer/sensor_sim.hpp"
#include "netinfer/traffic_sim.hpp"

namespace netinfer {

// Matrices: plain CSV, row-major, full (%.17g) precision, no header.
void write_matrix_csv(const std::string& path, const Mat& m);
Mat read_matrix_csv(const std::string& path);

// Vectors: one value per line.
void write_vector_csv(const std::string& path, const std::vector<double>& v);
std::vector<double> read_vector_csv(const std::string& path);

// Time series: header line "T,<T>", then one 0/1 row per node.
void write_time_series_csv(const std::string& path, const TimeSeries& ts);
TimeSeries read_time_series_csv(const std::string& path);

// Occupancy counts, same orientation as the time series (node rows).
void write_occupancy_csv(const std::string& path, const OccupancyTrace& trace);

// Event log: header "node,time,message_id,hop_index".
void write_events_csv(const std::string& path, std::span<const TransmissionEvent> events);
std::vector<TransmissionEvent> read_events_csv(const std::string& path);

// Power matrix (sensors x kept intervals, dBm) and burst assignment
// ("interval,cluster,label", rows aligned with the power matrix columns).
void write_power_csv(const std::string& path, const PowerMatrix& pd);
void write_assignment_csv(const std::string& path, std::span<const long> interval_index,
                          std::span<const int> assignment, std::span<const int> labels);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace netinfer
