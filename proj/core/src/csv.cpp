#include "pulseforge/csv.hpp"

#include "pulseforge/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace pulseforge::csv {

std::string shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string sig12(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::IoError,
                "line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  }
  return v;
}

// Reads the next line that is neither blank nor a '#' comment.
bool next_line(std::istream& is, std::string& line, std::size_t& line_no) {
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (!line.empty()) return true;
  }
  return false;
}

void expect_header(std::istream& is, const std::string& header, std::size_t& line_no) {
  std::string line;
  if (!next_line(is, line, line_no)) throw Error(ErrorCode::IoError, "empty input");
  std::string compact;
  for (char c : line) {
    if (c != ' ' && c != '\t') compact += c;
  }
  if (compact != header) {
    throw Error(ErrorCode::IoError, "expected header '" + header + "', got '" + line + "'");
  }
}

}  // namespace

void write_trajectory(std::ostream& os, const Trajectory& traj) {
  os << "t_us,P0,P1,P2,h1,h2,h3,trace_dev,min_eig\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const DensityMatrix& m = traj.states[k];
    const Populations p = populations(m);
    const double h1 = m(row_of(1), row_of(2)).imag();
    const double h2 = m(row_of(2), row_of(0)).real();
    const double h3 = m(row_of(0), row_of(1)).imag();
    os << sig12(traj.times[k]) << ',' << sig12(p[0]) << ',' << sig12(p[1]) << ','
       << sig12(p[2]) << ',' << sig12(h1) << ',' << sig12(h2) << ',' << sig12(h3) << ','
       << sig12(traj.trace_dev[k]) << ',' << sig12(traj.min_eig[k]) << '\n';
  }
}

void write_pulses(std::ostream& os, const PulseSchedule& pulses) {
  os << "t_us,omega01_inv_us,omega12_inv_us\n";
  for (std::size_t k = 0; k < pulses.size(); ++k) {
    os << shortest(pulses.time(k)) << ',' << shortest(pulses.omega01()[k]) << ','
       << shortest(pulses.omega12()[k]) << '\n';
  }
}

PulseSchedule read_pulses(std::istream& is) {
  std::size_t line_no = 0;
  expect_header(is, "t_us,omega01_inv_us,omega12_inv_us", line_no);
  std::vector<double> t, w01, w12;
  std::string line;
  while (next_line(is, line, line_no)) {
    const auto fields = split(line, ',');
    if (fields.size() != 3) {
      throw Error(ErrorCode::IoError,
                  "line " + std::to_string(line_no) + ": expected 3 fields");
    }
    t.push_back(parse_double(fields[0], line_no));
    w01.push_back(parse_double(fields[1], line_no));
    w12.push_back(parse_double(fields[2], line_no));
  }
  try {
    return PulseSchedule::from_samples(t, std::move(w01), std::move(w12));
  } catch (const Error& e) {
    throw Error(ErrorCode::IoError, std::string("pulse file: ") + e.what());
  }
}

void write_design_aux(std::ostream& os, const PulseSchedule& grid,
                      std::span<const DensityParams> designed, ControlMode mode) {
  os << (mode == ControlMode::population ? "t_us,h1,h2,h3\n" : "t_us,f1,f2,h1\n");
  const std::size_t n = std::min(grid.size(), designed.size());
  for (std::size_t k = 0; k < n; ++k) {
    const DensityParams& p = designed[k];
    os << shortest(grid.time(k)) << ',';
    if (mode == ControlMode::population) {
      os << shortest(p.h1) << ',' << shortest(p.h2) << ',' << shortest(p.h3) << '\n';
    } else {
      os << shortest(p.f1) << ',' << shortest(p.f2) << ',' << shortest(p.h1) << '\n';
    }
  }
}

void write_feasibility(std::ostream& os, const FeasibilityMap& map) {
  os << (map.mode == ControlMode::population ? "p1,p2" : "h2,h3")
     << ",feasible,reason,closed_loop_error,max_omega\n";
  for (const auto& c : map.cells) {
    os << shortest(c.x) << ',' << shortest(c.y) << ',' << (c.feasible() ? 1 : 0) << ','
       << to_string(c.reason) << ',' << shortest(c.closed_loop_error) << ','
       << shortest(c.max_omega) << '\n';
  }
}

void write_energy(std::ostream& os, std::span<const EnergySample> energy) {
  os << "t_us,P1,epsilon_inv_us\n";
  for (const auto& e : energy) {
    os << shortest(e.t) << ',' << shortest(e.p1) << ',' << shortest(e.epsilon) << '\n';
  }
}

void write_calibration(std::ostream& os, const CalibrationMatrix& f) {
  os << "# row i = measured |i>, column i' = prepared |i'>\n";
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      os << (j ? " " : "") << shortest(f.matrix()(i, j));
    }
    os << '\n';
  }
}

CalibrationMatrix read_calibration(std::istream& is) {
  Eigen::Matrix3d m;
  std::size_t line_no = 0;
  std::string line;
  int row = 0;
  while (next_line(is, line, line_no)) {
    if (row == 3) throw Error(ErrorCode::IoError, "calibration: more than three rows");
    std::istringstream in(line);
    std::vector<std::string> fields;
    for (std::string tok; in >> tok;) fields.push_back(tok);
    if (fields.size() != 3) {
      throw Error(ErrorCode::IoError,
                  "calibration line " + std::to_string(line_no) + ": expected 3 values");
    }
    for (int j = 0; j < 3; ++j) m(row, j) = parse_double(fields[j], line_no);
    ++row;
  }
  if (row != 3) throw Error(ErrorCode::IoError, "calibration: expected three rows");
  return CalibrationMatrix(m);
}

void write_reads(std::ostream& os, const DiagonalReads& reads) {
  os << "setting,P0,P1,P2\n";
  for (int p = 1; p <= 4; ++p) {
    os << 'U' << p;
    for (int level = 0; level < 3; ++level) os << ',' << shortest(reads.read(p, level));
    os << '\n';
  }
}

DiagonalReads read_reads(std::istream& is) {
  std::size_t line_no = 0;
  expect_header(is, "setting,P0,P1,P2", line_no);
  DiagonalReads reads;
  std::array<bool, 4> seen{};
  std::string line;
  while (next_line(is, line, line_no)) {
    const auto fields = split(line, ',');
    if (fields.size() != 4 || fields[0].size() != 2 || fields[0][0] != 'U' ||
        fields[0][1] < '1' || fields[0][1] > '4') {
      throw Error(ErrorCode::IoError, "reads line " + std::to_string(line_no) +
                                          ": expected U1..U4 followed by three values");
    }
    const int p = fields[0][1] - '0';
    if (seen[p - 1]) throw Error(ErrorCode::IoError, "reads: duplicate setting " + fields[0]);
    seen[p - 1] = true;
    for (int level = 0; level < 3; ++level) {
      reads.setting[p - 1][level] = parse_double(fields[level + 1], line_no);
    }
  }
  for (int p = 0; p < 4; ++p) {
    if (!seen[p]) throw Error(ErrorCode::IoError, "reads: missing setting U" + std::to_string(p + 1));
  }
  return reads;
}

}  // namespace pulseforge::csv
