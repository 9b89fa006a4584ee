// Copyright 2026 The mecafuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mecafuse/harness/trajectory_log.h"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>

#include <fmt/format.h>

#include "mecafuse/errors.h"

namespace mecafuse::harness {
namespace {

enum Column {
  kT,
  kEvent,
  kGtX,
  kGtY,
  kGtTheta,
  kOdomVx,
  kOdomVy,
  kOdomOmega,
  kOdomX,
  kOdomY,
  kOdomTheta,
  kIpsX,
  kIpsY,
  kEkfX,
  kEkfY,
  kEkfTheta,
  kP11,
  kP22,
  kP33,
  kNis,
  kUpdate,
  kNumColumns,
};

constexpr std::array<std::string_view, kNumColumns> kColumnNames = {
    "t",          "event",  "gt_x",   "gt_y",   "gt_theta", "odom_vx",
    "odom_vy",    "odom_omega", "odom_x", "odom_y", "odom_theta", "ips_x",
    "ips_y",      "ekf_x",  "ekf_y",  "ekf_theta", "P11",   "P22",
    "P33",        "nis",    "update",
};

std::string_view OutcomeName(FixOutcome outcome) {
  switch (outcome) {
    case FixOutcome::kApplied:
      return "applied";
    case FixOutcome::kGated:
      return "gated";
    case FixOutcome::kRejected:
      return "rejected";
    case FixOutcome::kNone:
      break;
  }
  return "";
}

std::vector<std::string_view> SplitRow(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    fields.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

class RowParser {
 public:
  RowParser(std::size_t line, const std::vector<std::string_view>& fields,
            const std::array<int, kNumColumns>& index)
      : line_(line), fields_(fields), index_(index) {}

  bool Has(Column c) const {
    return index_[c] >= 0 && !fields_[index_[c]].empty();
  }

  std::string_view Raw(Column c) const {
    return index_[c] >= 0 ? fields_[index_[c]] : std::string_view{};
  }

  double Number(Column c) const {
    const std::string_view text = Raw(c);
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
        !std::isfinite(value)) {
      throw ParseError(line_, fmt::format("column {}: invalid number '{}'",
                                          kColumnNames[c], text));
    }
    return value;
  }

  // True when every column of the group is filled, false when all are
  // empty; a partially filled group is an error.
  bool Group(std::initializer_list<Column> columns) const {
    std::size_t filled = 0;
    for (Column c : columns) filled += Has(c) ? 1 : 0;
    if (filled != 0 && filled != columns.size()) {
      throw ParseError(line_, fmt::format("column group starting at {} is "
                                          "partially filled",
                                          kColumnNames[*columns.begin()]));
    }
    return filled != 0;
  }

 private:
  std::size_t line_;
  const std::vector<std::string_view>& fields_;
  const std::array<int, kNumColumns>& index_;
};

}  // namespace

void WriteTrajectoryLog(std::ostream& out,
                        std::span<const TrajectoryRecord> records) {
  for (int c = 0; c < kNumColumns; ++c) {
    if (c > 0) out << ',';
    out << kColumnNames[c];
  }
  out << '\n';
  std::string row;
  for (const TrajectoryRecord& r : records) {
    row.clear();
    auto inserter = std::back_inserter(row);
    fmt::format_to(inserter, "{},{},{},{},{}", r.t,
                   r.event == EventKind::kTwist ? "twist" : "fix", r.truth.x,
                   r.truth.y, r.truth.theta);
    if (r.odom_twist) {
      fmt::format_to(inserter, ",{},{},{}", r.odom_twist->vx, r.odom_twist->vy,
                     r.odom_twist->omega);
    } else {
      row += ",,,";
    }
    if (r.odom) {
      fmt::format_to(inserter, ",{},{},{}", r.odom->x, r.odom->y,
                     r.odom->theta);
    } else {
      row += ",,,";
    }
    if (r.ips) {
      fmt::format_to(inserter, ",{},{}", r.ips->x, r.ips->y);
    } else {
      row += ",,";
    }
    if (r.ekf) {
      fmt::format_to(inserter, ",{},{},{}", r.ekf->x, r.ekf->y, r.ekf->theta);
    } else {
      row += ",,,";
    }
    if (r.ekf_variance) {
      fmt::format_to(inserter, ",{},{},{}", (*r.ekf_variance)(0),
                     (*r.ekf_variance)(1), (*r.ekf_variance)(2));
    } else {
      row += ",,,";
    }
    if (r.nis) {
      fmt::format_to(inserter, ",{}", *r.nis);
    } else {
      row += ",";
    }
    fmt::format_to(inserter, ",{}\n", OutcomeName(r.outcome));
    out << row;
  }
}

TrajectoryLog ReadTrajectoryLog(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header line");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::array<int, kNumColumns> index;
  index.fill(-1);
  const std::vector<std::string_view> header = SplitRow(line);
  std::unordered_map<std::string_view, int> by_name;
  for (int c = 0; c < kNumColumns; ++c) by_name.emplace(kColumnNames[c], c);
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto it = by_name.find(header[i]);
    if (it == by_name.end()) {
      throw ParseError(1, fmt::format("unknown column '{}'", header[i]));
    }
    if (index[it->second] >= 0) {
      throw ParseError(1, fmt::format("duplicate column '{}'", header[i]));
    }
    index[it->second] = static_cast<int>(i);
  }
  for (Column c : {kT, kGtX, kGtY, kGtTheta}) {
    if (index[c] < 0) {
      throw ParseError(
          1, fmt::format("missing required column '{}'", kColumnNames[c]));
    }
  }
  const auto declares = [&](std::initializer_list<Column> columns) {
    bool any = false;
    bool all = true;
    for (Column c : columns) {
      any = any || index[c] >= 0;
      all = all && index[c] >= 0;
    }
    if (any && !all) {
      throw ParseError(1, fmt::format("incomplete column group starting at {}",
                                      kColumnNames[*columns.begin()]));
    }
    return all;
  };

  TrajectoryLog log;
  log.has_twist = declares({kOdomVx, kOdomVy, kOdomOmega});
  log.has_odometry = declares({kOdomX, kOdomY, kOdomTheta});
  log.has_ips = declares({kIpsX, kIpsY});
  log.has_ekf = declares({kEkfX, kEkfY, kEkfTheta});
  declares({kP11, kP22, kP33});

  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string_view> fields = SplitRow(line);
    if (fields.size() != header.size()) {
      throw ParseError(line_number,
                       fmt::format("expected {} fields, found {}",
                                   header.size(), fields.size()));
    }
    const RowParser row(line_number, fields, index);

    TrajectoryRecord r;
    r.t = row.Number(kT);
    r.truth = {row.Number(kGtX), row.Number(kGtY), row.Number(kGtTheta)};
    if (row.Group({kOdomVx, kOdomVy, kOdomOmega})) {
      r.odom_twist = BodyTwist{row.Number(kOdomVx), row.Number(kOdomVy),
                               row.Number(kOdomOmega)};
    }
    if (row.Group({kOdomX, kOdomY, kOdomTheta})) {
      r.odom = Pose2D{row.Number(kOdomX), row.Number(kOdomY),
                      row.Number(kOdomTheta)};
    }
    if (row.Group({kIpsX, kIpsY})) {
      r.ips = TimedPosition{r.t, row.Number(kIpsX), row.Number(kIpsY)};
    }
    if (row.Group({kEkfX, kEkfY, kEkfTheta})) {
      r.ekf = Pose2D{row.Number(kEkfX), row.Number(kEkfY),
                     row.Number(kEkfTheta)};
    }
    if (row.Group({kP11, kP22, kP33})) {
      r.ekf_variance =
          Eigen::Vector3d(row.Number(kP11), row.Number(kP22), row.Number(kP33));
    }
    if (row.Has(kNis)) r.nis = row.Number(kNis);

    const std::string_view event = row.Raw(kEvent);
    if (event == "twist") {
      r.event = EventKind::kTwist;
    } else if (event == "fix") {
      r.event = EventKind::kFix;
    } else if (event.empty() && index[kEvent] < 0) {
      r.event = r.ips ? EventKind::kFix : EventKind::kTwist;
    } else {
      throw ParseError(line_number,
                       fmt::format("invalid event '{}'", event));
    }
    if (r.event == EventKind::kFix && !r.ips) {
      throw ParseError(line_number, "fix row without ips_x/ips_y");
    }
    if (r.event == EventKind::kTwist && log.has_twist && !r.odom_twist) {
      throw ParseError(line_number, "twist row without odometry twist");
    }

    const std::string_view update = row.Raw(kUpdate);
    if (update.empty()) {
      r.outcome = FixOutcome::kNone;
    } else if (update == "applied") {
      r.outcome = FixOutcome::kApplied;
    } else if (update == "gated") {
      r.outcome = FixOutcome::kGated;
    } else if (update == "rejected") {
      r.outcome = FixOutcome::kRejected;
    } else {
      throw ParseError(line_number,
                       fmt::format("invalid update outcome '{}'", update));
    }

    if (!log.records.empty() && r.t < log.records.back().t) {
      throw ParseError(line_number, "timestamps must be non-decreasing");
    }
    log.records.push_back(r);
  }
  return log;
}

void WriteErrorSeries(std::ostream& out, const ErrorSeries& series) {
  out << "t,distance_error_m\n";
  for (std::size_t i = 0; i < series.timestamps.size(); ++i) {
    out << fmt::format("{},{}\n", series.timestamps[i],
                       series.distance_error[i]);
  }
}

}  // namespace mecafuse::harness
