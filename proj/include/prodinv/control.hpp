// Copyright 2026 The prodinv Authors
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

#ifndef PRODINV_CONTROL_HPP_
#define PRODINV_CONTROL_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prodinv/error.hpp"
#include "prodinv/model.hpp"

namespace prodinv {

struct ControlSegment {
  double start = 0;
  double end = 0;
  ControlValue value;
};

/// A piecewise-constant control on [0, T]. Segments partition the horizon
/// with strictly increasing breakpoints; adjacent equal values are merged so
/// that two policies with the same behaviour compare equal.
class PiecewiseControl {
 public:
  PiecewiseControl() = default;

  explicit PiecewiseControl(std::vector<ControlSegment> segments)
      : segments_(std::move(segments)) {
    if (segments_.empty()) {
      throw Error(ErrorCode::kDomain, "policy needs at least one segment");
    }
    if (segments_.front().start != 0) {
      throw Error(ErrorCode::kDomain, "policy must start at t = 0");
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (!(segments_[i].end > segments_[i].start)) {
        throw Error(ErrorCode::kDomain, "policy breakpoints must increase");
      }
      if (i > 0 && segments_[i].start != segments_[i - 1].end) {
        throw Error(ErrorCode::kDomain, "policy segments must be contiguous");
      }
    }
    merge_equal_neighbours();
  }

  static PiecewiseControl constant(double horizon, ControlValue value) {
    return PiecewiseControl({{0.0, horizon, value}});
  }

  /// `times` holds the interior switch instants (sorted, inside (0, T));
  /// `values` has one more entry than `times`.
  static PiecewiseControl from_switches(double horizon,
                                        const std::vector<double>& times,
                                        const std::vector<ControlValue>& values) {
    if (values.size() != times.size() + 1) {
      throw Error(ErrorCode::kDomain, "need one value per segment");
    }
    std::vector<ControlSegment> segments;
    double start = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      segments.push_back({start, times[i], values[i]});
      start = times[i];
    }
    segments.push_back({start, horizon, values.back()});
    return PiecewiseControl(std::move(segments));
  }

  const std::vector<ControlSegment>& segments() const { return segments_; }
  double horizon() const { return segments_.empty() ? 0 : segments_.back().end; }

  /// Right-continuous; the last segment is closed at T.
  const ControlValue& value_at(double t) const {
    auto it = std::upper_bound(
        segments_.begin(), segments_.end(), t,
        [](double x, const ControlSegment& s) { return x < s.end; });
    if (it == segments_.end()) return segments_.back().value;
    return it->value;
  }

  /// Interior breakpoints, sorted.
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < segments_.size(); ++i) {
      out.push_back(segments_[i].start);
    }
    return out;
  }

  /// Shifts every breakpoint by `offset` (used to place a local policy on an
  /// absolute time axis).
  std::vector<ControlSegment> shifted(double offset) const {
    std::vector<ControlSegment> out = segments_;
    for (auto& s : out) {
      s.start += offset;
      s.end += offset;
    }
    return out;
  }

  /// First segment whose value leaves the admissible box, if any.
  std::optional<ControlSegment> first_out_of_bounds(const ModelParams& m) const {
    for (const auto& s : segments_) {
      const auto& c = s.value;
      if (!(c.production >= 0 && c.production <= m.max_production &&
            c.repayment >= 0 && c.repayment <= m.max_repayment &&
            c.sales >= 0 && c.sales <= m.max_sales)) {
        return s;
      }
    }
    return std::nullopt;
  }

  friend bool operator==(const PiecewiseControl& a, const PiecewiseControl& b) {
    if (a.segments_.size() != b.segments_.size()) return false;
    for (std::size_t i = 0; i < a.segments_.size(); ++i) {
      const auto& x = a.segments_[i];
      const auto& y = b.segments_[i];
      if (x.start != y.start || x.end != y.end || !(x.value == y.value)) {
        return false;
      }
    }
    return true;
  }

 private:
  void merge_equal_neighbours() {
    std::vector<ControlSegment> merged;
    for (const auto& s : segments_) {
      if (!merged.empty() && merged.back().value == s.value) {
        merged.back().end = s.end;
      } else {
        merged.push_back(s);
      }
    }
    segments_ = std::move(merged);
  }

  std::vector<ControlSegment> segments_;
};

}  // namespace prodinv

#endif  // PRODINV_CONTROL_HPP_
