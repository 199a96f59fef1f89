#pragma once

// JSON surface shared by the CLI: loop files and report serialization.
// Chart and axis indices are 1-based in JSON, 0-based in the C++ API.

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "quantizer/bergman.hpp"
#include "quantizer/fubini_study.hpp"
#include "quantizer/qh_bundle.hpp"

namespace quantizer::io {

using nlohmann::json;

inline json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline json to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

/// Row-major nested arrays of [re, im] pairs.
inline json to_json(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [re, im] pair");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

/// A point is either [re, im] (first coordinate, others zero) or a list of
/// n [re, im] pairs.
inline CVector point_from_json(const json& j, int n) {
  CVector z = CVector::Zero(n);
  if (j.is_array() && j.size() == 2 && j.at(0).is_number()) {
    z(0) = complex_from_json(j);
    return z;
  }
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw std::invalid_argument("polyline point must be [re, im] or a list of " + std::to_string(n) + " pairs");
  }
  for (int i = 0; i < n; ++i) z(i) = complex_from_json(j.at(static_cast<std::size_t>(i)));
  return z;
}

inline int chart_from_json(const json& seg, int n) {
  const int k = seg.at("chart").get<int>();
  if (k < 1 || k > n + 1) throw std::invalid_argument("chart must be in 1.." + std::to_string(n + 1));
  return k - 1;
}

/// Parse a loop: either {"n": N, "segments": [...]} or a bare segment list,
/// where each segment is {"type": "latitude", "chart": k, "radius": r,
/// ["axis": a], ["orientation": +-1]} or {"type": "polyline", "chart": k,
/// "points": [...]}.
inline Loop loop_from_json(const json& j, int default_n) {
  Loop loop;
  const json* segments = &j;
  loop.n = default_n;
  if (j.is_object()) {
    loop.n = j.value("n", default_n);
    segments = &j.at("segments");
  }
  if (loop.n < 1) throw std::invalid_argument("loop dimension n must be >= 1");
  if (!segments->is_array() || segments->empty()) throw std::invalid_argument("loop needs a non-empty segment list");
  for (const auto& seg : *segments) {
    const auto type = seg.at("type").get<std::string>();
    if (type == "latitude") {
      LatitudeSegment s;
      s.chart = chart_from_json(seg, loop.n);
      s.radius = seg.at("radius").get<double>();
      s.axis = seg.value("axis", 1) - 1;
      s.orientation = seg.value("orientation", 1) < 0 ? -1 : 1;
      if (s.axis < 0 || s.axis >= loop.n) throw std::invalid_argument("latitude axis must be in 1..n");
      loop.segments.emplace_back(s);
    } else if (type == "polyline") {
      PolylineSegment s;
      s.chart = chart_from_json(seg, loop.n);
      for (const auto& p : seg.at("points")) s.points.push_back(point_from_json(p, loop.n));
      if (s.points.size() < 2) throw std::invalid_argument("polyline needs at least 2 points");
      loop.segments.emplace_back(std::move(s));
    } else {
      throw std::invalid_argument("unknown segment type '" + type + "'");
    }
  }
  return loop;
}

inline Loop load_loop(const std::string& path, int default_n) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open loop file " + path);
  return loop_from_json(json::parse(in), default_n);
}

inline json to_json(const HolonomyResult& h) {
  return {{"matrix", to_json(h.matrix)},
          {"base_chart", h.base_chart + 1},
          {"loop", h.loop},
          {"deviation_from_identity", h.deviation_from_identity},
          {"vacuum_phase", to_json(h.vacuum_phase)},
          {"vacuum_phase_modulus", std::abs(h.vacuum_phase)},
          {"cross_block_leakage", h.cross_block_leakage()},
          {"steps", h.steps},
          {"chart_switches", h.chart_switches}};
}

inline json to_json(const VolumeEstimate& v) {
  return {{"value", v.value}, {"std_error", v.std_error}, {"samples", v.samples}, {"scale", v.scale}};
}

/// {point, lhs, rhs, deviation, truncation}
inline json to_json(const PullbackReport& r) {
  return {{"point", to_json(r.point)},
          {"lhs", to_json(r.lhs)},
          {"rhs", to_json(r.rhs)},
          {"deviation", r.deviation},
          {"deviation_same_truncation", r.deviation_truncated},
          {"truncation", r.truncation}};
}

inline json to_json(const NonflatnessReport& r) {
  return {{"n", r.n},
          {"l", r.l},
          {"radius", r.radius},
          {"loop", r.loop},
          {"deviation", r.deviation},
          {"vacuum_phase", to_json(r.vacuum_phase)},
          {"predicted_diagonal", to_json(r.predicted_diagonal)},
          {"oracle_deviation", r.oracle_deviation},
          {"nonflat", r.nonflat}};
}

}  // namespace quantizer::io
