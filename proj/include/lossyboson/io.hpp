// Copyright 2026 The lossyboson Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// File formats: canonical JSON (sorted keys, doubles printed with %.17g) for
// networks, unitaries, occupation vectors, distributions, extraction results
// and certificates; CSV for sample batches.
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "lossyboson/complexmat.hpp"
#include "lossyboson/errors.hpp"
#include "lossyboson/fock.hpp"
#include "lossyboson/lossy.hpp"
#include "lossyboson/network.hpp"
#include "lossyboson/oracle.hpp"
#include "lossyboson/sampler.hpp"

namespace lossyboson::io {

using json = nlohmann::json;

inline std::string format_double(double v) {
  if (!std::isfinite(v)) throw ParseError("cannot serialize a non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep floats recognizable as floats when read back.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline void dump_canonical(const json& j, std::string& out, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string pad_close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // nlohmann::json keeps keys sorted
        if (!first) {
          out += ',';
          out += nl;
        }
        first = false;
        out += pad;
        out += json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        dump_canonical(it.value(), out, indent, depth + 1);
      }
      out += nl;
      out += pad_close;
      out += '}';
      return;
    }
    case json::value_t::array: {
      bool nested = false;
      for (const auto& v : j) nested = nested || v.is_object();
      if (nested && indent > 0 && !j.empty()) {
        out += "[\n";
        bool first = true;
        for (const auto& v : j) {
          if (!first) out += ",\n";
          first = false;
          out += pad;
          dump_canonical(v, out, indent, depth + 1);
        }
        out += '\n';
        out += pad_close;
        out += ']';
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += indent > 0 ? ", " : ",";
        first = false;
        dump_canonical(v, out, indent, depth + 1);
      }
      out += ']';
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

// Objects, and arrays holding objects, are broken over lines when indent > 0.
inline std::string dump(const json& j, int indent = 2) {
  std::string out;
  detail::dump_canonical(j, out, indent, 0);
  return out;
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

template <class T>
T get_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad field '") + key + "': " + e.what());
  }
}

// --- occupation vectors and assignments -------------------------------------

inline json to_json(const OccupationVector& s) { return json(s.vector()); }

inline OccupationVector occupation_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("occupation vector must be a JSON array");
  std::vector<int> v;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw ParseError("occupation entries must be integers");
    v.push_back(e.get<int>());
  }
  try {
    return OccupationVector(std::move(v));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

inline json to_json(const ModeAssignment& r) { return json(std::vector<int>(r.entries().begin(), r.entries().end())); }

// Accepts "[1,0,2]" or "1,0,2".
inline OccupationVector parse_occupation(const std::string& text) {
  std::string t = text;
  if (t.empty() || t.front() != '[') t = "[" + t + "]";
  return occupation_from_json(parse(t));
}

// --- unitaries ----------------------------------------------------------------

inline json to_json(const CMatrix& u) {
  json re = json::array(), im = json::array();
  for (int r = 0; r < u.rows(); ++r) {
    json rr = json::array(), ii = json::array();
    for (int c = 0; c < u.cols(); ++c) {
      rr.push_back(u(r, c).real());
      ii.push_back(u(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return json{{"modes", u.rows()}, {"real", re}, {"imag", im}};
}

inline json to_json(const UnitaryMatrix& u) { return to_json(u.matrix()); }

inline UnitaryMatrix unitary_from_json(const json& j) {
  const int m = get_field<int>(j, "modes");
  const auto re = get_field<std::vector<std::vector<double>>>(j, "real");
  const auto im = get_field<std::vector<std::vector<double>>>(j, "imag");
  if (m < 1 || static_cast<int>(re.size()) != m || static_cast<int>(im.size()) != m)
    throw ParseError("unitary must have 'modes' rows in 'real' and 'imag'");
  CMatrix u(m, m);
  for (int r = 0; r < m; ++r) {
    if (static_cast<int>(re[static_cast<std::size_t>(r)].size()) != m || static_cast<int>(im[static_cast<std::size_t>(r)].size()) != m)
      throw ParseError("unitary rows must have 'modes' entries");
    for (int c = 0; c < m; ++c) u(r, c) = cplx(re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], im[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  }
  try {
    return UnitaryMatrix(std::move(u));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

// --- networks -----------------------------------------------------------------

inline json to_json(const LossyNetwork& net) {
  json elements = json::array();
  for (const auto& e : net.elements())
    elements.push_back(json{{"layer", e.layer},
                            {"modes", {e.modes[0], e.modes[1]}},
                            {"theta", e.theta},
                            {"phi", e.phi},
                            {"eta", {e.eta[0], e.eta[1]}}});
  json losses = json::array();
  for (const auto& l : net.standalone_losses())
    losses.push_back(json{{"after_layer", l.after_layer}, {"mode", l.mode}, {"eta", l.eta}});
  return json{{"modes", net.modes()}, {"elements", elements}, {"standalone_losses", losses}};
}

inline LossyNetwork network_from_json(const json& j) {
  const int m = get_field<int>(j, "modes");
  std::vector<BeamSplitterElement> elements;
  for (const auto& e : get_field<json>(j, "elements")) {
    BeamSplitterElement el;
    el.layer = get_field<int>(e, "layer");
    const auto modes = get_field<std::vector<int>>(e, "modes");
    if (modes.size() != 2) throw ParseError("element 'modes' must hold two entries");
    el.modes = {modes[0], modes[1]};
    el.theta = get_field<double>(e, "theta");
    el.phi = get_field<double>(e, "phi");
    const auto eta = e.contains("eta") ? get_field<std::vector<double>>(e, "eta") : std::vector<double>{1.0, 1.0};
    if (eta.size() != 2) throw ParseError("element 'eta' must hold two entries");
    el.eta = {eta[0], eta[1]};
    elements.push_back(el);
  }
  std::vector<StandaloneLoss> losses;
  if (j.contains("standalone_losses"))
    for (const auto& l : get_field<json>(j, "standalone_losses"))
      losses.push_back({get_field<int>(l, "after_layer"), get_field<int>(l, "mode"), get_field<double>(l, "eta")});
  try {
    return LossyNetwork(m, std::move(elements), std::move(losses));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

inline json to_json(const ExtractionResult& r) {
  return json{{"front", r.front.values()}, {"exponents", r.exponents}, {"residual", to_json(r.residual)}};
}

// --- distributions, certificates, batches ------------------------------------

inline json to_json(const Distribution& d) {
  json j = json::object();
  for (const auto& [k, p] : d) j[k.to_string()] = p;
  return j;
}

inline Distribution distribution_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("distribution must be a JSON object");
  Distribution d;
  for (auto it = j.begin(); it != j.end(); ++it) d[occupation_from_json(parse(it.key()))] = it.value().get<double>();
  return d;
}

inline json to_json(const Certificate& c) {
  return json{{"n", c.n},
              {"k", c.k},
              {"eta", c.eta},
              {"eta_eff", c.eta_eff},
              {"c", c.c},
              {"c_threshold", c.c_threshold ? json(*c.c_threshold) : json(nullptr)},
              {"delta", c.delta},
              {"strategy", c.strategy}};
}

inline json to_json(const BatchReport& r) {
  return json{{"shots", r.shots},
              {"permanent_evaluations", r.permanent_evaluations},
              {"max_permanents_per_sample", r.max_permanents_per_sample},
              {"permanent_bound_per_sample", r.permanent_bound_per_sample},
              {"runtime_bound", r.runtime_bound},
              {"terms", r.terms},
              {"complex_ops", r.complex_ops}};
}

inline std::string occupation_field(const OccupationVector& t) {
  std::string s;
  for (int i = 0; i < t.modes(); ++i) {
    if (i) s += ';';
    s += std::to_string(t[static_cast<std::size_t>(i)]);
  }
  return s;
}

inline std::string csv_header() { return "shot_index,outcome,probability\n"; }

inline std::string csv_row(std::uint64_t shot, const OccupationVector& t, double probability) {
  return std::to_string(shot) + "," + occupation_field(t) + "," + format_double(probability) + "\n";
}

}  // namespace lossyboson::io
