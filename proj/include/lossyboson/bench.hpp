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

// Benchmark sweeps: measured sampler work per input class against the cost
// formulas.
#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "lossyboson/complexmat.hpp"
#include "lossyboson/errors.hpp"
#include "lossyboson/fock.hpp"
#include "lossyboson/random.hpp"
#include "lossyboson/sampler.hpp"

namespace lossyboson {

inline InputClass parse_input_class(const std::string& name) {
  if (name == "A") return InputClass::A;
  if (name == "B") return InputClass::B;
  if (name == "C") return InputClass::C;
  if (name == "general") return InputClass::General;
  throw ParseError("unknown input class '" + name + "' (expected A, B, C or general)");
}

// Representative n-photon input of a class on m modes.
//   A: two bins of sizes ceil(n/2), floor(n/2).
//   B: one bin plus floor(c ln n) single photons.
//   C: two bins plus floor(c ln n) single photons.
//   general: n single photons.
inline OccupationVector bench_input(InputClass cls, int n, int m, double c = 1.0) {
  if (n < 1) throw RangeError("bench needs n >= 1");
  std::vector<int> s(static_cast<std::size_t>(m), 0);
  const int singles = static_cast<int>(std::floor(c * std::log(static_cast<double>(n))));
  auto need = [&](int modes) {
    if (modes > m) throw LimitError("class input needs " + std::to_string(modes) + " modes, have " + std::to_string(m));
  };
  switch (cls) {
    case InputClass::A:
      need(n > 1 ? 2 : 1);
      s[0] = (n + 1) / 2;
      if (n > 1) s[1] = n / 2;
      break;
    case InputClass::B:
      need(1 + singles);
      s[0] = n - singles;
      for (int i = 1; i <= singles; ++i) s[static_cast<std::size_t>(i)] = 1;
      break;
    case InputClass::C: {
      need(2 + singles);
      const int rest = n - singles;
      if (rest < 2) throw RangeError("class C input needs n - floor(c ln n) >= 2");
      s[0] = (rest + 1) / 2;
      s[1] = rest / 2;
      for (int i = 2; i < 2 + singles; ++i) s[static_cast<std::size_t>(i)] = 1;
      break;
    }
    case InputClass::General:
      need(n);
      for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = 1;
      break;
  }
  return OccupationVector(std::move(s));
}

// Predicted cost of a class: T_A = k m n (n+1)^(2k), T_B = c m n^(2c+3) ln n,
// otherwise the generic sampler bound.
inline double class_prediction(InputClass cls, const OccupationVector& s, double c) {
  const double n = s.photons();
  const double m = s.modes();
  if (cls == InputClass::A) {
    const double k = s.alpha();
    return k * m * n * std::pow(n + 1.0, 2.0 * k);
  }
  if (cls == InputClass::B) return c * m * std::pow(n, 2.0 * c + 3.0) * std::log(n);
  return sampler_runtime_bound(s);
}

// Polynomial degree of the prediction in n, when it has one.
inline double class_exponent(InputClass cls, double c) {
  if (cls == InputClass::A) return 2.0 * 2.0 + 1.0;
  if (cls == InputClass::B) return 2.0 * c + 3.0;
  return std::nan("");
}

struct BenchRow {
  int n = 0;
  int m = 0;
  OccupationVector input = OccupationVector::vacuum(1);
  double permanent_evaluations = 0.0;  // mean per sample
  std::uint64_t permanent_bound = 0;   // m (prod(s_i+1) - 1)
  double prediction = 0.0;
  double terms = 0.0;        // mean expansion terms per sample
  double complex_ops = 0.0;  // mean complex operations per sample
  double wall_seconds = 0.0; // mean per sample
};

inline BenchRow bench_point(InputClass cls, int n, int m, double c, std::uint64_t shots, std::uint64_t seed) {
  BenchRow row;
  row.n = n;
  row.m = m;
  row.input = bench_input(cls, n, m, c);
  row.prediction = class_prediction(cls, row.input, c);
  const UnitaryMatrix u = UnitaryMatrix::random(m, substream_seed(seed, static_cast<std::uint64_t>(n)));
  const auto start = std::chrono::steady_clock::now();
  const BatchResult batch = sample_batch(u, row.input, shots, seed);
  const auto stop = std::chrono::steady_clock::now();
  const double k = static_cast<double>(shots);
  row.permanent_evaluations = static_cast<double>(batch.report.permanent_evaluations) / k;
  row.permanent_bound = batch.report.permanent_bound_per_sample;
  row.terms = static_cast<double>(batch.report.terms) / k;
  row.complex_ops = static_cast<double>(batch.report.complex_ops) / k;
  row.wall_seconds = std::chrono::duration<double>(stop - start).count() / k;
  return row;
}

inline std::vector<BenchRow> run_bench(InputClass cls, const std::vector<int>& sizes, int m, double c,
                                       std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw RangeError("bench needs at least one shot per size");
  std::vector<BenchRow> rows;
  for (int n : sizes) rows.push_back(bench_point(cls, n, m, c, shots, seed));
  return rows;
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw RangeError("slope needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

inline std::string bench_csv_header() {
  return "n,m,input,permanent_evaluations,permanent_bound,prediction,terms,complex_ops,wall_seconds\n";
}

inline std::string bench_csv_row(const BenchRow& r) {
  std::string in;
  for (int i = 0; i < r.input.modes(); ++i) {
    if (i) in += ';';
    in += std::to_string(r.input[static_cast<std::size_t>(i)]);
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, ",%.17g,%llu,%.17g,%.17g,%.17g,%.6g\n", r.permanent_evaluations,
                static_cast<unsigned long long>(r.permanent_bound), r.prediction, r.terms, r.complex_ops,
                r.wall_seconds);
  return std::to_string(r.n) + "," + std::to_string(r.m) + "," + in + buf;
}

}  // namespace lossyboson
