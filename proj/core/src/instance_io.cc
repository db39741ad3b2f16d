// Copyright 2026 The Externet Authors
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

#include "externet/instance_io.h"

#include <fstream>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "externet/error.h"
#include "json.hpp"

namespace externet {
namespace {

using nlohmann::json;

json ExternalityToJson(const ExternalitySpec& spec) {
  json params = json::object();
  if (spec.family == Family::kPolynomial) {
    params["coefficients"] = spec.coefficients;
  } else if (spec.family == Family::kPowerConcave) {
    params["exponent"] = spec.exponent;
  }
  return {{"family", FamilyName(spec.family)}, {"params", params}};
}

ExternalitySpec ExternalityFromJson(const json& j) {
  const Family family = ParseFamily(j.at("family").get<std::string>());
  const json params = j.contains("params") ? j.at("params") : json::object();
  ExternalitySpec spec;
  switch (family) {
    case Family::kLinear:
      spec = ExternalitySpec::Linear();
      break;
    case Family::kPolynomial:
      spec = ExternalitySpec::Polynomial(
          params.at("coefficients").get<std::vector<double>>());
      break;
    case Family::kPowerConcave:
      spec = ExternalitySpec::PowerConcave(params.at("exponent").get<double>());
      break;
    case Family::kLogConcave:
      spec = ExternalitySpec::LogConcave();
      break;
  }
  return spec;
}

std::string PairKey(int item, int agent) {
  return "(" + std::to_string(item) + "," + std::to_string(agent) + ")";
}

template <typename T>
json OrNull(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string InstanceToJson(const Instance& inst) {
  json weights = json::array();
  for (int i = 0; i < inst.m(); ++i) {
    json rows = json::array();
    for (int j = 0; j < inst.n(); ++j) {
      const auto row = inst.weights(i).Row(j);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    weights.push_back(std::move(rows));
  }
  json ext = json::object();
  if (inst.uniform_externality()) {
    ext["all"] = ExternalityToJson(inst.externality(0, 0));
  } else {
    for (int i = 0; i < inst.m(); ++i) {
      for (int j = 0; j < inst.n(); ++j) {
        ext[PairKey(i, j)] = ExternalityToJson(inst.externality(i, j));
      }
    }
  }
  json doc = {{"n", inst.n()},
              {"m", inst.m()},
              {"regime", RegimeName(inst.regime())},
              {"diagonally_dominant", inst.diagonally_dominant()},
              {"weights", std::move(weights)},
              {"externality", std::move(ext)}};
  return doc.dump(2) + "\n";
}

Instance InstanceFromJson(std::string_view text) {
  try {
    const json doc = json::parse(text);
    const int n = doc.at("n").get<int>();
    const int m = doc.at("m").get<int>();
    if (n < 1 || m < 1) {
      throw Error(ErrorCode::kInvalidInput, "n and m must be >= 1");
    }
    const Regime regime = ParseRegime(doc.at("regime").get<std::string>());
    const bool dominant = doc.value("diagonally_dominant", false);
    const json& w = doc.at("weights");
    if (!w.is_array() || static_cast<int>(w.size()) != m) {
      throw Error(ErrorCode::kInvalidInput, "weights must hold m matrices");
    }
    std::vector<Matrix> weights;
    for (const json& item : w) {
      if (!item.is_array() || static_cast<int>(item.size()) != n) {
        throw Error(ErrorCode::kInvalidInput,
                    "each weight matrix must be n x n");
      }
      Matrix a(n, n);
      for (int j = 0; j < n; ++j) {
        const std::vector<double> row = item[j].get<std::vector<double>>();
        if (static_cast<int>(row.size()) != n) {
          throw Error(ErrorCode::kInvalidInput,
                      "each weight matrix must be n x n");
        }
        for (int k = 0; k < n; ++k) a(j, k) = row[k];
      }
      weights.push_back(std::move(a));
    }
    std::vector<ExternalitySpec> ext;
    const json& e = doc.at("externality");
    if (e.contains("all")) {
      if (e.size() != 1) {
        throw Error(ErrorCode::kInvalidInput,
                    "\"all\" externality cannot be combined with pair keys");
      }
      ext.push_back(ExternalityFromJson(e.at("all")));
    } else {
      if (static_cast<int>(e.size()) != n * m) {
        throw Error(ErrorCode::kInvalidInput,
                    "externality must list every (i,j) pair or use \"all\"");
      }
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
          const std::string key = PairKey(i, j);
          if (!e.contains(key)) {
            throw Error(ErrorCode::kInvalidInput,
                        "missing externality for " + key);
          }
          ext.push_back(ExternalityFromJson(e.at(key)));
        }
      }
    }
    return Instance(regime, std::move(weights), std::move(ext), dominant);
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kInvalidInput,
                std::string("malformed instance JSON: ") + ex.what());
  }
}

void WriteTextFile(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

void WriteInstanceFile(const std::string& path, const Instance& inst) {
  WriteTextFile(path, InstanceToJson(inst));
}

Instance ReadInstanceFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return InstanceFromJson(buf.str());
}

std::string ReportToJson(const SolveReport& r, bool with_timing) {
  json doc = {
      {"instance_id", r.instance_id},
      {"algorithm", r.algorithm},
      {"regime", r.regime},
      {"n", r.n},
      {"m", r.m},
      {"relaxation_value", OrNull(r.relaxation_value)},
      {"relaxation_is_upper_bound", r.relaxation_is_upper_bound},
      {"fractional_value", OrNull(r.fractional_value)},
      {"trials", r.trials},
      {"rounded_welfare_mean", r.rounded_welfare_mean},
      {"rounded_welfare_stderr", r.rounded_welfare_stderr},
      {"rounded_welfare_best", r.rounded_welfare_best},
      {"best_allocation", r.best_allocation.assign},
      {"oracle_opt", OrNull(r.oracle_opt)},
      {"empirical_ratio", OrNull(r.empirical_ratio)},
      {"guarantee_bound", OrNull(r.guarantee_bound)},
      {"guarantee_basis",
       r.guarantee_basis.empty() ? json(nullptr) : json(r.guarantee_basis)},
      {"guarantee_value", OrNull(r.guarantee_value)},
      {"guarantee_reference", OrNull(r.guarantee_reference)},
      {"guarantee_satisfied", OrNull(r.guarantee_satisfied)},
      {"diagnostics",
       {{"eta", OrNull(r.eta)},
        {"beta", OrNull(r.beta)},
        {"beta_unbounded", r.beta_unbounded},
        {"gamma_quarter", OrNull(r.gamma_quarter)},
        {"rounding_factor", OrNull(r.rounding_factor)},
        {"duality_gap", OrNull(r.duality_gap)},
        {"infeasibility", OrNull(r.infeasibility)},
        {"theta_rounded_mean", OrNull(r.theta_rounded_mean)},
        {"dual_is_estimate", r.dual_is_estimate},
        {"not_converged", r.not_converged},
        {"fallback_count", r.fallback_count},
        {"forced_assignments", r.forced_assignments},
        {"iterations", r.iterations}}}};
  if (with_timing) doc["wall_time_ms"] = r.wall_time_ms;
  return doc.dump(2) + "\n";
}

}  // namespace externet
