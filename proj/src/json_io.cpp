// SPDX-License-Identifier: Apache-2.0
#include "metriclab/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace metriclab::io {

namespace {

template <class S>
json matrix_json(const Space<S>& s) {
  json rows = json::array();
  for (int i = 0; i < s.n; ++i) {
    json row = json::array();
    for (int j = 0; j < s.n; ++j) {
      if constexpr (ScalarOps<S>::exact)
        row.push_back(s.at(i, j).toString());
      else
        row.push_back(s.at(i, j));
    }
    rows.push_back(row);
  }
  return rows;
}

template <class S>
json space_json(const Space<S>& s) {
  json doc;
  doc["kind"] = "metric";
  doc["n"] = s.n;
  if (!s.labels.empty()) doc["labels"] = s.labels;
  doc["d"] = matrix_json(s);
  return doc;
}

double numberFrom(const json& v) {
  if (v.is_string()) return Rat::parse(v.get<std::string>()).toDouble();
  return v.get<double>();
}

Rat ratFrom(const json& v) {
  if (v.is_string()) return Rat::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rat(v.get<long long>());
  throw Error("MalformedDocument", "rational mode needs integer or string entries");
}

template <class S, class FromJson>
Space<S> parseSpace(const json& doc, FromJson fromJson) {
  if (!doc.is_object() || doc.value("kind", "") != "metric" || !doc.contains("d"))
    throw Error("MalformedDocument", "expected a metric-space document");
  const json& d = doc["d"];
  if (!d.is_array()) throw Error("MalformedDocument", "\"d\" must be a matrix");
  std::vector<std::vector<S>> m;
  for (const auto& row : d) {
    if (!row.is_array()) throw Error("MalformedDocument", "\"d\" must be a matrix");
    std::vector<S> r;
    for (const auto& v : row) r.push_back(fromJson(v));
    m.push_back(std::move(r));
  }
  if (doc.contains("n") && doc["n"].get<int>() != (int)m.size())
    throw Error("MalformedDocument", "\"n\" does not match the matrix size");
  std::vector<std::string> labels;
  if (doc.contains("labels")) labels = doc["labels"].get<std::vector<std::string>>();
  return validate_metric<S>(m, std::move(labels));
}

} // namespace

json space_to_json(const MetricSpace& s) { return space_json(s); }
json space_to_json(const RationalSpace& s) { return space_json(s); }

MetricSpace space_from_json(const json& doc) {
  return parseSpace<double>(doc, [](const json& v) { return numberFrom(v); });
}

RationalSpace rational_space_from_json(const json& doc) {
  return parseSpace<Rat>(doc, [](const json& v) { return ratFrom(v); });
}

json witness_to_json(const Witness& w) {
  json doc;
  if (std::holds_alternative<Correspondence>(w)) {
    const auto& c = std::get<Correspondence>(w);
    doc["kind"] = "correspondence";
    doc["nA"] = c.nA;
    doc["nB"] = c.nB;
    json pairs = json::array();
    for (auto& [a, b] : c.pairs()) pairs.push_back(json::array({a, b}));
    doc["pairs"] = pairs;
  } else if (std::holds_alternative<Bijection>(w)) {
    doc["kind"] = "bijection";
    doc["map"] = std::get<Bijection>(w);
  } else {
    doc["kind"] = "pair_map";
    json pairs = json::array();
    for (auto& [a, b] : std::get<PairMap>(w)) pairs.push_back(json::array({a, b}));
    doc["pairs"] = pairs;
  }
  return doc;
}

Witness witness_from_json(const json& doc) {
  std::string kind = doc.value("kind", "");
  if (kind == "correspondence") {
    Correspondence c = Correspondence::empty(doc["nA"].get<int>(), doc["nB"].get<int>());
    for (const auto& p : doc["pairs"]) c.set(p[0].get<int>(), p[1].get<int>());
    return c;
  }
  if (kind == "bijection") return doc["map"].get<Bijection>();
  if (kind == "pair_map") {
    PairMap m;
    for (const auto& p : doc["pairs"]) m.push_back({p[0].get<int>(), p[1].get<int>()});
    return m;
  }
  throw Error("MalformedDocument", "unknown witness kind: " + kind);
}

json certificate_to_json(const Certificate<double>& c) {
  json doc;
  if (std::isinf(c.value))
    doc["value"] = "inf";
  else
    doc["value"] = c.value;
  doc["exact"] = c.exact;
  doc["witness"] = witness_to_json(c.witness);
  doc["nodes"] = c.nodes;
  return doc;
}

json certificate_to_json(const Certificate<Rat>& c) {
  json doc;
  doc["value"] = c.value.toString();
  doc["exact"] = c.exact;
  doc["witness"] = witness_to_json(c.witness);
  doc["nodes"] = c.nodes;
  return doc;
}

json coeff_norm_to_json(const norms::CoefficientNorm& n) {
  json doc;
  doc["kind"] = "coeff_norm";
  doc["dim"] = n.dim();
  doc["alpha"] = n.alpha();
  doc["delta"] = n.delta();
  json f = json::array();
  for (int i = 0; i < n.dim(); ++i)
    for (int j = i + 1; j < n.dim(); ++j) f.push_back(json::array({i, j, n.f(i, j)}));
  doc["f"] = f;
  return doc;
}

norms::CoefficientNorm coeff_norm_from_json(const json& doc) {
  int dim = doc["dim"].get<int>();
  double alpha = doc.value("alpha", norms::kDefaultAlpha);
  double delta = doc.value("delta", norms::kAlphaDeltaCap - norms::kDefaultAlpha);
  std::vector<double> vals((size_t)dim * (dim - 1) / 2, 0.0);
  auto slot = [dim](int i, int j) {
    return (size_t)i * dim - (size_t)i * (i + 1) / 2 + (j - i - 1);
  };
  for (const auto& e : doc["f"]) {
    int i = e[0].get<int>(), j = e[1].get<int>();
    if (i > j) std::swap(i, j);
    if (i == j || i < 0 || j >= dim) throw Error("MalformedDocument", "bad pair in \"f\"");
    vals[slot(i, j)] = e[2].get<double>();
  }
  return norms::CoefficientNorm(dim, alpha, delta, std::move(vals));
}

norms::NormOracle norm_from_json(const json& doc) {
  std::string kind = doc.value("kind", "");
  if (kind == "euclidean") return norms::NormOracle::euclidean(doc["dim"].get<int>());
  if (kind == "coeff_norm") return norms::NormOracle::coefficient(coeff_norm_from_json(doc));
  if (kind == "max_functionals")
    return norms::NormOracle::maxOfFunctionals(
        doc["dim"].get<int>(), doc["functionals"].get<std::vector<std::vector<double>>>(),
        doc.value("include_euclidean", true));
  throw Error("MalformedDocument", "unknown norm kind: " + kind);
}

json norm_to_json(const norms::NormOracle& o) {
  json doc;
  if (o.kind() == norms::NormOracle::Kind::Euclidean) {
    doc["kind"] = "euclidean";
    doc["dim"] = o.dim();
    return doc;
  }
  throw Error("Unsupported", "only euclidean oracles serialize standalone");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("FileNotFound", "cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw Error("MalformedDocument", std::string("JSON parse failure: ") + e.what());
  }
  return doc;
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error("FileWriteFailure", "cannot write " + path);
  out << doc.dump(2) << "\n";
}

} // namespace metriclab::io
