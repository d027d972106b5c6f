#pragma once

// JSON forms of generator catalogs, esperantist fits and congruence reports.

#include <string>
#include <vector>

#include <json.hpp>

#include "thinlab/error.hpp"
#include "thinlab/group.hpp"
#include "thinlab/monodromy.hpp"
#include "thinlab/spectra.hpp"

namespace thinlab {

using Json = nlohmann::ordered_json;

/// {"label", "kind", "modulus", "dimension"|"degree", "elements": [...]}
/// Matrices are written as lists of rows.
inline Json catalog_to_json(const std::vector<GroupElement>& elements, const std::string& label) {
  if (elements.empty()) throw InvalidArgument("catalog_to_json: empty catalog");
  const auto& shape = elements.front().shape();
  Json j;
  j["label"] = label;
  Json list = Json::array();
  if (shape.kind == ElementKind::matrix) {
    j["kind"] = "matrix";
    j["modulus"] = shape.modulus;
    j["dimension"] = shape.size;
    for (const auto& e : elements) {
      if (!e.composable_with(elements.front())) throw IncompatibleElements("catalog elements differ in shape");
      Json rows = Json::array();
      for (std::size_t r = 0; r < shape.size; ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < shape.size; ++c) row.push_back(e(r, c));
        rows.push_back(row);
      }
      list.push_back(rows);
    }
  } else {
    j["kind"] = "permutation";
    j["degree"] = shape.size;
    for (const auto& e : elements) {
      if (!e.composable_with(elements.front())) throw IncompatibleElements("catalog elements differ in shape");
      list.push_back(std::vector<std::int64_t>(e.entries().begin(), e.entries().end()));
    }
  }
  j["elements"] = list;
  return j;
}

inline std::vector<GroupElement> catalog_from_json(const Json& j) {
  std::vector<GroupElement> out;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "matrix") {
    const auto m = j.at("modulus").get<std::int64_t>();
    const auto n = j.at("dimension").get<std::size_t>();
    for (const auto& rows : j.at("elements")) {
      std::vector<std::int64_t> entries;
      if (rows.size() != n) throw InvalidArgument("catalog matrix has the wrong row count");
      for (const auto& row : rows) {
        if (row.size() != n) throw InvalidArgument("catalog matrix has the wrong column count");
        for (const auto& x : row) entries.push_back(x.get<std::int64_t>());
      }
      out.push_back(GroupElement::matrix(n, m, std::move(entries)));
    }
  } else if (kind == "permutation") {
    for (const auto& images : j.at("elements")) out.push_back(GroupElement::permutation(images.get<std::vector<std::int64_t>>()));
  } else {
    throw InvalidArgument("catalog kind must be 'matrix' or 'permutation'");
  }
  if (out.empty()) throw InvalidArgument("catalog has no elements");
  return out;
}

inline Json fit_to_json(const EsperantistFit& fit) {
  Json j;
  j["model"] = "lambda1 = c * (log N)^(-A)";
  j["c"] = fit.c;
  j["A"] = fit.exponent;
  j["residual"] = fit.residual;
  j["min_lambda1"] = fit.min_lambda1;
  Json series = Json::array();
  for (const auto& p : fit.series) series.push_back({{"N", p.vertices}, {"lambda1", p.lambda1}});
  j["series"] = series;
  return j;
}

inline EsperantistFit fit_from_json(const Json& j) {
  EsperantistFit fit;
  fit.c = j.at("c").get<double>();
  fit.exponent = j.at("A").get<double>();
  fit.residual = j.at("residual").get<double>();
  fit.min_lambda1 = j.at("min_lambda1").get<double>();
  for (const auto& p : j.at("series")) fit.series.push_back({p.at("N").get<double>(), p.at("lambda1").get<double>()});
  return fit;
}

inline Json congruence_to_json(const CongruenceLevelReport& r) {
  Json j;
  j["trivial_mod2"] = r.trivial_mod2;
  j["trivial_mod4"] = r.trivial_mod4;
  Json primes = Json::array();
  for (const auto& p : r.primes)
    primes.push_back({{"prime", p.prime},
                      {"generated_order", p.generated_order},
                      {"sp_order", p.expected_order.str()},
                      {"surjective", p.surjective}});
  j["primes"] = primes;
  return j;
}

}  // namespace thinlab
