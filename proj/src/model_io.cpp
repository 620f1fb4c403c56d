#include "fgp/model_io.hpp"

#include <cmath>

#include "fgp/errors.hpp"

namespace fgp {
namespace {

double number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw DomainError(std::string(what) + " must be a number");
  return j.get<double>();
}

std::pair<double, double> pair_of(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    throw DomainError(std::string(what) + " must be a two-element array");
  return {number(j[0], what), number(j[1], what)};
}

}  // namespace

nlohmann::json parse_json(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("invalid JSON for ") + what + ": " + e.what());
  }
}

CovarianceModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw DomainError("model must be an object with a string \"family\"");
  const Family f = family_from_name(j["family"].get<std::string>());
  CovarianceModel::Params params;
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw DomainError("\"params\" must be an object");
    for (const auto& [k, v] : j["params"].items()) params[k] = number(v, "model parameter");
  }
  return CovarianceModel(f, std::move(params));
}

nlohmann::json model_to_json(const CovarianceModel& m) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : m.params()) params[k] = v;
  return {{"family", std::string(family_name(m.family()))}, {"params", params}};
}

BVFunction bv_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("interval"))
    throw DomainError("BV function must be an object with \"interval\"");
  const auto [a, b] = pair_of(j["interval"], "\"interval\"");
  std::vector<Piece> pieces;
  if (j.contains("pieces")) {
    if (!j["pieces"].is_array()) throw DomainError("\"pieces\" must be an array");
    for (const auto& p : j["pieces"]) {
      if (!p.is_object() || !p.contains("sub"))
        throw DomainError("each piece needs \"sub\"");
      const auto [u, v] = pair_of(p["sub"], "piece \"sub\"");
      Piece piece{u, v, {}};
      if (p.contains("coeffs")) {
        const auto& c = p["coeffs"];
        if (!c.is_array() || c.size() > 4)
          throw DomainError("\"coeffs\" must be an array of at most 4 numbers");
        for (std::size_t i = 0; i < c.size(); ++i) piece.coeffs[i] = number(c[i], "coefficient");
      }
      pieces.push_back(piece);
    }
  }
  if (pieces.empty()) pieces.push_back(Piece{a, b, {}});
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    if (!j["atoms"].is_array()) throw DomainError("\"atoms\" must be an array");
    for (const auto& at : j["atoms"]) {
      if (!at.is_object() || !at.contains("x") || !at.contains("jump"))
        throw DomainError("each atom needs \"x\" and \"jump\"");
      atoms.push_back({number(at["x"], "atom x"), number(at["jump"], "atom jump")});
    }
  }
  return BVFunction(a, b, std::move(pieces), std::move(atoms));
}

nlohmann::json bv_to_json(const BVFunction& f) {
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto& p : f.pieces())
    pieces.push_back({{"sub", {p.lo, p.hi}},
                      {"coeffs", {p.coeffs[0], p.coeffs[1], p.coeffs[2], p.coeffs[3]}}});
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : f.jumps()) atoms.push_back({{"x", a.x}, {"jump", a.mass}});
  return {{"interval", {f.a(), f.b()}}, {"pieces", pieces}, {"atoms", atoms}};
}

nlohmann::json to_json(const CumulantReport& r) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  return {{"T", r.T},
          {"n", r.n},
          {"family", r.family},
          {"H", r.H},
          {"theta", r.theta},
          {"kappa2", r.kappa2},
          {"kappa3", r.kappa3},
          {"kappa4", r.kappa4},
          {"kappa2_direct", r.kappa2_direct},
          {"sigma_B2_target", num(r.sigma_B2_target)},
          {"gap2", num(r.gap2)}};
}

}  // namespace fgp
