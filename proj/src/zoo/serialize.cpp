#include <cmath>

#include "polydecay/zoo.hpp"

namespace polydecay::zoo {

nlohmann::json to_json(const GeneratorModel& model) {
  nlohmann::json doc;
  doc["family"] = model.family;
  doc["params"] = nlohmann::json::object();
  for (const auto& [k, v] : model.params) doc["params"][k] = v;
  doc["dim"] = model.dim();
  if (std::isinf(model.space_p)) {
    doc["space_p"] = "inf";
  } else {
    doc["space_p"] = model.space_p;
  }
  doc["is_normal"] = model.is_normal;
  if (model.beta_analytic) doc["beta_analytic"] = *model.beta_analytic;
  if (model.omega_analytic) doc["omega_analytic"] = *model.omega_analytic;
  auto entries = nlohmann::json::array();
  for (Index i = 0; i < model.matrix.rows(); ++i)
    for (Index j = 0; j < model.matrix.cols(); ++j)
      entries.push_back({model.matrix(i, j).real(), model.matrix(i, j).imag()});
  doc["matrix"] = std::move(entries);
  return doc;
}

GeneratorModel model_from_json(const nlohmann::json& doc) {
  try {
    GeneratorModel m;
    m.family = doc.at("family").get<std::string>();
    for (const auto& [k, v] : doc.at("params").items()) m.params[k] = v.get<double>();
    const auto dim = doc.at("dim").get<Index>();
    const auto& sp = doc.at("space_p");
    m.space_p = sp.is_string() ? std::numeric_limits<double>::infinity() : sp.get<double>();
    m.is_normal = doc.value("is_normal", false);
    if (doc.contains("beta_analytic")) m.beta_analytic = doc["beta_analytic"].get<double>();
    if (doc.contains("omega_analytic")) m.omega_analytic = doc["omega_analytic"].get<double>();
    const auto& entries = doc.at("matrix");
    require(dim > 0 && entries.size() == static_cast<std::size_t>(dim * dim), ErrorKind::DimensionMismatch,
            "model_from_json: matrix has " + std::to_string(entries.size()) + " entries, expected dim^2");
    m.matrix.resize(dim, dim);
    std::size_t n = 0;
    for (Index i = 0; i < dim; ++i)
      for (Index j = 0; j < dim; ++j, ++n) m.matrix(i, j) = Complex(entries[n].at(0), entries[n].at(1));
    require(all_finite(m.matrix), ErrorKind::DomainError, "model_from_json: non-finite entry");
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("model_from_json: ") + e.what());
  }
}

}  // namespace polydecay::zoo
