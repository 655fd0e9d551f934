#include "eaqc/instance.hpp"

#include <cmath>
#include <fstream>
#include <ios>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "eaqc/rng.hpp"

namespace eaqc {

void ProblemInstance::validate() const {
  const int M = size();
  if (M < 1) throw std::invalid_argument("instance: M must be >= 1");
  if (J.rows() != M || J.cols() != M)
    throw std::invalid_argument("instance: J must be M x M with M = |K|");
  for (int i = 0; i < M; ++i) {
    if (J(i, i) != 0.0)
      throw std::invalid_argument("instance: J diagonal must be zero");
    if (!std::isfinite(K(i)))
      throw std::invalid_argument("instance: K has a non-finite entry");
    for (int j = 0; j < M; ++j) {
      if (!std::isfinite(J(i, j)))
        throw std::invalid_argument("instance: J has a non-finite entry");
      if (J(i, j) != J(j, i))
        throw std::invalid_argument("instance: J must be symmetric");
    }
  }
}

ProblemInstance random_instance(int M, std::uint64_t seed) {
  if (M < 1) throw std::invalid_argument("random_instance: M must be >= 1");
  Rng rng(seed);
  ProblemInstance inst;
  inst.J = Eigen::MatrixXd::Zero(M, M);
  inst.K = Eigen::VectorXd::Zero(M);
  // Stream order: J upper triangle row-major (i < j), then K.
  for (int i = 0; i < M; ++i)
    for (int j = i + 1; j < M; ++j) {
      double v = rng.uniform_pm1();
      inst.J(i, j) = v;
      inst.J(j, i) = v;
    }
  for (int i = 0; i < M; ++i) inst.K(i) = rng.uniform_pm1();
  return inst;
}

ProblemInstance ferromagnetic_instance(int M, double K) {
  if (M < 2) throw std::invalid_argument("ferromagnetic_instance: M must be >= 2");
  ProblemInstance inst;
  inst.J = -(Eigen::MatrixXd::Ones(M, M) - Eigen::MatrixXd::Identity(M, M));
  inst.K = Eigen::VectorXd::Constant(M, K);
  return inst;
}

ProblemInstance exact_cover_instance() {
  ProblemInstance inst;
  inst.J = Eigen::MatrixXd::Zero(3, 3);
  inst.J(0, 1) = inst.J(1, 0) = 0.5;
  inst.J(1, 2) = inst.J(2, 1) = 0.5;
  inst.K = Eigen::VectorXd::Constant(3, -1.0);
  return inst;
}

std::string serialize_instance(const ProblemInstance& inst) {
  inst.validate();
  nlohmann::json doc;
  const int M = inst.size();
  doc["M"] = M;
  auto J = nlohmann::json::array();
  for (int i = 0; i < M; ++i) {
    auto row = nlohmann::json::array();
    for (int j = 0; j < M; ++j) row.push_back(inst.J(i, j));
    J.push_back(row);
  }
  doc["J"] = J;
  auto K = nlohmann::json::array();
  for (int i = 0; i < M; ++i) K.push_back(inst.K(i));
  doc["K"] = K;
  return doc.dump(2);
}

ProblemInstance parse_instance(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("parse: malformed document: ") + e.what());
  }
  if (!doc.contains("M") || !doc["M"].is_number_integer())
    throw std::invalid_argument("parse: missing or non-integer key \"M\"");
  const int M = doc["M"].get<int>();
  if (M < 1) throw std::invalid_argument("parse: M must be >= 1");
  if (!doc.contains("J") || !doc["J"].is_array() ||
      static_cast<int>(doc["J"].size()) != M)
    throw std::invalid_argument("parse: \"J\" must be an M x M array");
  if (!doc.contains("K") || !doc["K"].is_array() ||
      static_cast<int>(doc["K"].size()) != M)
    throw std::invalid_argument("parse: \"K\" must have length M");

  ProblemInstance inst;
  inst.J = Eigen::MatrixXd::Zero(M, M);
  inst.K = Eigen::VectorXd::Zero(M);
  for (int i = 0; i < M; ++i) {
    const auto& row = doc["J"][i];
    if (!row.is_array() || static_cast<int>(row.size()) != M)
      throw std::invalid_argument("parse: \"J\" must be an M x M array");
    for (int j = 0; j < M; ++j) {
      if (!row[j].is_number())
        throw std::invalid_argument("parse: J entries must be numbers");
      inst.J(i, j) = row[j].get<double>();
    }
  }
  for (int i = 0; i < M; ++i) {
    if (!doc["K"][i].is_number())
      throw std::invalid_argument("parse: K entries must be numbers");
    inst.K(i) = doc["K"][i].get<double>();
  }
  inst.validate();
  return inst;
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("load_instance: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("save_instance: cannot open " + path);
  out << serialize_instance(inst) << "\n";
}

bool check_spins(const SpinConfiguration& sigma) {
  for (int i = 0; i < sigma.size(); ++i)
    if (sigma(i) != 1 && sigma(i) != -1) return false;
  return true;
}

}  // namespace eaqc
