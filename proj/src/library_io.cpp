#include "fplan/library_io.hpp"

#include <fstream>
#include <json.hpp>

namespace fplan {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json vec_to_json(const Vec& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

ordered_json mat_to_json(const Mat& m) {  // row-major
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a.push_back(m(i, j));
  return a;
}

Vec vec_from_json(const ordered_json& a) {
  Vec v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  return v;
}

Mat mat_from_json(const ordered_json& a, int n) {
  if (a.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw std::invalid_argument("library: shape array has wrong length");
  }
  Mat m(n, n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a[k++].get<double>();
  return m;
}

}  // namespace

std::string library_to_string(const FunnelLibrary& lib) {
  ordered_json root;
  root["format_version"] = 1;
  root["epsilon"] = lib.epsilon;
  root["goal_ball_radius"] = lib.goal_ball_radius;
  root["delta_in"] = lib.delta_in;
  root["delta_out"] = lib.delta_out;
  root["metadata"] = ordered_json::object();
  for (const auto& [k, v] : lib.metadata) root["metadata"][k] = v;
  root["funnels"] = ordered_json::array();
  for (const auto& f : lib.funnels) {
    ordered_json jf;
    jf["id"] = f.id();
    jf["knot_times"] = f.knot_times();
    ordered_json states = ordered_json::array();
    for (const auto& s : f.states()) states.push_back(vec_to_json(s));
    jf["nominal_states"] = states;
    ordered_json inputs = ordered_json::array();
    for (const auto& u : f.inputs()) inputs.push_back(vec_to_json(u));
    jf["nominal_inputs"] = inputs;
    ordered_json ells = ordered_json::array();
    for (const auto& e : f.ellipsoids()) {
      ordered_json je;
      je["center"] = vec_to_json(e.center());
      je["shape"] = mat_to_json(e.shape());
      ells.push_back(je);
    }
    jf["ellipsoids"] = ells;
    jf["cyclic_idx"] = f.cyclic_idx();
    jf["noncyclic_idx"] = f.noncyclic_idx();
    jf["cost"] = f.cost();
    ordered_json cert;
    ordered_json Ps = ordered_json::array();
    for (const auto& P : f.certificate().P) Ps.push_back(mat_to_json(P));
    cert["P"] = Ps;
    cert["rho"] = f.certificate().rho;
    cert["boundary_samples"] = f.certificate().boundary_samples;
    cert["worst_margin"] = f.certificate().worst_margin;
    jf["certificate"] = cert;
    root["funnels"].push_back(jf);
  }
  return root.dump(2) + "\n";
}

FunnelLibrary library_from_string(const std::string& text) {
  const ordered_json root = ordered_json::parse(text);
  if (!root.contains("format_version") || root["format_version"].get<int>() != 1) {
    throw std::invalid_argument("library: unsupported format version");
  }
  FunnelLibrary lib;
  lib.epsilon = root["epsilon"].get<double>();
  lib.goal_ball_radius = root["goal_ball_radius"].get<double>();
  lib.delta_in = root["delta_in"].get<double>();
  lib.delta_out = root["delta_out"].get<double>();
  for (const auto& [k, v] : root["metadata"].items()) lib.metadata[k] = v.get<std::string>();
  for (const auto& jf : root["funnels"]) {
    const auto times = jf["knot_times"].get<std::vector<double>>();
    std::vector<Vec> states, inputs;
    for (const auto& s : jf["nominal_states"]) states.push_back(vec_from_json(s));
    for (const auto& u : jf["nominal_inputs"]) inputs.push_back(vec_from_json(u));
    const int dim = states.empty() ? 0 : static_cast<int>(states.front().size());
    std::vector<Ellipsoid> ells;
    for (const auto& je : jf["ellipsoids"]) {
      ells.emplace_back(vec_from_json(je["center"]), mat_from_json(je["shape"], dim));
    }
    LyapunovCertificate cert;
    for (const auto& jp : jf["certificate"]["P"]) cert.P.push_back(mat_from_json(jp, dim));
    cert.rho = jf["certificate"]["rho"].get<std::vector<double>>();
    cert.boundary_samples = jf["certificate"]["boundary_samples"].get<int>();
    cert.worst_margin = jf["certificate"]["worst_margin"].get<double>();
    Funnel f(jf["id"].get<std::string>(), times, states, inputs, ells,
             jf["cyclic_idx"].get<std::vector<int>>(), jf["noncyclic_idx"].get<std::vector<int>>(),
             cert);
    const double stored_cost = jf["cost"].get<double>();
    if (std::abs(stored_cost - f.cost()) > 1e-9) {
      throw std::invalid_argument("library: stored cost disagrees with the nominal polyline");
    }
    lib.funnels.push_back(std::move(f));
  }
  lib.validate();
  return lib;
}

void save_library(const FunnelLibrary& lib, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("library: cannot write " + path);
  out << library_to_string(lib);
}

FunnelLibrary load_library(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("library: cannot read " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return library_from_string(text);
}

}  // namespace fplan
