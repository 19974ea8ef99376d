#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blockspec/blockspec.hpp"

namespace py = pybind11;
using namespace blockspec;

namespace {

SbmParams make_params(int K, std::vector<double> rho, std::vector<Matrix> modalities, bool directed) {
  return validate_params(SbmParams{K, std::move(rho), std::move(modalities), directed});
}

Adjacency to_adjacency(const Eigen::Ref<const Matrix>& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionError, "adjacency must be square");
  return a.cast<std::uint8_t>();
}

py::dict embedding_dict(const ModalityEmbedding& e) {
  py::dict d;
  d["R"] = e.R;
  d["sigma"] = e.sigma;
  d["X"] = e.X;
  d["Y"] = e.Y;
  return d;
}

py::dict selection_dict(const KSelection& s) {
  py::list rows;
  for (const SelectionRow& r : s.trace.rows) {
    py::dict row;
    row["k"] = r.k;
    row["residual"] = r.residual;
    row["statistic"] = r.statistic;
    row["min_part"] = r.min_part;
    row["separation"] = r.separation;
    rows.append(row);
  }
  py::dict d;
  d["k"] = s.k;
  d["trace"] = rows;
  d["diagnostic"] = s.trace.diagnostic;
  if (s.clustering) d["labels"] = assignment_from_clustering(*s.clustering);
  return d;
}

ClustererConfig clusterer(int restarts, std::uint64_t seed) {
  LloydOptions opts;
  opts.restarts = restarts;
  return {opts, {seed, 0}};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Adjacency-spectral partitioning of stochastic block model graphs";
  m.attr("__version__") = kVersion;

  static py::exception<Error> error(m, "BlockspecError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::enum_<KnowledgeMode>(m, "KnowledgeMode")
      .value("RowsDistinct", KnowledgeMode::RowsDistinct)
      .value("ColumnsDistinct", KnowledgeMode::ColumnsDistinct)
      .value("Neither", KnowledgeMode::Neither);

  py::class_<SbmParams>(m, "SbmParams")
      .def(py::init(&make_params), py::arg("K"), py::arg("rho"), py::arg("modalities"),
           py::arg("directed") = false)
      .def_readonly("K", &SbmParams::K)
      .def_readonly("rho", &SbmParams::rho)
      .def_readonly("modalities", &SbmParams::modalities)
      .def_readonly("directed", &SbmParams::directed);

  py::class_<ModelConstants>(m, "ModelConstants")
      .def_readonly("alpha", &ModelConstants::alpha)
      .def_readonly("beta", &ModelConstants::beta)
      .def_readonly("gamma", &ModelConstants::gamma);

  m.def("numerical_rank", [](const Matrix& a) { return numerical_rank(a); }, py::arg("M"));
  m.def("compute_constants", py::overload_cast<const SbmParams&>(&compute_constants), py::arg("params"));

  m.def(
      "sample_graph",
      [](int n, const SbmParams& params, std::uint64_t seed, std::uint64_t stream) {
        const GraphSample g = sample_graph(n, params, {seed, stream});
        std::vector<Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>> adj(g.adjacency.begin(),
                                                                                      g.adjacency.end());
        return py::make_tuple(g.tau, adj);
      },
      py::arg("n"), py::arg("params"), py::arg("seed") = 0, py::arg("stream") = 0,
      "Returns (tau, [A_1, ..., A_S]) with 1-based labels.");

  m.def(
      "svd_embed", [](const Eigen::Ref<const Matrix>& a, int R) { return embedding_dict(svd_embed(Matrix(a), R)); },
      py::arg("A"), py::arg("R"));

  m.def(
      "embed",
      [](const std::vector<Matrix>& adjacency, std::vector<int> R, KnowledgeMode mode) {
        if (R.size() == 1) R.assign(adjacency.size(), R.front());
        if (R.size() != adjacency.size()) throw Error(ErrorCode::DimensionError, "one R per modality");
        std::vector<ModalityEmbedding> parts;
        for (std::size_t s = 0; s < adjacency.size(); ++s) parts.push_back(svd_embed(to_adjacency(adjacency[s]), R[s]));
        return assemble_features(parts, mode);
      },
      py::arg("adjacency"), py::arg("R"), py::arg("mode") = KnowledgeMode::RowsDistinct,
      "Feature matrix Z assembled from every modality.");

  m.def("estimate_rank", &estimate_rank, py::arg("sigma"), py::arg("n"), py::arg("omega") = kDefaultOmega);

  m.def(
      "lloyd_cluster",
      [](const Matrix& z, int k, int restarts, std::uint64_t seed) {
        LloydOptions opts;
        opts.restarts = restarts;
        const Clustering c = lloyd_cluster(z, k, opts, {seed, 0});
        return py::make_tuple(assignment_from_clustering(c), c.objective);
      },
      py::arg("Z"), py::arg("k"), py::arg("restarts") = 50, py::arg("seed") = 0,
      "Returns (canonical labels, objective).");

  m.def(
      "exact_min_sse",
      [](const Matrix& z, int k) {
        const Clustering c = exact_min_sse(z, k);
        return py::make_tuple(assignment_from_clustering(c), c.objective);
      },
      py::arg("Z"), py::arg("k"));

  m.def(
      "estimate_k_hat",
      [](const Matrix& z, double xi, int k_max, int restarts, std::uint64_t seed) {
        return selection_dict(estimate_k_hat(z, static_cast<int>(z.rows()), xi, k_max, clusterer(restarts, seed)));
      },
      py::arg("Z"), py::arg("xi") = kDefaultXi, py::arg("k_max") = 8, py::arg("restarts") = 50,
      py::arg("seed") = 0);

  m.def(
      "estimate_k_check",
      [](const Matrix& z, double zeta, double theta, int restarts, std::uint64_t seed) {
        return selection_dict(estimate_k_check(z, static_cast<int>(z.rows()), zeta, theta, clusterer(restarts, seed)));
      },
      py::arg("Z"), py::arg("zeta"), py::arg("theta"), py::arg("restarts") = 50, py::arg("seed") = 0);

  m.def("misassignment_count", &misassignment_count, py::arg("tau"), py::arg("tau_hat"));
  m.def("misassignment_fraction", &misassignment_fraction, py::arg("tau"), py::arg("tau_hat"));

  m.def(
      "run_study",
      [](const std::string& config_json, int workers) {
        const ExperimentConfig config = config_from_json(nlohmann::json::parse(config_json));
        StudyResult result;
        {
          py::gil_scoped_release release;
          result = run_study(config, workers);
        }
        return py::make_tuple(records_csv(result), aggregates_csv(result, config));
      },
      py::arg("config_json"), py::arg("workers") = 1,
      "Runs a study from a JSON config string; returns (records_csv, aggregates_csv).");
}
