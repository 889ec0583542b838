#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "twseg/baselines.hpp"
#include "twseg/eval.hpp"
#include "twseg/graph.hpp"
#include "twseg/hierarchy.hpp"
#include "twseg/io.hpp"
#include "twseg/refine.hpp"
#include "twseg/synth.hpp"

namespace py = pybind11;
using namespace twseg;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<int, py::array::c_style | py::array::forcecast>;

FeatureSequence to_sequence(const FloatArray& x) {
  if (x.ndim() != 2) throw Error(Errc::ShapeMismatch, "features must be a 2-d array (frames x dims)");
  const auto n = static_cast<std::size_t>(x.shape(0));
  const auto d = static_cast<std::size_t>(x.shape(1));
  FeatureSequence seq;
  seq.frames = Matrix<float>(n, d, std::vector<float>(x.data(), x.data() + n * d));
  return seq;
}

py::array_t<float> from_sequence(const FeatureSequence& seq) {
  py::array_t<float> out({seq.num_frames(), seq.dims()});
  std::copy(seq.frames.data().begin(), seq.frames.data().end(), out.mutable_data());
  return out;
}

py::array_t<double> from_matrix(const Matrix<double>& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

std::vector<int> to_ints(const IntArray& a) {
  if (a.ndim() != 1) throw Error(Errc::ShapeMismatch, "labels must be a 1-d array");
  return {a.data(), a.data() + a.size()};
}

py::array_t<int> from_ints(std::span<const int> v) {
  py::array_t<int> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

GraphOptions options(bool temporal, bool shared) { return {temporal, shared}; }

py::list merges_of(const RefinementTrace& t) {
  py::list out;
  for (const auto& m : t.merges) out.append(py::make_tuple(m.cluster_a, m.cluster_b, m.w));
  return out;
}

py::dict report_dict(const EvalReport& r) {
  py::dict d;
  d["mof"] = r.mof;
  d["iou"] = r.iou;
  d["f1"] = r.f1;
  d["midpoint_precision"] = r.midpoint_precision;
  d["midpoint_recall"] = r.midpoint_recall;
  d["purity"] = r.purity;
  d["num_frames"] = r.num_frames;
  d["mapping"] = r.mapping.pred_to_gt;
  return d;
}

}  // namespace

PYBIND11_MODULE(_twseg, m) {
  m.doc() = "Temporally weighted first-neighbor action segmentation";

  py::register_exception<Error>(m, "TwsegError", PyExc_ValueError);

  m.def("feature_distances", [](const FloatArray& x) {
    return from_matrix(feature_distances(to_sequence(x).frames));
  });
  m.def("temporal_distances", [](const std::vector<double>& t, std::size_t n_total) {
    return from_matrix(temporal_distances(t, n_total));
  }, py::arg("timestamps"), py::arg("n_total"));
  m.def("weighted_distances", [](const FloatArray& x) {
    const auto seq = to_sequence(x);
    const std::size_t n = seq.num_frames();
    return from_matrix(weighted_distances(feature_distances(seq.frames),
                                          temporal_distances(frame_timestamps(n), n), n)
                           .w);
  });
  m.def("nearest_neighbors", [](const FloatArray& x, bool temporal) {
    const auto seq = to_sequence(x);
    const std::size_t n = seq.num_frames();
    return from_ints(nearest_neighbors(normalize_rows(seq.frames), frame_timestamps(n), n,
                                       options(temporal, false)));
  }, py::arg("features"), py::arg("temporal") = true);
  m.def("connected_components", [](const IntArray& nn, bool shared) {
    return from_ints(components_from_neighbors(to_ints(nn), shared).labels());
  }, py::arg("nn"), py::arg("shared_neighbor_links") = false);

  m.def("build_hierarchy", [](const FloatArray& x, bool temporal, bool shared) {
    py::list levels;
    for (const auto& p : build_hierarchy(to_sequence(x), options(temporal, shared)).partitions) {
      levels.append(from_ints(p.labels()));
    }
    return levels;
  }, py::arg("features"), py::arg("temporal") = true, py::arg("shared_neighbor_links") = false);
  m.def("select_level", [](const std::vector<std::vector<int>>& levels, std::size_t k) {
    PartitionHierarchy h;
    for (const auto& l : levels) h.partitions.emplace_back(l);
    validate_hierarchy(h);
    return from_ints(select_level(h, k).labels());
  }, py::arg("levels"), py::arg("k"));
  m.def("refine_to_k", [](const FloatArray& x, const IntArray& labels, std::size_t k, bool temporal) {
    auto [p, trace] = refine_to_k(to_sequence(x), Partition(to_ints(labels)), k, options(temporal, false));
    return py::make_tuple(from_ints(p.labels()), merges_of(trace));
  }, py::arg("features"), py::arg("labels"), py::arg("k"), py::arg("temporal") = true);
  m.def("segment", [](const FloatArray& x, std::size_t k) {
    const auto r = segment(to_sequence(x), k);
    py::dict d;
    d["labels"] = from_ints(r.partition.labels());
    d["k_unreachable"] = r.k_unreachable;
    d["level_counts"] = r.level_counts;
    d["merges"] = merges_of(r.trace);
    return d;
  }, py::arg("features"), py::arg("k"));

  m.def("finch", [](const FloatArray& x, std::size_t k) {
    return from_ints(baselines::finch(to_sequence(x), k).segmentation.partition.labels());
  }, py::arg("features"), py::arg("k"));
  m.def("kmeans", [](const FloatArray& x, std::size_t k, std::uint64_t seed, std::size_t restarts,
                     std::size_t max_iters) {
    const auto r = baselines::kmeans(to_sequence(x), {k, max_iters, seed, restarts});
    return py::make_tuple(from_ints(r.partition.labels()), r.wcss);
  }, py::arg("features"), py::arg("k"), py::arg("seed") = 0, py::arg("restarts") = 10,
     py::arg("max_iters") = 100);
  m.def("equal_split", [](std::size_t n, std::size_t k) {
    return from_ints(baselines::equal_split(n, k).labels());
  }, py::arg("n"), py::arg("k"));

  m.def("hungarian_match", [](const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& c) {
    if (c.ndim() != 2) throw Error(Errc::ShapeMismatch, "overlap must be a 2-d array");
    eval::OverlapMatrix o(static_cast<std::size_t>(c.shape(0)), static_cast<std::size_t>(c.shape(1)));
    std::copy(c.data(), c.data() + c.size(), o.counts.begin());
    const auto mp = eval::hungarian_match(o);
    return py::make_tuple(mp.pred_to_gt, mp.total_overlap);
  }, py::arg("overlap"));
  m.def("evaluate", [](const IntArray& pred, const std::vector<std::string>& gt,
                       const std::string& background, const std::string& f1) {
    const auto mode = f1 == "macro" ? eval::F1Mode::Macro : eval::F1Mode::Micro;
    return report_dict(eval::evaluate(Partition(to_ints(pred)), GroundTruth::from_tokens(gt, background), mode));
  }, py::arg("pred"), py::arg("gt"), py::arg("background") = "SIL", py::arg("f1") = "micro");
  m.def("purity", [](const IntArray& pred, const std::vector<std::string>& gt) {
    return eval::purity(Partition(to_ints(pred)), GroundTruth::from_tokens(gt));
  }, py::arg("pred"), py::arg("gt"));

  m.def("synth_generate", [](std::size_t k, std::size_t n, std::size_t d, double sep, double sigma,
                             double background_frac, std::vector<std::string> pattern,
                             std::uint64_t seed) {
    synth::SynthSpec spec;
    spec.k = k;
    spec.n = n;
    spec.d = d;
    spec.sep = sep;
    spec.noise_sigma = sigma;
    spec.background_frac = background_frac;
    spec.repeat_pattern = std::move(pattern);
    spec.seed = seed;
    const auto s = synth::generate(spec);
    return py::make_tuple(from_sequence(s.features), s.ground_truth.tokens());
  }, py::arg("k") = 4, py::arg("n") = 400, py::arg("d") = 16, py::arg("sep") = 8.0,
     py::arg("sigma") = 1.0, py::arg("background_frac") = 0.0,
     py::arg("pattern") = std::vector<std::string>{}, py::arg("seed") = 0);

  m.def("load_features", [](const std::filesystem::path& p) { return from_sequence(io::load_features(p)); });
  m.def("save_features", [](const FloatArray& x, const std::filesystem::path& p) {
    const auto seq = to_sequence(x);
    if (p.extension() == ".csv") io::save_features_csv(seq, p);
    else io::save_features_binary(seq, p);
  }, py::arg("features"), py::arg("path"));
  m.def("load_labels", [](const std::filesystem::path& p, const std::string& background) {
    return io::load_labels(p, background).tokens();
  }, py::arg("path"), py::arg("background") = "SIL");
}
