// Python bindings for the core operations: geodesy, statistics, ingest,
// training, explanation, and the audit experiments.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "poixa/audit.hpp"
#include "poixa/checkpoint.hpp"
#include "poixa/explain.hpp"
#include "poixa/report_io.hpp"
#include "poixa/synthgen.hpp"

namespace py = pybind11;
using namespace poixa;

namespace {

py::object json_to_py(const ordered_json& j) {
  switch (j.type()) {
    case nlohmann::detail::value_t::null: return py::none();
    case nlohmann::detail::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::detail::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case nlohmann::detail::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case nlohmann::detail::value_t::number_float: return py::float_(j.get<double>());
    case nlohmann::detail::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::detail::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case nlohmann::detail::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it)
        out[py::str(it.key())] = json_to_py(it.value());
      return out;
    }
    default: return py::none();
  }
}

py::dict test_result_py(const TestResult& t) {
  return py::cast<py::dict>(json_to_py(test_result_json(t)));
}

struct PyRecommender {
  RecommenderState state;
};

struct PyCompressor {
  CompressorState state;
};

BoundingBox bbox_from_tuple(const std::optional<std::tuple<double, double, double, double>>& t) {
  if (!t) return kNycBoundingBox;
  return BoundingBox{std::get<0>(*t), std::get<1>(*t), std::get<2>(*t), std::get<3>(*t)};
}

}  // namespace

PYBIND11_MODULE(poixaudit, m) {
  m.doc() = "explainable next-POI recommendation and audit toolkit";

  py::register_exception<Error>(m, "PoixaError");

  // ---- geodesy ----
  m.def(
      "haversine_km",
      [](double lat1, double lon1, double lat2, double lon2) {
        return haversine_km({lat1, lon1}, {lat2, lon2});
      },
      py::arg("lat1"), py::arg("lon1"), py::arg("lat2"), py::arg("lon2"),
      "Great-circle distance in kilometers (mean Earth radius 6371 km).");

  // ---- statistics ----
  m.def("reg_incomplete_beta", &reg_incomplete_beta, py::arg("a"), py::arg("b"), py::arg("x"));
  m.def(
      "t_test_two_sample",
      [](const std::vector<double>& xs, const std::vector<double>& ys, double threshold) {
        return test_result_py(t_test_two_sample(xs, ys, threshold));
      },
      py::arg("xs"), py::arg("ys"), py::arg("threshold") = 0.05);
  m.def(
      "t_test_one_sample",
      [](const std::vector<double>& xs, double mu0, double threshold) {
        return test_result_py(t_test_one_sample(xs, mu0, threshold));
      },
      py::arg("xs"), py::arg("mu0"), py::arg("threshold") = 0.05);
  m.def(
      "anova_one_way",
      [](const std::vector<std::vector<double>>& groups, double threshold) {
        return test_result_py(anova_one_way(groups, threshold));
      },
      py::arg("groups"), py::arg("threshold") = 0.05);

  // ---- dataset ----
  py::class_<Dataset>(m, "Dataset")
      .def_property_readonly("n_users", &Dataset::n_users)
      .def_property_readonly("n_pois", [](const Dataset& ds) { return ds.registry.size(); })
      .def("user_ids",
           [](const Dataset& ds) {
             std::vector<std::int64_t> ids;
             for (const auto& t : ds.trajectories) ids.push_back(t.user_id);
             return ids;
           })
      .def("poi_ids", [](const Dataset& ds) { return ds.registry.ids(); })
      .def(
          "poi_coord",
          [](const Dataset& ds, std::int64_t poi_id) {
            const GeoPoint& g = ds.registry.coord(poi_id);
            return py::make_tuple(g.lat, g.lon);
          },
          py::arg("poi_id"))
      .def(
          "trajectory",
          [](const Dataset& ds, std::int64_t user_id) {
            py::list out;
            for (const Step& s : ds.trajectory_of(user_id).steps)
              out.append(py::make_tuple(s.poi_id, s.raw_hour, s.hour_of_week));
            return out;
          },
          py::arg("user_id"))
      .def("save", [](const Dataset& ds, const std::string& path) { save_dataset_file(ds, path); })
      .def("to_text", &dataset_to_string)
      .def_static("load", &load_dataset_file, py::arg("path"));

  m.def(
      "build_dataset",
      [](const std::string& checkins_text,
         const std::optional<std::tuple<double, double, double, double>>& bbox, int min_len) {
        std::istringstream in(checkins_text);
        return build_trajectories(parse_checkins(in), bbox_from_tuple(bbox), min_len);
      },
      py::arg("checkins_text"), py::arg("bbox") = py::none(), py::arg("min_len") = 10,
      "Parse tab-separated check-in lines and build per-user trajectories. The bbox "
      "is (lat_min, lat_max, lon_min, lon_max); the default is the New York window.");

  m.def(
      "synth_checkins",
      [](int n_users, int n_groups, int route_len, int extra_pois, double noise_prob,
         std::uint64_t seed) {
        SynthConfig cfg;
        cfg.n_users = n_users;
        cfg.n_groups = n_groups;
        cfg.route_len = route_len;
        cfg.extra_pois = extra_pois;
        cfg.noise_prob = noise_prob;
        cfg.seed = seed;
        return synth_checkins(cfg);
      },
      py::arg("n_users") = 200, py::arg("n_groups") = 20, py::arg("route_len") = 6,
      py::arg("extra_pois") = 60, py::arg("noise_prob") = 0.06, py::arg("seed") = 1,
      "Generate synthetic check-in lines for demos and tests.");

  // ---- models ----
  py::class_<PyRecommender>(m, "Recommender")
      .def_static(
          "train",
          [](const Dataset& ds, int d_emb, int t_max, int epochs, double lr,
             std::uint64_t seed) {
            ModelConfig cfg;
            cfg.d_emb = d_emb;
            cfg.t_max = t_max;
            cfg.epochs = epochs;
            cfg.lr = lr;
            cfg.seed = seed;
            return PyRecommender{train_recommender<float>(cfg, ds)};
          },
          py::arg("dataset"), py::arg("d_emb") = 50, py::arg("t_max") = 100,
          py::arg("epochs") = 30, py::arg("lr") = 3e-3, py::arg("seed") = 42)
      .def(
          "predict",
          [](const PyRecommender& self, const Dataset& ds, std::int64_t user_id) {
            const int u = ds.user_index(user_id);
            DatasetSplit split =
                split_last(ds.trajectories[static_cast<std::size_t>(u)], self.state.config.t_max);
            Prediction p = predict(self.state, ds.registry, u, split.input_steps);
            py::dict out;
            out["recommended_poi"] = ds.registry.id_at(p.recommended);
            out["recommended_index"] = p.recommended;
            out["valid_T"] = p.valid_T;
            std::vector<double> row;
            for (int t = 0; t < p.valid_T; ++t)
              row.push_back(static_cast<double>(p.weight_matrix.at(p.recommended, t)));
            out["weight_row"] = py::cast(row);
            return out;
          },
          py::arg("dataset"), py::arg("user_id"))
      .def("top1_accuracy",
           [](const PyRecommender& self, const Dataset& ds) {
             RecommenderState state = self.state;
             return evaluate_top1(state, ds);
           })
      .def("save",
           [](const PyRecommender& self, const std::string& path, const Dataset& ds) {
             std::vector<std::int64_t> user_ids;
             for (const auto& t : ds.trajectories) user_ids.push_back(t.user_id);
             save_recommender_checkpoint(path, self.state, user_ids, ds.registry.ids());
           })
      .def_static("load", [](const std::string& path) {
        return PyRecommender{load_recommender_checkpoint(path)};
      });

  py::class_<PyCompressor>(m, "Compressor")
      .def_static(
          "train",
          [](const PyRecommender& rec, const Dataset& ds, int epochs, double lr,
             std::uint64_t seed) {
            CompressorConfig cfg;
            cfg.epochs = epochs;
            cfg.lr = lr;
            cfg.seed = seed;
            return PyCompressor{train_compressor<float>(cfg, rec.state, ds)};
          },
          py::arg("recommender"), py::arg("dataset"), py::arg("epochs") = 80,
          py::arg("lr") = 3e-3, py::arg("seed") = 1)
      .def(
          "similar_users",
          [](const PyCompressor& self, const PyRecommender& rec, const Dataset& ds,
             std::int64_t user_id, int k) {
            py::list out;
            for (const ScoredUser& s : similar_users(self.state, rec.state, ds, user_id, k))
              out.append(py::make_tuple(s.user_id, s.score));
            return out;
          },
          py::arg("recommender"), py::arg("dataset"), py::arg("user_id"), py::arg("k") = 2)
      .def(
          "user_vector",
          [](const PyCompressor& self, const PyRecommender& rec, const Dataset& ds,
             std::int64_t user_id) {
            return user_vector(self.state, rec.state, ds, user_id).embedding;
          },
          py::arg("recommender"), py::arg("dataset"), py::arg("user_id"))
      .def("self_accuracy",
           [](const PyCompressor& self, const PyRecommender& rec, const Dataset& ds) {
             return evaluate_self_classification(self.state, rec.state, ds);
           })
      .def("save",
           [](const PyCompressor& self, const std::string& path, const Dataset& ds) {
             std::vector<std::int64_t> user_ids;
             for (const auto& t : ds.trajectories) user_ids.push_back(t.user_id);
             save_compressor_checkpoint(path, self.state, user_ids);
           })
      .def_static("load", [](const std::string& path) {
        return PyCompressor{load_compressor_checkpoint(path)};
      });

  // ---- explanation ----
  m.def(
      "explain",
      [](const PyRecommender& rec, const PyCompressor& comp, const Dataset& ds,
         std::int64_t user_id, int k_steps, int k_users) {
        Explanation ex = explain(rec.state, comp.state, ds, user_id, k_steps, k_users);
        py::dict out;
        out["user"] = ex.user_id;
        out["recommended_poi"] = ex.recommended_poi;
        out["valid_T"] = ex.valid_T;
        py::list steps;
        for (const auto& [t, w] : ex.timestep_ranking) steps.append(py::make_tuple(t, w));
        out["influential_timesteps"] = steps;
        py::list sims;
        for (const ScoredUser& s : ex.similar) sims.append(py::make_tuple(s.user_id, s.score));
        out["similar_users"] = sims;
        return out;
      },
      py::arg("recommender"), py::arg("compressor"), py::arg("dataset"), py::arg("user_id"),
      py::arg("k_steps") = 2, py::arg("k_users") = 2);

  // ---- audits ----
  m.def(
      "run_audit",
      [](int exp, const Dataset& ds, const PyRecommender& rec, const PyCompressor& comp,
         std::uint64_t seed, int trials, int random_trials, int n_random, double threshold) {
        PredictFn predict_fn = make_predict_fn(rec.state, ds.registry);
        SimilarFn similar_fn = make_similar_fn(comp.state, rec.state, ds);
        const int t_max = rec.state.config.t_max;
        ordered_json prov;
        prov["master_seed"] = seed;
        switch (exp) {
          case 1:
            return json_to_py(exp1_json(
                run_exp1(ds, t_max, predict_fn, trials, derive_seed(seed, StreamKey("exp1")),
                         threshold),
                prov));
          case 2:
            return json_to_py(exp2_json(
                run_exp2(ds, t_max, predict_fn, similar_fn, random_trials,
                         derive_seed(seed, StreamKey("exp2")), threshold),
                prov));
          case 3:
            return json_to_py(exp3_json(
                run_exp3(ds, similar_fn, n_random, derive_seed(seed, StreamKey("exp3")),
                         threshold),
                prov));
          case 4: {
            CloneDataset clones = build_clone_dataset(ds, derive_seed(seed, StreamKey("clones")));
            ModelConfig mcfg = rec.state.config;
            CompressorConfig ccfg = comp.state.config;
            return json_to_py(exp4_json(run_exp4(clones, mcfg, ccfg, seed), prov));
          }
          default:
            fail(errc::config_error, "experiment must be 1, 2, 3, or 4");
        }
      },
      py::arg("exp"), py::arg("dataset"), py::arg("recommender"), py::arg("compressor"),
      py::arg("seed") = 42, py::arg("trials") = 10, py::arg("random_trials") = 30,
      py::arg("n_random") = 10, py::arg("threshold") = 0.05,
      "Run one verification experiment and return its report as a dict.");

  m.def(
      "avg_poi_distance",
      [](const Dataset& ds, std::int64_t user_a, std::int64_t user_b,
         std::optional<int> closest_k) {
        return avg_poi_distance(ds.trajectory_of(user_a), ds.trajectory_of(user_b), ds.registry,
                                closest_k);
      },
      py::arg("dataset"), py::arg("user_a"), py::arg("user_b"),
      py::arg("closest_k") = py::none());
  m.def(
      "avg_time_difference",
      [](const Dataset& ds, std::int64_t user_a, std::int64_t user_b,
         std::optional<int> closest_k) {
        return avg_time_difference(ds.trajectory_of(user_a), ds.trajectory_of(user_b), closest_k);
      },
      py::arg("dataset"), py::arg("user_a"), py::arg("user_b"),
      py::arg("closest_k") = py::none());

  m.attr("__version__") = "0.1.0";
}
