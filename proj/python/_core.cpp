// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the channel estimation core.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rsls/channel.hpp"
#include "rsls/correlation.hpp"
#include "rsls/errors.hpp"
#include "rsls/estimators.hpp"
#include "rsls/experiments.hpp"
#include "rsls/geometry.hpp"
#include "rsls/io.hpp"
#include "rsls/pilot.hpp"
#include "rsls/rng.hpp"
#include "rsls/subspace.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reduced-subspace least-squares channel estimation for uniform planar arrays";

  py::register_exception<rsls::Error>(m, "RslsError", PyExc_RuntimeError);

  // ---- geometry ----------------------------------------------------------
  py::class_<rsls::UpaGeometry>(m, "UpaGeometry")
      .def(py::init<int, int, double, double>(), py::arg("num_h"), py::arg("num_v"),
           py::arg("spacing_h"), py::arg("spacing_v"))
      .def_readonly("num_h", &rsls::UpaGeometry::num_h)
      .def_readonly("num_v", &rsls::UpaGeometry::num_v)
      .def_readonly("spacing_h", &rsls::UpaGeometry::spacing_h)
      .def_readonly("spacing_v", &rsls::UpaGeometry::spacing_v)
      .def("size", &rsls::UpaGeometry::size)
      .def("__repr__", [](const rsls::UpaGeometry& g) {
        std::ostringstream out;
        out << "UpaGeometry(" << g.num_h << ", " << g.num_v << ", " << g.spacing_h << ", "
            << g.spacing_v << ")";
        return out.str();
      });

  py::class_<rsls::Direction>(m, "Direction")
      .def(py::init<double, double>(), py::arg("azimuth"), py::arg("elevation"))
      .def_readonly("azimuth", &rsls::Direction::azimuth)
      .def_readonly("elevation", &rsls::Direction::elevation);

  py::class_<rsls::AngularRegion>(m, "AngularRegion")
      .def(py::init<double, double, double, double>(), py::arg("azimuth_min"),
           py::arg("azimuth_max"), py::arg("elevation_min"), py::arg("elevation_max"))
      .def_readonly("azimuth_min", &rsls::AngularRegion::azimuth_min)
      .def_readonly("azimuth_max", &rsls::AngularRegion::azimuth_max)
      .def_readonly("elevation_min", &rsls::AngularRegion::elevation_min)
      .def_readonly("elevation_max", &rsls::AngularRegion::elevation_max)
      .def("area", &rsls::AngularRegion::area);

  m.def("element_position", &rsls::element_position, py::arg("geometry"), py::arg("index"));
  m.def("steering_vector", &rsls::steering_vector, py::arg("geometry"), py::arg("direction"));

  // ---- correlation and subspaces ----------------------------------------
  py::class_<rsls::CorrelationMatrix>(m, "CorrelationMatrix")
      .def(py::init<Eigen::MatrixXcd>(), py::arg("entries"))
      .def_property_readonly("entries", &rsls::CorrelationMatrix::entries)
      .def_property_readonly("dim", &rsls::CorrelationMatrix::dim)
      .def_property_readonly("trace", &rsls::CorrelationMatrix::trace)
      .def_property_readonly("eigenvalues", &rsls::CorrelationMatrix::eigenvalues)
      .def_property_readonly("eigenvectors", &rsls::CorrelationMatrix::eigenvectors);

  py::class_<rsls::Subspace>(m, "Subspace")
      .def(py::init<Eigen::MatrixXcd>(), py::arg("basis"))
      .def_property_readonly("basis", &rsls::Subspace::basis)
      .def_property_readonly("ambient_dim", &rsls::Subspace::ambient_dim)
      .def_property_readonly("rank", &rsls::Subspace::rank)
      .def("projector", &rsls::Subspace::projector);

  m.def("isotropic_correlation", &rsls::isotropic_correlation, py::arg("geometry"));
  m.def("region_correlation", &rsls::region_correlation, py::arg("geometry"), py::arg("region"));
  m.def("effective_rank", &rsls::effective_rank, py::arg("eigenvalues"), py::arg("capture"));
  m.def("dominant_subspace", &rsls::dominant_subspace, py::arg("correlation"), py::arg("capture"));
  m.def("kron_subspace", &rsls::kron_subspace, py::arg("receive"), py::arg("transmit"));
  m.def("orthogonalize_chain", &rsls::orthogonalize_chain, py::arg("subspaces"),
        py::arg("tolerance") = 1e-8);
  m.def("project_subspace", &rsls::project_subspace, py::arg("subspace"), py::arg("onto"),
        py::arg("drop_tolerance") = 1e-3);

  // ---- rng ---------------------------------------------------------------
  py::class_<rsls::Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_static(
          "substream",
          [](std::uint64_t seed, const std::vector<std::uint64_t>& path) {
            return rsls::Rng::substream(seed, std::span<const std::uint64_t>(path));
          },
          py::arg("seed"), py::arg("path"))
      .def("uniform", &rsls::Rng::uniform)
      .def("standard_normal", &rsls::Rng::standard_normal)
      .def("complex_normal", &rsls::Rng::complex_normal);

  // ---- channel model -----------------------------------------------------
  py::class_<rsls::Cluster>(m, "Cluster")
      .def(py::init<rsls::Subspace, rsls::Subspace>(), py::arg("transmit"), py::arg("receive"))
      .def_readonly("transmit", &rsls::Cluster::transmit)
      .def_readonly("receive", &rsls::Cluster::receive);

  py::class_<rsls::ClusterSet>(m, "ClusterSet")
      .def(py::init<std::vector<rsls::Cluster>, double>(), py::arg("clusters"),
           py::arg("power_scale") = 1.0)
      .def_property_readonly("clusters", &rsls::ClusterSet::clusters)
      .def_property_readonly("power_scale", &rsls::ClusterSet::power_scale)
      .def_property_readonly("num_tx", &rsls::ClusterSet::num_tx)
      .def_property_readonly("num_rx", &rsls::ClusterSet::num_rx)
      .def_property_readonly("total_dim", &rsls::ClusterSet::total_dim)
      .def_property_readonly("amplitude", &rsls::ClusterSet::amplitude)
      .def("__len__", &rsls::ClusterSet::size);

  py::class_<rsls::ChannelRealization>(m, "ChannelRealization")
      .def_readonly("x", &rsls::ChannelRealization::x)
      .def_readonly("num_rx", &rsls::ChannelRealization::num_rx)
      .def_readonly("num_tx", &rsls::ChannelRealization::num_tx);

  py::class_<rsls::ReceivedPilot>(m, "ReceivedPilot")
      .def_readonly("y", &rsls::ReceivedPilot::y)
      .def_readonly("snr", &rsls::ReceivedPilot::snr)
      .def_readonly("pilot", &rsls::ReceivedPilot::pilot);

  m.def("sample_clustered_channel", &rsls::sample_clustered_channel, py::arg("clusters"),
        py::arg("rng"));
  m.def("implied_correlation", &rsls::implied_correlation, py::arg("clusters"));
  m.def("implied_correlation_diagonal", &rsls::implied_correlation_diagonal,
        py::arg("clusters"));
  m.def("transmit_pilots", &rsls::transmit_pilots, py::arg("channel"), py::arg("pilot"),
        py::arg("snr"), py::arg("rng"), py::arg("noise_scale") = 1.0);

  // ---- pilots -------------------------------------------------------------
  py::class_<rsls::PilotMatrix>(m, "PilotMatrix")
      .def(py::init<Eigen::MatrixXcd, std::optional<std::vector<Eigen::MatrixXcd>>>(),
           py::arg("entries"), py::arg("gram_parts") = std::nullopt)
      .def_readonly("entries", &rsls::PilotMatrix::entries)
      .def_readonly("tau_p", &rsls::PilotMatrix::tau_p)
      .def_readonly("gram_parts", &rsls::PilotMatrix::gram_parts)
      .def_property_readonly("num_tx", &rsls::PilotMatrix::num_tx)
      .def("gram", &rsls::PilotMatrix::gram);

  m.def("dft_matrix", &rsls::dft_matrix, py::arg("n"));
  m.def("dft_pilot", &rsls::dft_pilot, py::arg("num_tx"), py::arg("tau_p"));
  m.def("optimal_pilot", &rsls::optimal_pilot, py::arg("transmit_subspace"), py::arg("tau_p"));
  m.def("cluster_pilot_weights", &rsls::cluster_pilot_weights, py::arg("clusters"),
        py::arg("tau_p"));
  m.def("cluster_pilot_matrix", &rsls::cluster_pilot_matrix, py::arg("clusters"),
        py::arg("weights"), py::arg("tau_p"));
  m.def("gram_decompose", &rsls::gram_decompose, py::arg("pilot"), py::arg("clusters"));

  // ---- estimators ----------------------------------------------------------
  py::enum_<rsls::Method>(m, "Method")
      .value("LS", rsls::Method::LS)
      .value("EW_MMSE", rsls::Method::EW_MMSE)
      .value("MMSE", rsls::Method::MMSE)
      .value("RS_LS", rsls::Method::RS_LS)
      .value("CLUSTER_RS_LS", rsls::Method::CLUSTER_RS_LS);
  m.def("method_name", &rsls::method_name, py::arg("method"));
  m.def("method_from_name", &rsls::method_from_name, py::arg("name"));

  py::class_<rsls::EstimateReport>(m, "EstimateReport")
      .def_readonly("x_hat", &rsls::EstimateReport::x_hat)
      .def_readonly("method", &rsls::EstimateReport::method)
      .def_readonly("analytic_mse", &rsls::EstimateReport::analytic_mse);

  m.def("ls_estimate", &rsls::ls_estimate, py::arg("received"), py::arg("pilot"));
  m.def("ew_mmse_estimate", &rsls::ew_mmse_estimate, py::arg("received"), py::arg("pilot"),
        py::arg("diag_r"));
  m.def("mmse_estimate", &rsls::mmse_estimate, py::arg("received"), py::arg("pilot"),
        py::arg("correlation"));
  m.def("mmse_cluster_estimate", &rsls::mmse_cluster_estimate, py::arg("received"),
        py::arg("pilot"), py::arg("clusters"));
  m.def("rsls_estimate", &rsls::rsls_estimate, py::arg("received"), py::arg("pilot"),
        py::arg("receive_subspace"), py::arg("transmit_subspace"));
  m.def("rsls_analytic_mse", &rsls::rsls_analytic_mse, py::arg("pilot"), py::arg("snr"),
        py::arg("receive_subspace"), py::arg("transmit_subspace"));
  m.def("cluster_rsls_estimate", &rsls::cluster_rsls_estimate, py::arg("received"),
        py::arg("gram_parts"), py::arg("clusters"));
  m.def("cluster_rsls_analytic_mse", &rsls::cluster_rsls_analytic_mse, py::arg("gram_parts"),
        py::arg("snr"), py::arg("clusters"));
  m.def("nmse", &rsls::nmse, py::arg("x_hat"), py::arg("x"));

  // ---- experiments ----------------------------------------------------------
  py::class_<rsls::ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("geometry_tx", &rsls::ExperimentConfig::geometry_tx)
      .def_readwrite("geometry_rx", &rsls::ExperimentConfig::geometry_rx)
      .def_readwrite("snr_grid_db", &rsls::ExperimentConfig::snr_grid_db)
      .def_readwrite("tau_p", &rsls::ExperimentConfig::tau_p)
      .def_readwrite("trials", &rsls::ExperimentConfig::trials)
      .def_readwrite("seed", &rsls::ExperimentConfig::seed)
      .def_readwrite("capture", &rsls::ExperimentConfig::capture)
      .def_readwrite("cluster_rx_capture", &rsls::ExperimentConfig::cluster_rx_capture)
      .def_readwrite("estimators", &rsls::ExperimentConfig::estimators)
      .def_readwrite("cluster_regions_tx", &rsls::ExperimentConfig::cluster_regions_tx)
      .def_readwrite("cluster_regions_rx", &rsls::ExperimentConfig::cluster_regions_rx)
      .def_readwrite("threads", &rsls::ExperimentConfig::threads)
      .def_readwrite("cache_dir", &rsls::ExperimentConfig::cache_dir);

  py::class_<rsls::ResultRow>(m, "ResultRow")
      .def_readonly("method", &rsls::ResultRow::method)
      .def_readonly("snr_db", &rsls::ResultRow::snr_db)
      .def_readonly("nmse_db", &rsls::ResultRow::nmse_db)
      .def_readonly("stderr_db", &rsls::ResultRow::stderr_db)
      .def_readonly("trials", &rsls::ResultRow::trials)
      .def_readonly("analytic_nmse_db", &rsls::ResultRow::analytic_nmse_db)
      .def_readonly("feasible", &rsls::ResultRow::feasible);

  py::class_<rsls::PaperScenario>(m, "PaperScenario")
      .def_readonly("clusters", &rsls::PaperScenario::clusters)
      .def_readonly("receive_subspace", &rsls::PaperScenario::receive_subspace)
      .def_readonly("transmit_subspace", &rsls::PaperScenario::transmit_subspace);

  m.def("paper_fig1_config", &rsls::paper_fig1_config);
  m.def("paper_fig2_config", &rsls::paper_fig2_config);
  m.def("build_scenario", &rsls::build_scenario, py::arg("config"));
  m.def("build_paper_scenario", &rsls::build_paper_scenario,
        py::arg("capture") = 1.0 - 1e-5, py::arg("cluster_rx_capture") = 1.0 - 1e-7);
  m.def("run_nmse_sweep", &rsls::run_nmse_sweep, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("parse_config_file", &rsls::parse_config_file, py::arg("path"));
  m.def("results_csv", [](const std::vector<rsls::ResultRow>& rows) {
    std::ostringstream out;
    rsls::write_results_csv(out, rows);
    return out.str();
  });
  m.def("selftest", [] {
    std::ostringstream out;
    const int failures = rsls::selftest(out);
    return py::make_tuple(failures, out.str());
  });

  // ---- io -------------------------------------------------------------------
  m.def("save_correlation", &rsls::save_correlation, py::arg("path"), py::arg("correlation"));
  m.def("load_correlation", &rsls::load_correlation, py::arg("path"));
  m.def("save_subspace", &rsls::save_subspace, py::arg("path"), py::arg("subspace"));
  m.def("load_subspace", &rsls::load_subspace, py::arg("path"));
  m.def("save_pilot_csv", &rsls::save_pilot_csv, py::arg("path"), py::arg("pilot"));
}
