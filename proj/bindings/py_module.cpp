#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>
#include <vector>

#include "spherevar/capgeom.hpp"
#include "spherevar/experiment.hpp"
#include "spherevar/partition.hpp"
#include "spherevar/processes.hpp"
#include "spherevar/specfun.hpp"
#include "spherevar/variance.hpp"

namespace py = pybind11;
using namespace spherevar;

namespace {

py::array_t<double> pointset_to_array(const PointSet& pts) {
  py::array_t<double> out({pts.size(), pts.ambient_dim()});
  auto buf = out.mutable_unchecked<2>();
  for (int i = 0; i < pts.size(); ++i) {
    const auto p = pts.point(i);
    for (int j = 0; j < pts.ambient_dim(); ++j) buf(i, j) = p[j];
  }
  return out;
}

ProcessSpec make_process_spec(const std::string& family, int d, int n, int L) {
  ProcessSpec spec;
  spec.family = family_from_name(family);
  spec.d = d;
  spec.n = n;
  spec.L = L;
  spec.validate();
  return spec;
}

}  // namespace

PYBIND11_MODULE(_spherevar, m) {
  m.doc() = "Point processes on spheres and their cap-count number variance";

  // special functions
  m.def("dim_z", &dim_z, py::arg("d"), py::arg("ell"),
        "Dimension Z(d, ell) of the degree-ell spherical harmonics on S^d");
  m.def("gamma_d", &gamma_d, py::arg("d"));
  m.def("legendre_pd", &legendre_pd, py::arg("d"), py::arg("n"), py::arg("x"),
        "Legendre polynomial for S^d normalised by P_n(1) = 1");
  m.def("kernel_kl", &kernel_kl, py::arg("d"), py::arg("L"), py::arg("x"),
        "Projection kernel onto harmonics of degree <= L (degree sum form)");
  m.def("kernel_kl_jacobi", &kernel_kl_jacobi, py::arg("d"), py::arg("L"), py::arg("x"));

  // cap geometry
  m.def("cap_area", &cap_area, py::arg("d"), py::arg("phi"));
  m.def("laplace_coefficient", &laplace_coefficient, py::arg("d"), py::arg("n"), py::arg("phi"));
  m.def("cap_diff_volume", &cap_diff_volume, py::arg("d"), py::arg("phi"), py::arg("psi"));
  m.def("cap_intersection_volume", &cap_intersection_volume, py::arg("d"), py::arg("phi"),
        py::arg("psi"));
  m.def("g_phi_series", &g_phi_series, py::arg("d"), py::arg("phi"), py::arg("x"),
        py::arg("n_max") = 500);
  m.def("lemma5_upper_bound", &lemma5_upper_bound, py::arg("d"), py::arg("phi"), py::arg("psi"));

  // partition
  py::class_<Cell>(m, "Cell")
      .def_readonly("theta1", &Cell::theta1)
      .def_readonly("theta2", &Cell::theta2)
      .def_readonly("alpha1", &Cell::alpha1)
      .def_readonly("alpha2", &Cell::alpha2)
      .def_readonly("index", &Cell::index)
      .def("area", &Cell::area)
      .def("diameter", &Cell::diameter);

  py::class_<ZonalPartition>(m, "ZonalPartition")
      .def(py::init<int>(), py::arg("n_cells"))
      .def("__len__", &ZonalPartition::size)
      .def("cell", &ZonalPartition::cell, py::return_value_policy::reference_internal)
      .def("max_diameter", &ZonalPartition::max_diameter)
      .def("locate",
           [](const ZonalPartition& p, py::array_t<double> point) {
             auto buf = point.unchecked<1>();
             const double xyz[3] = {buf(0), buf(1), buf(2)};
             return p.locate(xyz);
           })
      .def("sample_in_cell",
           [](const ZonalPartition& p, int index, std::uint64_t seed, int replicate) {
             RandomStream rng(seed, static_cast<std::uint64_t>(replicate), 0);
             py::array_t<double> out(3);
             auto buf = out.mutable_unchecked<1>();
             double xyz[3];
             p.sample_in_cell(index, rng, xyz);
             for (int i = 0; i < 3; ++i) buf(i) = xyz[i];
             return out;
           },
           py::arg("index"), py::arg("seed"), py::arg("replicate") = 0);

  // samplers (seed/replicate keyed, bitwise reproducible)
  m.def(
      "sample",
      [](const std::string& family, int d, int n, int L, std::uint64_t seed, int replicate) {
        const PointSample s = sample_process(make_process_spec(family, d, n, L), seed, replicate);
        return pointset_to_array(s.points);
      },
      py::arg("process"), py::arg("d") = 2, py::arg("n") = 0, py::arg("L") = 0,
      py::arg("seed") = 0, py::arg("replicate") = 0,
      "Draw one sample of the given process; rows are points in R^{d+1}");

  // variance
  py::class_<VarianceReport>(m, "VarianceReport")
      .def_readonly("phi", &VarianceReport::phi)
      .def_readonly("replicates", &VarianceReport::replicates)
      .def_readonly("centers", &VarianceReport::centers)
      .def_readonly("seed", &VarianceReport::seed)
      .def_readonly("v_hat", &VarianceReport::v_hat)
      .def_readonly("std_err", &VarianceReport::std_err)
      .def_readonly("mean_count", &VarianceReport::mean_count)
      .def_readonly("v_semi", &VarianceReport::v_semi)
      .def_readonly("v_ref", &VarianceReport::v_ref);

  m.def(
      "mc_number_variance",
      [](const std::string& family, int d, int n, int L, double phi, int replicates,
         int centers, std::uint64_t seed) {
        return mc_number_variance(make_process_spec(family, d, n, L), phi, replicates,
                                  centers, seed);
      },
      py::arg("process"), py::arg("d") = 2, py::arg("n") = 0, py::arg("L") = 0,
      py::arg("phi") = M_PI / 3, py::arg("replicates") = 100, py::arg("centers") = 1,
      py::arg("seed") = 0);

  m.def("variance_iid_exact", &variance_iid_exact, py::arg("n"), py::arg("phi"),
        py::arg("d") = 2);
  m.def("variance_spherical_semianalytic", &variance_spherical_semianalytic, py::arg("n"),
        py::arg("phi"));
  m.def("variance_harmonic_semianalytic", &variance_harmonic_semianalytic, py::arg("d"),
        py::arg("L"), py::arg("phi"));
  m.def(
      "variance_jittered_semianalytic",
      [](int n_cells, double phi, int pairs_per_cell, std::uint64_t seed) {
        const ZonalPartition partition(n_cells);
        const JitteredSemiResult r =
            variance_jittered_semianalytic(partition, phi, pairs_per_cell, seed);
        return std::make_pair(r.value, r.std_err);
      },
      py::arg("n_cells"), py::arg("phi"), py::arg("pairs_per_cell") = 2000,
      py::arg("seed") = 0, "Returns (value, std_err)");

  m.def("fit_exponent", [](const std::vector<std::pair<double, double>>& pairs) {
    const FitResult f = fit_exponent(pairs);
    return py::make_tuple(f.slope, f.intercept, f.residual, f.r_squared);
  });

  py::class_<RegimeRow>(m, "RegimeRow")
      .def_readonly("param", &RegimeRow::param)
      .def_readonly("n_points", &RegimeRow::n_points)
      .def_readonly("L", &RegimeRow::L)
      .def_readonly("phi", &RegimeRow::phi)
      .def_readonly("v_hat", &RegimeRow::v_hat)
      .def_readonly("std_err", &RegimeRow::std_err)
      .def_readonly("v_semi", &RegimeRow::v_semi);

  py::class_<RegimeResult>(m, "RegimeResult")
      .def_readonly("rows", &RegimeResult::rows)
      .def_readonly("fitted_exponent", &RegimeResult::fitted_exponent)
      .def_readonly("fit_residual", &RegimeResult::fit_residual)
      .def_readonly("r_squared", &RegimeResult::r_squared);

  m.def(
      "regime_experiment",
      [](const std::string& family, const std::string& regime, std::vector<double> grid,
         int d, double phi, double alpha, double c, int threshold_size, int replicates,
         int centers, std::uint64_t seed, int pairs_per_cell) {
        RegimeParams params;
        params.grid = std::move(grid);
        params.d = d;
        params.phi = phi;
        params.small_alpha = alpha;
        params.small_c = c;
        params.threshold_size = threshold_size;
        params.pairs_per_cell = pairs_per_cell;
        return regime_experiment(family_from_name(family), regime_from_name(regime), params,
                                 replicates, centers, seed);
      },
      py::arg("process"), py::arg("regime"), py::arg("grid"), py::arg("d") = 2,
      py::arg("phi") = M_PI / 6, py::arg("alpha") = 0.0, py::arg("c") = 1.0,
      py::arg("threshold_size") = 0, py::arg("replicates") = 0, py::arg("centers") = 1,
      py::arg("seed") = 0, py::arg("pairs_per_cell") = 2000);
}
