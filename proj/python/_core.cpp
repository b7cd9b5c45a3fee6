#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracperim/deficit.hpp"
#include "fracperim/error.hpp"
#include "fracperim/experiments.hpp"
#include "fracperim/extension.hpp"
#include "fracperim/grid_geometry.hpp"
#include "fracperim/kernel.hpp"
#include "fracperim/rearrange.hpp"
#include "fracperim/shape.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace fracperim;

namespace {

// Row-major (ny, nx) in 2D, (n,) in 1D.
std::vector<py::ssize_t> array_shape(const GridSpec& spec) {
  if (spec.dim == 1) return {spec.cells[0]};
  return {spec.cells[1], spec.cells[0]};
}

GridSpec spec_for(py::ssize_t ndim, const py::ssize_t* shape, double h, std::array<double, 2> origin) {
  if (ndim == 1) return GridSpec::line(static_cast<int>(shape[0]), h, origin[0]);
  if (ndim == 2) return GridSpec::plane(static_cast<int>(shape[1]), static_cast<int>(shape[0]), h, origin[0], origin[1]);
  throw Error(ErrorCode::InvalidParameter, "arrays must be one- or two-dimensional");
}

GridSet set_from_array(py::array_t<bool, py::array::c_style | py::array::forcecast> occ, double h,
                       std::array<double, 2> origin) {
  const GridSpec spec = spec_for(occ.ndim(), occ.shape(), h, origin);
  std::vector<std::uint8_t> cells(occ.data(), occ.data() + occ.size());
  return GridSet(spec, std::move(cells));
}

GridFunction function_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> values, double h,
                                 std::array<double, 2> origin) {
  const GridSpec spec = spec_for(values.ndim(), values.shape(), h, origin);
  return GridFunction(spec, std::vector<double>(values.data(), values.data() + values.size()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete fractional perimeters, rearrangements and quantitative isoperimetric deficits";

  // Messages start with the error code name, e.g. "empty-set: ...".
  py::register_exception<Error>(m, "FracperimError", PyExc_ValueError);

  py::class_<KernelParams>(m, "KernelParams")
      .def(py::init([](int dim, double s) {
             KernelParams p{dim, s};
             p.validate();
             return p;
           }),
           py::arg("dim") = 2, py::arg("s") = 0.5)
      .def_readonly("dim", &KernelParams::dim)
      .def_readonly("s", &KernelParams::s)
      .def("__repr__", [](const KernelParams& p) {
        return "KernelParams(dim=" + std::to_string(p.dim) + ", s=" + std::to_string(p.s) + ")";
      });

  py::class_<GridSpec>(m, "GridSpec")
      .def_readonly("dim", &GridSpec::dim)
      .def_readonly("cells", &GridSpec::cells)
      .def_readonly("h", &GridSpec::h)
      .def_readonly("origin", &GridSpec::origin);

  py::class_<GridSet>(m, "GridSet")
      .def(py::init(&set_from_array), py::arg("occupancy"), py::arg("h"),
           py::arg("origin") = std::array<double, 2>{0.0, 0.0})
      .def_property_readonly("spec", &GridSet::spec)
      .def_property_readonly("h", [](const GridSet& e) { return e.spec().h; })
      .def("count", &GridSet::count)
      .def("measure", &GridSet::measure)
      .def("to_array", [](const GridSet& e) {
        py::array_t<bool> out(array_shape(e.spec()));
        std::copy(e.occupancy().begin(), e.occupancy().end(), out.mutable_data());
        return out;
      })
      .def("__eq__", [](const GridSet& a, const GridSet& b) { return a == b; });

  py::class_<GridFunction>(m, "GridFunction")
      .def(py::init(&function_from_array), py::arg("values"), py::arg("h"),
           py::arg("origin") = std::array<double, 2>{0.0, 0.0})
      .def_property_readonly("spec", py::overload_cast<>(&GridFunction::spec, py::const_))
      .def("to_array", [](const GridFunction& g) {
        py::array_t<double> out(array_shape(g.spec()));
        std::copy(g.values().begin(), g.values().end(), out.mutable_data());
        return out;
      });

  py::class_<ShapeSpec>(m, "Shape")
      .def_static("parse", &ShapeSpec::parse, py::arg("text"))
      .def_property_readonly("dim", &ShapeSpec::dim)
      .def("contains", &ShapeSpec::contains, py::arg("x"), py::arg("y") = 0.0)
      .def("volume", &ShapeSpec::volume)
      .def("perimeter", &ShapeSpec::perimeter)
      .def("translated", &ShapeSpec::translated, py::arg("dx"), py::arg("dy") = 0.0)
      .def("scaled", &ShapeSpec::scaled, py::arg("factor"))
      .def("normalized_to_unit_ball", &ShapeSpec::normalized_to_unit_ball)
      .def("describe", &ShapeSpec::describe)
      .def("__repr__", [](const ShapeSpec& s) { return "Shape('" + s.describe() + "')"; });

  m.def("rasterize", &rasterize_shape, py::arg("shape"), py::arg("h"), py::arg("margin") = 4,
        "Cell-center rasterization on a grid padded by `margin` cells");

  py::class_<InteractionTable>(m, "InteractionTable")
      .def_property_readonly("params", &InteractionTable::params)
      .def_property_readonly("h", &InteractionTable::h)
      .def_property_readonly("cutoff", &InteractionTable::cutoff)
      .def("value", [](const InteractionTable& t, int dx, int dy) { return t.value({dx, dy}); }, py::arg("dx"),
           py::arg("dy") = 0)
      .def("rescaled", &InteractionTable::rescaled, py::arg("h"));

  m.def(
      "build_table",
      [](const KernelParams& p, double h, int cutoff, const std::string& cache_dir) {
        py::gil_scoped_release release;
        return build_table(p, h, cutoff, TableOptions{cache_dir});
      },
      py::arg("params"), py::arg("h"), py::arg("cutoff") = 16, py::arg("cache_dir") = "");

  m.def(
      "fractional_perimeter",
      [](const GridSet& e, const InteractionTable& t, int margin, int threads) {
        py::gil_scoped_release release;
        return fractional_perimeter(e, t, margin, threads);
      },
      py::arg("set"), py::arg("table"), py::arg("margin") = 4, py::arg("threads") = 1);

  m.def("steiner_symmetrize", &steiner_symmetrize, py::arg("set"), py::arg("axis"));
  m.def("reflect", &reflect, py::arg("set"), py::arg("axis"), py::arg("plane"));

  m.def("symmetric_rearrangement", &symmetric_rearrangement, py::arg("g"));
  m.def("dirichlet_energy", &dirichlet_energy, py::arg("g"));
  m.def("distribution_function", &distribution_function, py::arg("g"), py::arg("t"));

  m.def(
      "extension_energy",
      [](const GridSet& e, const KernelParams& p, bool rearranged) {
        ExtensionEnergy en;
        {
          py::gil_scoped_release release;
          const ExtensionSetup setup = prepare_extension(e);
          const ExtensionField u = poisson_extend(setup.datum, setup.grid, p);
          en = extension_energy(rearranged ? horizontal_rearrange(u) : u);
        }
        return py::make_tuple(en.total, en.x_part, en.z_part);
      },
      py::arg("set"), py::arg("params"), py::arg("rearranged") = false,
      "Weighted Dirichlet energy (total, x_part, z_part) of the Poisson extension");
  m.def("poisson_kernel", &poisson_kernel, py::arg("params"), py::arg("dist"), py::arg("z"));

  py::class_<Asymmetry>(m, "Asymmetry")
      .def_readonly("A", &Asymmetry::A)
      .def_readonly("center", &Asymmetry::center)
      .def_readonly("overlap", &Asymmetry::overlap);
  m.def("fraenkel_asymmetry", [](const GridSet& e) { return fraenkel_asymmetry(e); }, py::arg("set"));
  m.def("equivalent_radius", &equivalent_radius, py::arg("set"));

  py::class_<DeficitReport>(m, "DeficitReport")
      .def_readonly("Ps", &DeficitReport::Ps)
      .def_readonly("r", &DeficitReport::r)
      .def_readonly("PsBall", &DeficitReport::PsBall)
      .def_readonly("Ds", &DeficitReport::Ds)
      .def_readonly("A", &DeficitReport::A)
      .def_readonly("center", &DeficitReport::center)
      .def_readonly("error_budget", &DeficitReport::error_budget)
      .def_readonly("flags", &DeficitReport::flags)
      .def("csv_row", [](const DeficitReport& r) { return deficit_csv_row(r); });
  m.def(
      "s_deficit",
      [](const GridSet& e, const InteractionTable& t, int margin, int threads) {
        py::gil_scoped_release release;
        DeficitOptions o;
        o.margin = margin;
        o.threads = threads;
        return s_deficit(e, t, o);
      },
      py::arg("set"), py::arg("table"), py::arg("margin") = 4, py::arg("threads") = 1);

  m.def("generate_family",
        [](const std::string& name, const std::vector<double>& params, int dim) {
          py::list out;
          for (const auto& member : generate_family(name, params, dim))
            out.append(py::make_tuple(member.id(), member.shape));
          return out;
        },
        py::arg("name"), py::arg("params") = std::vector<double>{}, py::arg("dim") = 2,
        "List of (id, Shape) normalized to the unit-ball volume");
  m.def("family_names", &family_names);
}
