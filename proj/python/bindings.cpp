#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsep/chsh.hpp"
#include "qsep/cli.hpp"
#include "qsep/collective.hpp"
#include "qsep/optimizer.hpp"
#include "qsep/separability.hpp"
#include "qsep/states.hpp"

namespace py = pybind11;
using namespace qsep;

namespace {

using ComplexArray = py::array_t<std::complex<double>>;

ComplexMatrix matrix_from_array(const ComplexArray& arr) {
    const auto buf = arr.unchecked<2>();
    if (buf.shape(0) != buf.shape(1)) {
        throw std::invalid_argument("expected a square matrix");
    }
    ComplexMatrix m(static_cast<std::size_t>(buf.shape(0)));
    for (py::ssize_t r = 0; r < buf.shape(0); ++r) {
        for (py::ssize_t c = 0; c < buf.shape(1); ++c) {
            m(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = buf(r, c);
        }
    }
    return m;
}

ComplexArray array_from_matrix(const ComplexMatrix& m) {
    const py::ssize_t n = static_cast<py::ssize_t>(m.dim());
    ComplexArray arr({n, n});
    auto buf = arr.mutable_unchecked<2>();
    for (py::ssize_t r = 0; r < n; ++r) {
        for (py::ssize_t c = 0; c < n; ++c) {
            buf(r, c) = m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
    }
    return arr;
}

std::vector<cplx> vector_from_array(const ComplexArray& arr) {
    const auto buf = arr.unchecked<1>();
    std::vector<cplx> v(static_cast<std::size_t>(buf.shape(0)));
    for (py::ssize_t i = 0; i < buf.shape(0); ++i) {
        v[static_cast<std::size_t>(i)] = buf(i);
    }
    return v;
}

ComplexArray array_from_vector(const std::vector<cplx>& v) {
    ComplexArray arr(static_cast<py::ssize_t>(v.size()));
    auto buf = arr.mutable_unchecked<1>();
    for (py::ssize_t i = 0; i < static_cast<py::ssize_t>(v.size()); ++i) {
        buf(i) = v[static_cast<std::size_t>(i)];
    }
    return arr;
}

std::array<double, 3> vec3(const std::vector<double>& v, const char* name) {
    if (v.size() != 3) {
        throw std::invalid_argument(std::string(name) + " must have 3 components");
    }
    return {v[0], v[1], v[2]};
}

} // namespace

PYBIND11_MODULE(_qsep, m) {
    m.doc() = "partial-transpose separability tests, CHSH maxima and collective "
              "postselection for two-qubit states";
    m.attr("__version__") = kVersion;

    py::class_<BipartiteDensity>(m, "BipartiteDensity")
        .def(py::init([](const ComplexArray& mat, std::size_t dim_a, std::size_t dim_b) {
                 return BipartiteDensity(matrix_from_array(mat), dim_a, dim_b);
             }),
             py::arg("matrix"), py::arg("dim_a"), py::arg("dim_b"))
        .def_property_readonly("matrix",
                               [](const BipartiteDensity& rho) {
                                   return array_from_matrix(rho.matrix());
                               })
        .def_property_readonly("dim_a", &BipartiteDensity::dim_a)
        .def_property_readonly("dim_b", &BipartiteDensity::dim_b)
        .def("__repr__", [](const BipartiteDensity& rho) {
            return "<BipartiteDensity " + std::to_string(rho.dim_a()) + "x" +
                   std::to_string(rho.dim_b()) + ">";
        });

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("hermiticity_defect", &ValidationReport::hermiticity_defect)
        .def_readonly("trace_defect", &ValidationReport::trace_defect)
        .def_readonly("min_eigenvalue", &ValidationReport::min_eigenvalue)
        .def_readonly("dims_consistent", &ValidationReport::dims_consistent)
        .def_readonly("ok", &ValidationReport::ok);

    py::class_<PptVerdict>(m, "PptVerdict")
        .def_readonly("min_eigenvalue", &PptVerdict::min_eigenvalue)
        .def_readonly("is_ppt", &PptVerdict::is_ppt)
        .def_readonly("tol", &PptVerdict::tol)
        .def_property_readonly("spectrum",
                               [](const PptVerdict& v) { return v.spectrum.values; })
        .def_property_readonly("residual",
                               [](const PptVerdict& v) { return v.spectrum.residual; });

    py::class_<LocalRows>(m, "LocalRows")
        .def(py::init([](std::size_t pairs, const ComplexArray& u0, const ComplexArray& u1) {
                 return LocalRows(pairs, vector_from_array(u0), vector_from_array(u1));
             }),
             py::arg("pairs"), py::arg("u0"), py::arg("u1"))
        .def_property_readonly("pairs", &LocalRows::pairs)
        .def_property_readonly("u0",
                               [](const LocalRows& r) { return array_from_vector(r.u0()); })
        .def_property_readonly("u1",
                               [](const LocalRows& r) { return array_from_vector(r.u1()); });

    py::class_<PostselectionOutcome>(m, "PostselectionOutcome")
        .def_readonly("rho_new", &PostselectionOutcome::rho_new)
        .def_readonly("success_probability", &PostselectionOutcome::success_probability);

    py::enum_<VMode>(m, "VMode")
        .value("mirrored", VMode::mirrored)
        .value("independent", VMode::independent);

    py::enum_<StartSet>(m, "StartSet")
        .value("random", StartSet::random)
        .value("random_plus_xor", StartSet::random_plus_xor);

    py::class_<OptimizerConfig>(m, "OptimizerConfig")
        .def(py::init<>())
        .def_readwrite("restarts", &OptimizerConfig::restarts)
        .def_readwrite("max_iters", &OptimizerConfig::max_iters)
        .def_readwrite("step_tol", &OptimizerConfig::step_tol)
        .def_readwrite("objective_tol", &OptimizerConfig::objective_tol)
        .def_readwrite("gradient_step", &OptimizerConfig::gradient_step)
        .def_readwrite("seed", &OptimizerConfig::seed)
        .def_readwrite("mode", &OptimizerConfig::mode)
        .def_readwrite("start_set", &OptimizerConfig::start_set)
        .def_readwrite("threads", &OptimizerConfig::threads);

    py::class_<RestartResult>(m, "RestartResult")
        .def_readonly("start_id", &RestartResult::start_id)
        .def_readonly("value", &RestartResult::value)
        .def_readonly("iterations", &RestartResult::iterations);

    py::class_<OptimizerReport>(m, "OptimizerReport")
        .def_readonly("best_value", &OptimizerReport::best_value)
        .def_readonly("best_rows", &OptimizerReport::best_rows)
        .def_readonly("best_rows_v", &OptimizerReport::best_rows_v)
        .def_readonly("per_restart", &OptimizerReport::per_restart)
        .def_readonly("xor_value", &OptimizerReport::xor_value)
        .def_readonly("used_xor_start", &OptimizerReport::used_xor_start);

    py::class_<ScanPoint>(m, "ScanPoint")
        .def_readonly("x", &ScanPoint::x)
        .def_readonly("best_value", &ScanPoint::best_value)
        .def_readonly("xor_value", &ScanPoint::xor_value)
        .def_readonly("success_probability", &ScanPoint::success_probability);

    // state constructors
    m.def("singlet", &singlet);
    m.def("werner", &werner, py::arg("x"));
    m.def("gisin_family", &gisin_family, py::arg("a"), py::arg("b"), py::arg("x"));
    m.def("singlet_plus_polarized", &singlet_plus_polarized, py::arg("x"));
    m.def(
        "density_from_matrix",
        [](const ComplexArray& mat, std::size_t dim_a, std::size_t dim_b) {
            return BipartiteDensity(matrix_from_array(mat), dim_a, dim_b);
        },
        py::arg("matrix"), py::arg("dim_a"), py::arg("dim_b"));
    m.def(
        "from_ensemble",
        [](const std::vector<std::tuple<double, ComplexArray, ComplexArray>>& terms) {
            std::vector<ProductTerm> converted;
            converted.reserve(terms.size());
            for (const auto& [w, left, right] : terms) {
                converted.push_back(
                    ProductTerm{w, matrix_from_array(left), matrix_from_array(right)});
            }
            return from_ensemble(ProductEnsemble(std::move(converted)));
        },
        py::arg("terms"), "terms: list of (weight, left, right) product factors");
    m.def(
        "validate",
        [](const ComplexArray& mat, std::size_t dim_a, std::size_t dim_b) {
            return validate(matrix_from_array(mat), dim_a, dim_b);
        },
        py::arg("matrix"), py::arg("dim_a"), py::arg("dim_b"));

    // matrix kernel
    m.def(
        "hermitian_eigenvalues",
        [](const ComplexArray& mat, double tol) {
            const Spectrum s = hermitian_eigenvalues(matrix_from_array(mat), tol);
            return py::make_tuple(s.values, s.residual);
        },
        py::arg("matrix"), py::arg("tol") = kDefaultEigTol,
        "returns (ascending eigenvalues, final off-diagonal residual)");
    m.def(
        "kron",
        [](const ComplexArray& a, const ComplexArray& b) {
            return array_from_matrix(kron(matrix_from_array(a), matrix_from_array(b)));
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "regroup_pairs_to_parties",
        [](const ComplexArray& mat, std::size_t pairs) {
            return array_from_matrix(regroup_pairs_to_parties(matrix_from_array(mat), pairs));
        },
        py::arg("matrix"), py::arg("pairs"));

    // separability
    m.def("partial_transpose",
          [](const BipartiteDensity& rho) { return array_from_matrix(partial_transpose(rho)); });
    m.def("ppt_check", &ppt_check, py::arg("rho"), py::arg("tol") = kDefaultPptTol);
    m.def(
        "local_unitary_conjugate",
        [](const BipartiteDensity& rho, const ComplexArray& ua, const ComplexArray& ub) {
            return local_unitary_conjugate(rho, matrix_from_array(ua), matrix_from_array(ub));
        },
        py::arg("rho"), py::arg("u_a"), py::arg("u_b"));
    m.def("gisin_ppt_threshold", &gisin_ppt_threshold, py::arg("a"), py::arg("b"));

    // chsh
    m.def("t_matrix", [](const BipartiteDensity& rho) {
        const CorrelationMatrix t = t_matrix(rho);
        py::array_t<double> arr({3, 3});
        auto buf = arr.mutable_unchecked<2>();
        for (int p = 0; p < 3; ++p) {
            for (int q = 0; q < 3; ++q) {
                buf(p, q) = t.t[p][q];
            }
        }
        return arr;
    });
    m.def("chsh_max",
          static_cast<double (*)(const BipartiteDensity&)>(&chsh_max), py::arg("rho"));
    m.def(
        "bell_expectation",
        [](const BipartiteDensity& rho, const std::vector<double>& a,
           const std::vector<double>& a_prime, const std::vector<double>& b,
           const std::vector<double>& b_prime) {
            return bell_expectation(rho, ChshSettings{vec3(a, "a"), vec3(a_prime, "a_prime"),
                                                      vec3(b, "b"), vec3(b_prime, "b_prime")});
        },
        py::arg("rho"), py::arg("a"), py::arg("a_prime"), py::arg("b"), py::arg("b_prime"));
    m.def(
        "brute_force_chsh",
        [](const BipartiteDensity& rho, int restarts, double tol, std::uint64_t seed) {
            const ChshSearchResult res = brute_force_chsh(rho, restarts, tol, seed);
            py::array_t<double> settings({4, 3});
            auto buf = settings.mutable_unchecked<2>();
            const std::array<double, 3>* rows[4] = {&res.settings.a, &res.settings.a_prime,
                                                    &res.settings.b, &res.settings.b_prime};
            for (int r = 0; r < 4; ++r) {
                for (int c = 0; c < 3; ++c) {
                    buf(r, c) = (*rows[r])[c];
                }
            }
            return py::make_tuple(res.value, settings);
        },
        py::arg("rho"), py::arg("restarts") = 32, py::arg("tol") = 1e-12, py::arg("seed") = 1,
        "returns (value, settings rows a, a', b, b')");
    m.def("gisin_filter_threshold", &gisin_filter_threshold, py::arg("a"), py::arg("b"));

    // collective
    m.def("xor_rows", &xor_rows, py::arg("pairs"));
    m.def("mirror_rows", &mirror_rows, py::arg("u"));
    m.def("basis_flip_rows", &basis_flip_rows, py::arg("v"));
    m.def(
        "pair_power",
        [](const BipartiteDensity& rho, std::size_t pairs) {
            return array_from_matrix(pair_power(rho, pairs));
        },
        py::arg("rho"), py::arg("pairs"));
    m.def("postselect", &postselect, py::arg("rho"), py::arg("pairs"), py::arg("u"),
          py::arg("v"));

    // optimizer
    m.def("objective",
          static_cast<double (*)(double, std::size_t, const LocalRows&)>(&objective),
          py::arg("x"), py::arg("pairs"), py::arg("u"));
    m.def("objective",
          static_cast<double (*)(double, std::size_t, const LocalRows&, const LocalRows&)>(
              &objective),
          py::arg("x"), py::arg("pairs"), py::arg("u"), py::arg("v"));
    m.def("optimize", &optimize, py::arg("x"), py::arg("pairs"),
          py::arg("config") = OptimizerConfig{});
    m.def("scan_curve", &scan_curve, py::arg("pairs"), py::arg("x_grid"),
          py::arg("config") = OptimizerConfig{});
    m.def("detect_transition", &detect_transition, py::arg("curve"),
          py::arg("margin") = 1e-4);
}
