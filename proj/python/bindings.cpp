#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "copekit/certifier.hpp"
#include "copekit/io.hpp"
#include "copekit/theories.hpp"

namespace py = pybind11;
using namespace copekit;

namespace {

py::object fraction(const Rational& x) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(to_string(x));
}

py::object value(const Rational& x) { return fraction(x); }
py::object value(double x) { return py::float_(x); }

template <class T>
py::list rows(const Matrix<T>& m) {
  py::list out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    py::list row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.append(value(m(i, j)));
    out.append(row);
  }
  return out;
}

template <class T>
py::list items(const std::vector<T>& v) {
  py::list out;
  for (const auto& x : v) out.append(value(x));
  return out;
}

// Floats select the float backend; ints, Fractions and "p/q" strings stay exact.
CopeMatrix from_rows(const py::sequence& data, std::vector<std::size_t> block_sizes, double eps) {
  bool any_float = false;
  for (auto row : data)
    for (auto x : py::reinterpret_borrow<py::sequence>(row))
      if (py::isinstance<py::float_>(x)) any_float = true;
  const std::size_t n = py::len(data);
  const std::size_t m = n ? py::len(data[0]) : 0;
  if (any_float) {
    Matrix<double> out(n, m);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = py::reinterpret_borrow<py::sequence>(data[i]);
      if (py::len(row) != m) throw PreconditionError("ragged rows");
      for (std::size_t j = 0; j < m; ++j) out(i, j) = py::float_(row[j]);
    }
    return CopeMatrix(out, std::move(block_sizes), eps);
  }
  Matrix<Rational> out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = py::reinterpret_borrow<py::sequence>(data[i]);
    if (py::len(row) != m) throw PreconditionError("ragged rows");
    for (std::size_t j = 0; j < m; ++j) out(i, j) = parse_rational(py::str(row[j]).cast<std::string>());
  }
  return CopeMatrix(out, std::move(block_sizes));
}

NmfOptions options(std::uint64_t seed, std::size_t restarts, std::optional<std::size_t> max_k) {
  NmfOptions o;
  o.seed = seed;
  o.max_restarts = restarts;
  o.max_inner_dim = max_k;
  return o;
}

py::dict report_dict(const VerificationReport& r) {
  py::dict d;
  d["reconstruction"] = r.reconstruction_ok;
  d["unit"] = r.unit_ok;
  d["nonnegative"] = r.nonnegative_ok;
  d["states_column_stochastic"] = r.states_column_stochastic_ok;
  d["equirank"] = r.equirank_ok;
  d["rank_c"] = r.rank_c;
  d["rank_effects"] = r.rank_effects;
  d["rank_states"] = r.rank_states;
  py::list kinds;
  for (auto k : r.inferred_kinds) kinds.append(std::string(to_string(k)));
  d["kinds"] = kinds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_copekit, m) {
  m.doc() = "COPE matrices, their factorizations and contextuality certificates";

  static py::exception<GuardExceeded> guard_exc(m, "GuardExceeded", PyExc_RuntimeError);
  static py::exception<ParseError> parse_exc(m, "ParseError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const GuardExceeded& e) {
      py::set_error(guard_exc, e.what());
    } catch (const ParseError& e) {
      py::set_error(parse_exc, e.what());
    } catch (const PreconditionError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<CopeMatrix>(m, "CopeMatrix")
      .def(py::init(&from_rows), py::arg("rows"), py::arg("block_sizes"), py::arg("eps") = kDefaultEps)
      .def_property_readonly("num_rows", &CopeMatrix::num_rows)
      .def_property_readonly("num_preparations", &CopeMatrix::num_preparations)
      .def_property_readonly("block_sizes", &CopeMatrix::block_sizes)
      .def_property_readonly("is_exact", &CopeMatrix::is_exact)
      .def_property_readonly("eps", &CopeMatrix::eps)
      .def("rows", [](const CopeMatrix& c) { return c.visit([](const auto& x) { return rows(x); }); })
      .def("as_float", &CopeMatrix::as_float, py::arg("eps") = kDefaultEps)
      .def("to_json", &emit_cope)
      .def_static("from_json", [](const std::string& s) { return parse_cope(s); })
      .def("__eq__", &CopeMatrix::operator==)
      .def("__repr__", [](const CopeMatrix& c) {
        return "<CopeMatrix " + std::to_string(c.num_rows()) + "x" + std::to_string(c.num_preparations()) +
               (c.is_exact() ? " rational>" : " float>");
      });

  py::class_<ModelFactorization>(m, "Model")
      .def_property_readonly("kind", [](const ModelFactorization& f) { return std::string(to_string(f.kind)); })
      .def_property_readonly("inner_dim", &ModelFactorization::inner_dim)
      .def_property_readonly("is_exact", &ModelFactorization::is_exact)
      .def("effects", [](const ModelFactorization& f) { return f.visit([](const auto& x) { return rows(x.effects); }); })
      .def("states", [](const ModelFactorization& f) { return f.visit([](const auto& x) { return rows(x.states); }); })
      .def("unit", [](const ModelFactorization& f) { return f.visit([](const auto& x) { return items(x.unit); }); })
      .def("to_json", &emit_model)
      .def_static("from_json", [](const std::string& s) { return parse_model(s); });

  py::class_<Certificate>(m, "Certificate")
      .def_property_readonly("verdict", [](const Certificate& c) { return std::string(to_string(c.verdict)); })
      .def_property_readonly("evidence_kind", [](const Certificate& c) { return std::string(evidence_kind(c.evidence)); })
      .def_property_readonly("rank", [](const Certificate& c) { return c.rank; })
      .def_property_readonly("searched_k_range",
                             [](const Certificate& c) { return std::make_pair(c.searched_k_first, c.searched_k_last); })
      .def_property_readonly("metadata", [](const Certificate& c) { return c.metadata; })
      .def("verify", &verify_certificate)
      .def("to_json", &emit_certificate)
      .def_static("from_json", [](const std::string& s) { return parse_certificate(s); });

  m.def("spekkens", &spekkens);
  m.def("boxworld", &boxworld);
  m.def("extended_boxworld", &extended_boxworld);
  m.def("identity", &identity_cope, py::arg("n"));
  m.def("reference_models", &reference_models, py::arg("theory"));
  m.def(
      "generic_directions",
      [](std::size_t count, std::uint64_t seed) {
        std::vector<std::tuple<double, double, double>> out;
        for (auto d : generic_directions(count, seed)) out.emplace_back(d.x, d.y, d.z);
        return out;
      },
      py::arg("count"), py::arg("seed") = 20240605);
  m.def(
      "discrete_qubit",
      [](const std::vector<std::tuple<double, double, double>>& dirs, bool antipodes, double eps) {
        std::vector<BlochDirection> v;
        for (auto [x, y, z] : dirs) v.push_back({x, y, z});
        return discrete_qubit(v, antipodes, eps);
      },
      py::arg("directions"), py::arg("include_antipodes") = true, py::arg("eps") = kDefaultEps);

  m.def("rank", py::overload_cast<const CopeMatrix&>(&rank));
  m.def("validate", [](const CopeMatrix& c) {
    std::vector<std::string> out;
    for (const auto& v : validate(c)) out.push_back(v.message);
    return out;
  });
  m.def("quotient", [](const CopeMatrix& c) { return quotient_extremal(c).quotiented; });
  m.def("merge", &merge_measurements);
  m.def(
      "restrict",
      [](const CopeMatrix& c, std::vector<std::size_t> preps, std::vector<std::size_t> meas) {
        return restrict_fragment(c, {std::move(preps), std::move(meas)});
      },
      py::arg("c"), py::arg("preparations"), py::arg("measurements"));

  m.def("pregpt", &pregpt_from_svd);
  m.def("gpt", &gpt);
  m.def(
      "quasi", [](const ModelFactorization& g, std::vector<std::size_t> tom) { return quasi_from_gpt(g, tom); },
      py::arg("gpt_model"), py::arg("tomographic_columns"));
  m.def("trivial", &trivial_ontological);
  m.def(
      "nmf",
      [](const CopeMatrix& c, std::size_t k, std::uint64_t seed, std::size_t restarts) {
        auto o = options(seed, restarts, std::nullopt);
        o.inner_dim = k;
        return nmf(c, o);
      },
      py::arg("c"), py::arg("k"), py::arg("seed") = 1, py::arg("restarts") = 12);
  m.def(
      "enmf", [](const CopeMatrix& c, std::optional<std::size_t> max_k, std::uint64_t seed) {
        return enmf(c, options(seed, 12, max_k));
      },
      py::arg("c"), py::arg("max_k") = py::none(), py::arg("seed") = 1);
  m.def("classify", [](const CopeMatrix& c, const ModelFactorization& f) { return report_dict(classify_model(c, f)); });

  m.def(
      "certify",
      [](const CopeMatrix& c, std::uint64_t seed, std::optional<std::size_t> max_k) {
        py::gil_scoped_release release;
        return certify(c, options(seed, 12, max_k));
      },
      py::arg("c"), py::arg("seed") = 7, py::arg("max_k") = py::none());
  m.def(
      "exhaustive_exists", [](const CopeMatrix& c, std::size_t k) { return exhaustive_enmf_decision(c, k).exists(); },
      py::arg("c"), py::arg("k"));
  m.def("sperner_ontic_bound", &sperner_ontic_bound);
  m.def("sperner_span_bound", &sperner_span_bound);
  m.def("sperner_submatrix", [](const CopeMatrix& c) -> py::object {
    auto w = sperner_submatrix(c);
    if (!w) return py::none();
    py::dict d;
    d["rows"] = w->row_indices;
    d["columns"] = w->col_indices;
    d["m"] = w->m;
    d["ontic_dim_lower_bound"] = w->ontic_dim_lower_bound;
    d["factor_span_lower_bound"] = w->factor_span_lower_bound;
    return d;
  });
}
