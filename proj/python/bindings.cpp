#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "wtk/channels.hpp"
#include "wtk/dists.hpp"
#include "wtk/expander.hpp"
#include "wtk/gf.hpp"
#include "wtk/linext.hpp"
#include "wtk/netsim.hpp"
#include "wtk/sfext.hpp"
#include "wtk/wiretap.hpp"

namespace py = pybind11;
using namespace wtk;

namespace {

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(to_string(r));
}

Rational rational(const py::handle& h) { return parse_rational(py::str(h).cast<std::string>()); }

py::object to_py(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

// dicts and lists, or JSON text
nlohmann::json from_py(const py::handle& h) {
  if (py::isinstance<py::str>(h)) return nlohmann::json::parse(h.cast<std::string>());
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(h).cast<std::string>());
}

dists::ExactDist make_dist(unsigned d, std::size_t n, const py::dict& probs, std::uint64_t cap) {
  std::map<std::uint64_t, Rational> m;
  for (auto [k, v] : probs) m[k.cast<std::uint64_t>()] = rational(v);
  return dists::ExactDist(d, n, std::move(m), cap);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact wiretap-protocol toolkit";
  m.attr("DEFAULT_CAP") = kDefaultEnumerationCap;

  static py::exception<Error> error(m, "WtkError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error.ptr())(e.what());
      py::setattr(exc, "code", py::str(std::string(errc_name(e.code()))));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<gf::Field>(m, "Field")
      .def(py::init(&gf::Field::of_order), py::arg("q"))
      .def_property_readonly("order", &gf::Field::order)
      .def_property_readonly("characteristic", &gf::Field::characteristic)
      .def("add", &gf::Field::add)
      .def("sub", &gf::Field::sub)
      .def("neg", &gf::Field::neg)
      .def("mul", &gf::Field::mul)
      .def("inv", &gf::Field::inv)
      .def("div", &gf::Field::div)
      .def("pow", &gf::Field::pow);

  m.def(
      "rank",
      [](unsigned q, const std::vector<std::vector<gf::Elem>>& rows) {
        const auto f = gf::Field::of_order(q);
        gf::Matrix mat(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i)
          for (std::size_t j = 0; j < rows[i].size(); ++j) mat.at(i, j) = rows[i][j];
        return gf::rank(f, mat);
      },
      py::arg("q"), py::arg("rows"));

  py::class_<dists::ExactDist>(m, "Dist")
      .def(py::init(&make_dist), py::arg("d"), py::arg("n"), py::arg("probs"),
           py::arg("cap") = kDefaultEnumerationCap)
      .def_static("uniform", &dists::ExactDist::uniform, py::arg("d"), py::arg("n"),
                  py::arg("cap") = kDefaultEnumerationCap)
      .def_property_readonly("alphabet", &dists::ExactDist::alphabet)
      .def_property_readonly("length", &dists::ExactDist::length)
      .def("prob", [](const dists::ExactDist& a, std::uint64_t i) { return fraction(a.prob(i)); })
      .def("distance_from_uniform", [](const dists::ExactDist& a) { return fraction(dists::distance_from_uniform(a)); })
      .def("min_entropy", [](const dists::ExactDist& a) { return dists::min_entropy(a); })
      .def("shannon_entropy", [](const dists::ExactDist& a) { return dists::shannon_entropy(a); })
      .def("to_json", [](const dists::ExactDist& a) { return to_py(dists::to_json(a)); });
  m.def("statistical_distance", [](const dists::ExactDist& a, const dists::ExactDist& b) {
    return fraction(dists::statistical_distance(a, b));
  });

  py::class_<expander::LabeledGraph>(m, "Graph")
      .def(py::init(&expander::family_graph), py::arg("family"), py::arg("size"))
      .def_property_readonly("vertices", &expander::LabeledGraph::vertices)
      .def_property_readonly("degree", &expander::LabeledGraph::degree)
      .def_property_readonly("family", &expander::LabeledGraph::family)
      .def("step", &expander::LabeledGraph::step)
      .def("walk", [](const expander::LabeledGraph& g, expander::Vertex s, const Word& w) { return expander::walk(g, s, w); })
      .def("walk_inverse",
           [](const expander::LabeledGraph& g, expander::Vertex e, const Word& w) { return expander::walk_inverse(g, e, w); })
      .def("second_eigenvalue", [](const expander::LabeledGraph& g) { return expander::second_eigenvalue(g).lambda; });

  m.def(
      "sfext_error_bound",
      [](std::size_t n, std::size_t mm, std::size_t k, unsigned d, double lambda) {
        return sfext::sfext_error_bound(n, mm, k, d, lambda).value;
      },
      py::arg("n"), py::arg("m"), py::arg("k"), py::arg("d"), py::arg("lambda_"));

  py::class_<sfext::SfextParams>(m, "WalkExtractor")
      .def(py::init([](const expander::LabeledGraph& g, std::size_t n, std::size_t k) {
             return sfext::make_sfext(g, g.degree(), n, k);
           }),
           py::arg("graph"), py::arg("n"), py::arg("k"))
      .def_readonly("n", &sfext::SfextParams::n)
      .def_readonly("m", &sfext::SfextParams::m)
      .def_readonly("lambda_", &sfext::SfextParams::lambda)
      .def_property_readonly("bound", [](const sfext::SfextParams& p) { return p.bound.value; })
      .def_property_readonly("coins", &sfext::sfext_coin_count)
      .def("extract", [](const sfext::SfextParams& p, const Word& in) { return sfext::sfext_extract(p, in); })
      .def("invert", [](const sfext::SfextParams& p, const Word& x, std::uint64_t c) { return sfext::sfext_invert_coin(p, x, c); })
      .def("measured_error", [](const sfext::SfextParams& p) { return fraction(sfext::sfext_measured_error(p, p.k)); });

  py::class_<linext::LinearSeededExtractor>(m, "LinearExtractor")
      .def_static("toeplitz", &linext::toeplitz_family, py::arg("n"), py::arg("m"))
      .def_property_readonly("n", &linext::LinearSeededExtractor::n)
      .def_property_readonly("m", &linext::LinearSeededExtractor::m)
      .def_property_readonly("seed_bits", &linext::LinearSeededExtractor::t)
      .def("extract", &linext::lse_extract, py::arg("x"), py::arg("seed"))
      .def("invert", &linext::lse_invert_coin, py::arg("y"), py::arg("coin"))
      .def_property_readonly("fallback_fraction",
                             [](const linext::LinearSeededExtractor& e) { return fraction(e.fallback_fraction()); });

  py::class_<wiretap::WiretapProtocol>(m, "Protocol")
      .def_readonly("name", &wiretap::WiretapProtocol::name)
      .def_readonly("q", &wiretap::WiretapProtocol::q)
      .def_readonly("m", &wiretap::WiretapProtocol::m)
      .def_readonly("n", &wiretap::WiretapProtocol::n)
      .def_readonly("coins", &wiretap::WiretapProtocol::coins)
      .def_property_readonly("rate", &wiretap::WiretapProtocol::rate)
      .def_property_readonly("declared_t", [](const wiretap::WiretapProtocol& p) { return p.declared.t; })
      .def("encode", [](const wiretap::WiretapProtocol& p, const Word& x, std::uint64_t c) { return wiretap::encode_with_coin(p, x, c); },
           py::arg("x"), py::arg("coin"))
      .def("decode", [](const wiretap::WiretapProtocol& p, const Word& y) { return wiretap::decode(p, y); })
      .def("to_json", [](const wiretap::WiretapProtocol& p) { return to_py(wiretap::params_json(p)); });

  m.def("one_time_pad", &wiretap::one_time_pad);
  m.def(
      "protocol_from_config",
      [](const py::object& cfg, std::uint64_t cap) { return cli::protocol_from_config(from_py(cfg), cap); },
      py::arg("config"), py::arg("cap") = kDefaultEnumerationCap);
  m.def(
      "verify",
      [](const wiretap::WiretapProtocol& p, std::size_t t, const py::object& eps, unsigned jobs, std::uint64_t cap) {
        wiretap::VerifyOptions o;
        o.jobs = jobs;
        o.cap = cap;
        const Rational e = rational(eps);
        wiretap::ResilienceReport r;
        {
          py::gil_scoped_release release;
          r = wiretap::verify_resilience(p, t, e, o);
        }
        return to_py(wiretap::to_json(p, r));
      },
      py::arg("protocol"), py::arg("t"), py::arg("eps") = "0", py::arg("jobs") = 1,
      py::arg("cap") = kDefaultEnumerationCap);

  py::class_<channels::LinearCode>(m, "Code")
      .def_static("hamming74", &channels::hamming74, py::arg("blocks") = 1)
      .def_static("reed_solomon", &channels::reed_solomon, py::arg("q"), py::arg("N"), py::arg("K"))
      .def_readonly("N", &channels::LinearCode::N)
      .def_readonly("K", &channels::LinearCode::K)
      .def_readonly("d_min", &channels::LinearCode::d_min)
      .def_property_readonly("rate", &channels::LinearCode::rate)
      .def("encode", [](const channels::LinearCode& c, const Word& x) { return channels::code_encode(c, x); })
      .def("decode", [](const channels::LinearCode& c, const Word& y) { return channels::code_decode(c, y); });
  m.def("compose", &channels::compose, py::arg("protocol"), py::arg("code"));

  py::class_<netsim::NetworkSpec>(m, "Network")
      .def(py::init(&netsim::named_network), py::arg("name"), py::arg("q") = 2)
      .def_static("from_json", [](const py::object& j) { return netsim::network_from_json(from_py(j)); })
      .def_readonly("vertices", &netsim::NetworkSpec::vertices)
      .def_readonly("edges", &netsim::NetworkSpec::edges)
      .def_readonly("receivers", &netsim::NetworkSpec::receivers)
      .def("min_cut", &netsim::min_cut, py::arg("receiver"))
      .def("to_json", [](const netsim::NetworkSpec& n) { return to_py(netsim::to_json(n)); });

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args, const std::string& stdin_text) {
        std::vector<std::string> argv{"wtk"};
        argv.insert(argv.end(), args.begin(), args.end());
        std::istringstream in(stdin_text);
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(argv, in, out, err);
        }
        return py::make_tuple(code, py::bytes(out.str()), err.str());
      },
      py::arg("args"), py::arg("stdin") = "");
}
