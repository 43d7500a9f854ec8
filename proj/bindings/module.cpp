#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tml/parser.hpp"
#include "tml/replay.hpp"
#include "tml/serialize.hpp"
#include "tml/session.hpp"
#include "tml/typecheck.hpp"

namespace py = pybind11;

namespace {

tml::Elaborated elaborate(const std::string& text) {
    return tml::check_expr(tml::TypeEnv{}, tml::parse_expr(text));
}

}  // namespace

PYBIND11_MODULE(_tml, m) {
    m.doc() = "TML tracing interpreter and provenance toolkit";

    py::register_exception<tml::Error>(m, "TmlError");

    py::class_<tml::Session>(m, "Session")
        .def(py::init([](long fuel) {
                 tml::SessionOptions opts;
                 opts.fuel = fuel;
                 return tml::Session(opts);
             }),
             py::arg("fuel") = tml::kDefaultFuel)
        .def("run", &tml::Session::run_line, py::arg("line"),
             "Execute one toplevel command and return its output")
        .def_property_readonly("fuel", &tml::Session::fuel);

    m.def("type_of", [](const std::string& text) {
        return tml::pretty_type(elaborate(text).type);
    });

    m.def("parse_pretty", [](const std::string& text) {
        return tml::pretty_expr(tml::parse_expr(text));
    });

    m.def(
        "eval_expr",
        [](const std::string& text, long fuel) {
            tml::Elaborated el = elaborate(text);
            tml::EvalResult r = tml::eval(tml::Env{}, el.expr, fuel);
            return py::make_tuple(tml::pretty_value(r.value), tml::pretty_trace(r.trace));
        },
        py::arg("text"), py::arg("fuel") = tml::kDefaultFuel,
        "Evaluate a closed expression; returns (value, trace) pretty forms");

    m.def(
        "trace_document",
        [](const std::string& text, long fuel) {
            tml::Elaborated el = elaborate(text);
            tml::EvalResult r = tml::eval(tml::Env{}, el.expr, fuel);
            tml::TraceDocument doc;
            doc.trace = r.trace;
            doc.value = r.value;
            return tml::serialize_document(doc);
        },
        py::arg("text"), py::arg("fuel") = tml::kDefaultFuel,
        "Evaluate a closed expression and return the canonical trace document");

    m.def("reserialize", [](const std::string& bytes) {
        return tml::serialize_document(tml::deserialize_document(bytes));
    });

    m.def("replay_document", [](const std::string& bytes) {
        tml::TraceDocument doc = tml::deserialize_document(bytes);
        tml::ValuePtr v = tml::replay(tml::erase<tml::PathAnn>(doc.env), doc.trace);
        return tml::pretty_value(v);
    });
}
