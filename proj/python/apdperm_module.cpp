#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <vector>

#include "apdperm/abelian.hpp"
#include "apdperm/charsum.hpp"
#include "apdperm/constructions.hpp"
#include "apdperm/driver.hpp"
#include "apdperm/errors.hpp"
#include "apdperm/permcore.hpp"
#include "apdperm/search.hpp"
#include "apdperm/version.hpp"

namespace py = pybind11;

namespace {

py::dict report_dict(const apdperm::ApReport& rep) {
    py::list witnesses;
    for (const auto& w : rep.preserved)
        witnesses.append(py::make_tuple(w.a, w.r));
    py::dict d;
    d["n"] = rep.n;
    d["preserved_count"] = rep.preserved_count;
    d["preserved"] = std::move(witnesses);
    d["truncated"] = rep.truncated;
    return d;
}

}  // namespace

PYBIND11_MODULE(_apdperm, m) {
    m.doc() =
        "Permutations of Z/nZ (and small abelian groups) destroying every "
        "arithmetic progression";
    m.attr("__version__") = apdperm::kVersion;

    py::register_exception<apdperm::Unsupported>(m, "UnsupportedError");

    py::class_<apdperm::Perm>(m, "Perm")
        .def(py::init<std::vector<uint32_t>>(), py::arg("image"))
        .def_static("identity", &apdperm::Perm::identity, py::arg("n"))
        .def("__len__", &apdperm::Perm::size)
        .def("__call__",
             [](const apdperm::Perm& pi, std::size_t i) {
                 if (i >= pi.size()) throw py::index_error();
                 return pi(i);
             })
        .def("image", [](const apdperm::Perm& pi) { return pi.image(); })
        .def("__eq__", [](const apdperm::Perm& a, const apdperm::Perm& b) {
            return a == b;
        });

    m.def(
        "generate",
        [](uint64_t n, uint64_t seed, bool verify) {
            apdperm::driver::GenOptions opts;
            opts.seed = seed;
            opts.verify = verify;
            return apdperm::driver::generate(n, opts);
        },
        py::arg("n"), py::arg("seed") = 0, py::arg("verify") = true,
        "Progression-destroying permutation of Z/nZ (n not in {2,3,5,7})");

    m.def(
        "verify", [](const apdperm::Perm& pi) { return report_dict(apdperm::verify(pi)); },
        py::arg("pi"), "Exhaustive progression scan");

    m.def("preserved_count",
          [](const apdperm::Perm& pi, unsigned threads) {
              return apdperm::preserved_count(pi, threads);
          },
          py::arg("pi"), py::arg("threads") = 1);

    m.def("lift", &apdperm::lift, py::arg("sigma_q"), py::arg("sigma_h"),
          "Glue a mod-m map and a block map into one on m*h elements");

    m.def(
        "find_params",
        [](const std::string& case_name, uint64_t p) {
            const apdperm::CaseParams params =
                apdperm::find_params(apdperm::parse_case(case_name), p);
            py::dict d;
            d["p"] = params.p;
            d["t"] = params.t;
            if (params.y) d["y"] = *params.y;
            return d;
        },
        py::arg("case_name"), py::arg("p"),
        "Valid construction parameters for a glued case (2p/3p/5p/7p)");

    m.def("parameter_sum_ids", &apdperm::parameter_sum_ids);
    m.def(
        "check_parameter_sum",
        [](const std::string& sum_id, uint64_t p) {
            const apdperm::ParameterSumCheck row =
                apdperm::check_parameter_sum(sum_id, p);
            py::dict d;
            d["p"] = row.p;
            d["sum_id"] = row.sum_id;
            d["sum"] = row.sum;
            d["bound"] = row.bound;
            d["pass"] = row.pass;
            return d;
        },
        py::arg("sum_id"), py::arg("p"),
        "Character-sum existence check at one prime");

    m.def(
        "descent",
        [](uint64_t n, uint64_t seed) {
            apdperm::DescentConfig cfg;
            cfg.seed = seed;
            const apdperm::DescentOutcome out = apdperm::descent(n, cfg);
            py::dict d;
            d["success"] = out.success;
            d["restarts_used"] = out.restarts_used;
            d["iterations_used"] = out.iterations_used;
            d["preserved_count"] = out.final_preserved_count;
            if (out.perm) d["perm"] = *out.perm;
            return d;
        },
        py::arg("n"), py::arg("seed") = 0,
        "Randomized local search for a destroying permutation");

    m.def(
        "group_generate",
        [](const std::string& group, uint64_t seed) {
            apdperm::GroupGenOptions opts;
            opts.seed = seed;
            return apdperm::group_generate(apdperm::AbelianGroup::parse(group),
                                           opts);
        },
        py::arg("group"), py::arg("seed") = 0,
        "Destroying permutation of a product of cyclic groups, e.g. "
        "\"3 x 3 x 5\"");

    m.def(
        "group_verify",
        [](const std::string& group, const apdperm::Perm& pi) {
            return report_dict(
                apdperm::group_verify(apdperm::AbelianGroup::parse(group), pi));
        },
        py::arg("group"), py::arg("pi"));

    m.def(
        "group_preserved_count",
        [](const std::string& group, const apdperm::Perm& pi) {
            return apdperm::group_preserved_count(
                apdperm::AbelianGroup::parse(group), pi);
        },
        py::arg("group"), py::arg("pi"));

    m.def("to_json", &apdperm::to_json, py::arg("pi"));
    m.def("to_plain", &apdperm::to_plain, py::arg("pi"));
    m.def("from_any", &apdperm::from_any, py::arg("text"));
}
