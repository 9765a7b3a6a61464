#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graphon/distance.hpp"
#include "graphon/equivariant.hpp"
#include "graphon/error.hpp"
#include "graphon/experiments.hpp"
#include "graphon/homdensity.hpp"
#include "graphon/io.hpp"
#include "graphon/networks.hpp"
#include "graphon/wl.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace graphon;

namespace {

// A plain variant would be claimed by the STL caster.
struct Model {
    std::variant<MpnnModel, IwnModel> inner;
};

SquareMatrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw InvalidArgument("expected a square 2-d array");
    const auto n = static_cast<std::size_t>(a.shape(0));
    return SquareMatrix(n, std::vector<double>(a.data(), a.data() + n * n));
}

py::array_t<double> to_array(const SquareMatrix& m) {
    py::array_t<double> out({m.size(), m.size()});
    std::copy(m.values().begin(), m.values().end(), out.mutable_data());
    return out;
}

CutAlignment alignment_from(const std::string& name) {
    if (name == "exact_perm") return CutAlignment::exact_perm;
    if (name == "local_search") return CutAlignment::local_search;
    throw InvalidArgument("alignment must be 'exact_perm' or 'local_search'");
}

double forward(const Model& model, const StepGraphonSignal& w) {
    return std::visit(
        [&](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, IwnModel>)
                return iwn_forward(w, m);
            else
                return mpnn_forward(w, m).front();
        },
        model.inner);
}

double forward(const Model& model, const GraphSignal& g) {
    return std::visit(
        [&](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, IwnModel>)
                return iwn_forward(g, m);
            else
                return mpnn_forward(g, m).front();
        },
        model.inner);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Step graphon-signals, homomorphism densities, cut norms, k-WL and invariant graphon networks";

    auto base = py::register_exception<Error>(m, "GraphonError", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", base.ptr());

    py::class_<StepGraphonSignal>(m, "StepGraphonSignal")
        .def(py::init([](const py::array_t<double, py::array::c_style | py::array::forcecast>& values,
                         std::optional<std::vector<double>> measures, std::optional<std::vector<double>> signal,
                         double bound) {
                 auto v = to_matrix(values);
                 const std::size_t p = v.size();
                 auto f = signal.value_or(std::vector<double>(p, 1.0));
                 if (!measures) return StepGraphonSignal::uniform(std::move(v), std::move(f), bound);
                 return StepGraphonSignal(std::move(v), std::move(*measures), std::move(f), bound);
             }),
             py::arg("block_values"), py::arg("block_measures") = py::none(), py::arg("signal") = py::none(),
             py::arg("signal_bound") = 1.0)
        .def_property_readonly("blocks", &StepGraphonSignal::blocks)
        .def_property_readonly("block_values", [](const StepGraphonSignal& w) { return to_array(w.block_values()); })
        .def_property_readonly("block_measures", &StepGraphonSignal::block_measures)
        .def_property_readonly("signal", &StepGraphonSignal::signals)
        .def_property_readonly("signal_bound", &StepGraphonSignal::signal_bound)
        .def("permuted", [](const StepGraphonSignal& w, std::vector<std::size_t> perm) { return w.permuted(perm); })
        .def("to_json", [](const StepGraphonSignal& w) { return to_json(w).dump(); })
        .def_static("from_json", [](const std::string& s) { return step_graphon_from_json(Json::parse(s)); })
        .def("__eq__", [](const StepGraphonSignal& a, const StepGraphonSignal& b) { return a == b; })
        .def("__repr__", [](const StepGraphonSignal& w) {
            return "<StepGraphonSignal blocks=" + std::to_string(w.blocks()) + ">";
        });

    py::class_<GraphSignal>(m, "GraphSignal")
        .def(py::init([](std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                         std::optional<std::vector<double>> features) {
                 return GraphSignal(n, edges, features.value_or(std::vector<double>(n, 1.0)));
             }),
             py::arg("n"), py::arg("edges"), py::arg("features") = py::none())
        .def_property_readonly("n", &GraphSignal::n)
        .def_property_readonly("edge_count", &GraphSignal::edge_count)
        .def_property_readonly("features", &GraphSignal::features)
        .def_property_readonly("adjacency", [](const GraphSignal& g) {
            py::array_t<std::uint8_t> out({g.n(), g.n()});
            std::copy(g.adjacency().begin(), g.adjacency().end(), out.mutable_data());
            return out;
        });

    py::class_<Pattern>(m, "Pattern")
        .def(py::init([](std::size_t nodes, const std::vector<std::tuple<std::size_t, std::size_t, unsigned>>& edges,
                         std::optional<std::vector<unsigned>> exponents) {
                 std::vector<PatternEdge> e;
                 for (const auto& [u, v, mult] : edges) e.push_back({u, v, mult});
                 return Pattern(nodes, std::move(e), exponents.value_or(std::vector<unsigned>(nodes, 0)));
             }),
             py::arg("nodes"), py::arg("edges"), py::arg("exponents") = py::none())
        .def_property_readonly("node_count", &Pattern::node_count)
        .def_property_readonly("edge_count", &Pattern::edge_count)
        .def_property_readonly("exponents", &Pattern::exponents)
        .def("__eq__", [](const Pattern& a, const Pattern& b) { return a == b; })
        .def("__repr__", [](const Pattern& p) { return pattern_to_string(p); });

    m.def("pattern_by_name", &pattern_by_name, py::arg("name"));
    m.def("registered_pattern_names", &registered_pattern_names);

    // graphons and sampling
    m.def("build_graphon", [](const std::string& spec) { return build_graphon(GraphonSpec::parse(spec)); },
          py::arg("spec"), "Graphon from a spec such as 'er:0.5', 'sbm:5,0.8,0.3', 'triangular@1000'.");
    m.def("graphon_zoo", [](std::size_t resolution) {
        std::vector<std::string> out;
        for (const auto& s : graphon_zoo(resolution)) out.push_back(s.to_string());
        return out;
    }, py::arg("resolution") = 1000);
    m.def("from_graph", &from_graph, py::arg("graph"));
    m.def("refine", &refine, py::arg("w"), py::arg("m"));
    m.def("sample_simple", &sample_simple, py::arg("w"), py::arg("n"), py::arg("seed"));

    // densities and distances
    m.def("hom_density", &hom_density, py::arg("pattern"), py::arg("w"));
    m.def("t_bruteforce", [](const Pattern& p, const StepGraphonSignal& w) { return t_bruteforce(p, w); },
          py::arg("pattern"), py::arg("w"));
    m.def("treewidth_upper", [](const Pattern& p) { return tree_decompose(p).width(); }, py::arg("pattern"));
    m.def("counting_bound", [](const Pattern& p, const StepGraphonSignal& a, const StepGraphonSignal& b) {
        const auto cb = counting_bound(p, a, b);
        return py::dict("actual"_a = cb.actual, "bound"_a = cb.bound, "graphon_cut"_a = cb.graphon_cut,
                        "signal_cut"_a = cb.signal_cut, "holds"_a = cb.holds);
    }, py::arg("pattern"), py::arg("a"), py::arg("b"));
    m.def("cut_norm", [](const StepGraphonSignal& a, const StepGraphonSignal& b) {
        return cut_norm_exact(graphon_difference(a, b));
    }, py::arg("a"), py::arg("b"), "Exact labeled cut norm of W_a - W_b.");
    m.def("cut_distance_upper", [](const StepGraphonSignal& a, const StepGraphonSignal& b, const std::string& mode,
                                   std::uint64_t seed) {
        CutDistanceOptions opt;
        opt.seed = seed;
        return cut_distance_upper(a, b, alignment_from(mode), opt).value;
    }, py::arg("a"), py::arg("b"), py::arg("alignment") = "local_search", py::arg("seed") = 0);

    // equivariant basis
    m.def("dimension", &dimension, py::arg("k"), py::arg("l"));
    m.def("enumerate_basis", [](std::size_t k, std::size_t l) {
        std::vector<std::string> out;
        for (const auto& g : enumerate_basis(k, l)) out.push_back(g.to_string());
        return out;
    }, py::arg("k"), py::arg("l"));

    // WL
    m.def("wl_colors", [](const StepGraphonSignal& w, std::size_t k, std::optional<std::size_t> rounds) {
        const auto s = wl_refine(w, k, rounds.value_or(kUntilStable));
        return py::dict("rounds"_a = s.round, "stable"_a = s.stable, "colors"_a = s.colors,
                        "color_count"_a = s.color_count());
    }, py::arg("w"), py::arg("k"), py::arg("rounds") = py::none());
    m.def("wl_indistinguishable", [](const StepGraphonSignal& a, const StepGraphonSignal& b, std::size_t k) {
        return indistinguishable(a, b, k);
    }, py::arg("a"), py::arg("b"), py::arg("k"));
    m.def("crosscheck_wl_homomorphisms", [](const StepGraphonSignal& a, const StepGraphonSignal& b, std::size_t k) {
        const auto r = crosscheck_wl_homomorphisms(a, b, k);
        return py::dict("wl_indistinguishable"_a = r.wl_indistinguishable, "patterns_checked"_a = r.patterns_checked,
                        "differing_patterns"_a = r.differing_patterns, "max_difference"_a = r.max_difference,
                        "witness"_a = r.witness, "violations"_a = r.violations);
    }, py::arg("a"), py::arg("b"), py::arg("k"));

    // networks
    py::class_<Model>(m, "Model")
        .def_static("from_json", [](const std::string& s) { return Model{model_from_json(Json::parse(s))}; })
        .def("to_json", [](const Model& model) {
            return std::visit([](const auto& x) { return to_json(x).dump(); }, model.inner);
        })
        .def("__call__", [](const Model& model, const StepGraphonSignal& w) { return forward(model, w); })
        .def("__call__", [](const Model& model, const GraphSignal& g) { return forward(model, g); })
        .def_property_readonly("kind", [](const Model& model) {
            return std::holds_alternative<IwnModel>(model.inner) ? "iwn" : "mpnn";
        });
    m.def("random_iwn", [](const std::vector<std::pair<std::size_t, std::size_t>>& shape, const std::string& act,
                           std::uint64_t seed) {
        std::vector<IwnShape> s;
        for (const auto& [k, d] : shape) s.push_back({k, d});
        return Model{random_iwn(s, activation_from_name(act), seed)};
    }, py::arg("shape"), py::arg("activation") = "sigmoid", py::arg("seed") = 0,
          "shape lists (k, channels) from input to output, e.g. [(2, 2), (2, 16), (0, 1)].");
    m.def("random_mpnn", [](const std::vector<std::size_t>& widths, const std::string& act, std::uint64_t seed) {
        return Model{random_mpnn(widths, activation_from_name(act), seed)};
    }, py::arg("widths"), py::arg("activation") = "sigmoid", py::arg("seed") = 0);

    // experiments
    m.def("run_experiment", [](const std::string& config_json) {
        const auto cfg = config_from_json(Json::parse(config_json), ExperimentConfig{});
        py::gil_scoped_release release;
        const auto t = run_experiment(cfg);
        return std::make_pair(t.rows_csv(), t.summary_csv());
    }, py::arg("config_json"), "Returns (rows_csv, summary_csv).");
    m.def("er_delta1_probe", [](std::size_t n, std::size_t pairs, std::uint64_t seed) {
        const auto s = er_delta1_probe(n, pairs, seed);
        return py::dict("mean"_a = s.mean, "std"_a = s.std, "values"_a = s.values);
    }, py::arg("n"), py::arg("pairs"), py::arg("seed") = 0);
}
