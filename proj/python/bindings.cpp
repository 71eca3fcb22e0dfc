#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regionflow/dartmouth_baseline.hpp"
#include "regionflow/error.hpp"
#include "regionflow/io.hpp"
#include "regionflow/partition_compare.hpp"
#include "regionflow/region_metrics.hpp"
#include "regionflow/scale_selector.hpp"
#include "regionflow/synth.hpp"

namespace py = pybind11;
using namespace regionflow;

namespace {

using RecordTuple = std::tuple<std::string, std::string, std::int64_t, std::string>;

ServiceClass service_of(const std::string& code) {
    auto s = parse_service_code(code);
    if (!s) throw InputError("malformed_record", "service class must be G or S, got '" + code + "'");
    return *s;
}

std::vector<FlowRecord> records_of(const std::vector<RecordTuple>& rows) {
    std::vector<FlowRecord> out;
    out.reserve(rows.size());
    for (const auto& [zone, hospital, count, service] : rows) out.push_back({zone, hospital, count, service_of(service)});
    return out;
}

py::dict stats_dict(const IngestStats& s) {
    py::dict d;
    const auto doc = io::stats_json(s);
    for (const auto& [k, v] : doc.items()) d[py::str(k)] = v.get<std::int64_t>();
    return d;
}

py::object json_to_py(const io::json& doc) {
    return py::module_::import("json").attr("loads")(doc.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Flow-based region delineation: Louvain detection, scale cuts, plurality baseline, metrics.";

    static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InputError& e) {
            PyErr_SetObject(input_error.ptr(), py::make_tuple(e.code(), e.what()).ptr());
        }
    });

    py::class_<HospitalRoster>(m, "HospitalRoster")
        .def(py::init([](const std::vector<std::tuple<std::string, std::string, bool>>& rows) {
                 std::vector<Hospital> hs;
                 for (const auto& [id, zone, general] : rows) hs.push_back({id, zone, general, 0});
                 return HospitalRoster(std::move(hs));
             }),
             py::arg("hospitals"), "From (hospital_id, home_zone, is_general) tuples.")
        .def("__len__", &HospitalRoster::size)
        .def("home_zone", [](const HospitalRoster& r, const std::string& id) -> std::optional<std::string> {
            const Hospital* h = r.find(id);
            return h ? std::optional(h->home_zone) : std::nullopt;
        });

    py::class_<FlowTable>(m, "FlowTable")
        .def_property_readonly("stats", [](const FlowTable& t) { return stats_dict(t.stats()); })
        .def_property_readonly("zones", [](const FlowTable& t) {
            return std::vector<std::string>(t.zones().begin(), t.zones().end());
        })
        .def_property_readonly("total_count", &FlowTable::total_count)
        .def("__len__", [](const FlowTable& t) { return t.rows().size(); })
        .def("rows", [](const FlowTable& t) {
            std::vector<std::tuple<std::string, std::string, std::string, std::string, std::int64_t>> out;
            for (const auto& e : t.entries())
                out.emplace_back(e.patient_zone, e.hospital_zone, e.hospital, std::string(1, service_code(e.service)),
                                 e.count);
            return out;
        }, "(patient_zone, hospital_zone, hospital_id, service_class, count) tuples.");

    py::class_<FlowNetwork>(m, "FlowNetwork")
        .def(py::init([](std::vector<std::string> ids,
                         const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& edges) {
                 std::vector<WeightedEdge> we;
                 for (const auto& [u, v, w] : edges) we.push_back({u, v, w});
                 return FlowNetwork(std::move(ids), we);
             }),
             py::arg("node_ids"), py::arg("edges"))
        .def("__len__", &FlowNetwork::size)
        .def_property_readonly("node_ids", [](const FlowNetwork& n) {
            return std::vector<std::string>(n.node_ids().begin(), n.node_ids().end());
        })
        .def_property_readonly("total_weight", &FlowNetwork::total_weight)
        .def("degree", &FlowNetwork::degree)
        .def("weight", &FlowNetwork::weight)
        .def("edges", [](const FlowNetwork& n) {
            std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> out;
            for (const auto& e : n.edges()) out.emplace_back(e.u, e.v, e.weight);
            return out;
        });

    py::class_<Dendrogram>(m, "Dendrogram")
        .def_readonly("zones", &Dendrogram::zones)
        .def_readonly("singleton_modularity", &Dendrogram::singleton_modularity)
        .def("__len__", &Dendrogram::level_count)
        .def("levels", [](const Dendrogram& d) {
            py::list out;
            for (const auto& l : d.levels) {
                py::dict level;
                level["community_count"] = l.zone_partition.community_count();
                level["modularity"] = l.modularity;
                ZonePartition zp;
                for (std::size_t i = 0; i < d.zones.size(); ++i) zp[d.zones[i]] = l.zone_partition[i];
                level["partition"] = zp;
                out.append(level);
            }
            return out;
        })
        .def("to_json", [](const Dendrogram& d) { return json_to_py(io::dendrogram_json(d)); });

    m.def("ingest",
          [](const std::vector<RecordTuple>& rows, const HospitalRoster& roster, bool specialized,
             bool general_only, bool require_match) {
              FilterPolicy policy;
              policy.general_hospitals_only = general_only;
              policy.require_roster_match = require_match;
              auto table = ingest_flows(records_of(rows), roster, policy);
              return specialized ? filter_specialized(table) : table;
          },
          py::arg("records"), py::arg("roster"), py::arg("specialized") = false, py::arg("general_only") = true,
          py::arg("require_roster_match") = true,
          "Aggregate (patient_zone, hospital_id, count, service_class) records into a FlowTable.");
    m.def("read_flows",
          [](const std::string& path, const HospitalRoster& roster) {
              return io::read_flows_csv(path, roster, FilterPolicy{});
          },
          py::arg("path"), py::arg("roster"));
    m.def("read_roster", &io::read_roster_csv, py::arg("path"));
    m.def("read_partition", &io::read_partition_csv, py::arg("path"));

    m.def("build_network", &build_network, py::arg("table"), py::arg("roster"));
    m.def("modularity",
          [](const FlowNetwork& net, const ZonePartition& p) { return modularity(net, to_node_partition(net, p)); },
          py::arg("network"), py::arg("partition"));

    m.def("run_louvain",
          [](const FlowNetwork& net, const std::string& order, std::optional<std::uint64_t> seed, double min_gain,
             std::optional<std::size_t> max_levels) {
              LouvainOptions o;
              if (order == "shuffle") {
                  o.order = NodeOrder::seeded_shuffle;
              } else if (order != "sorted") {
                  throw InputError("config_error", "order must be 'sorted' or 'shuffle'");
              }
              o.seed = seed;
              o.min_gain = min_gain;
              o.max_levels = max_levels;
              return run_louvain(net, o);
          },
          py::arg("network"), py::arg("order") = "sorted", py::arg("seed") = py::none(), py::arg("min_gain") = 1e-9,
          py::arg("max_levels") = py::none());

    m.def("cut_to_k",
          [](const FlowNetwork& net, const Dendrogram& d, std::size_t k) {
              auto c = cut_to_k(net, d, k);
              py::dict out;
              out["k"] = c.k;
              out["modularity"] = c.modularity;
              out["provenance"] = to_string(c.provenance);
              out["partition"] = to_zone_partition(net, c.partition);
              return out;
          },
          py::arg("network"), py::arg("dendrogram"), py::arg("k"));
    m.def("modularity_curve",
          [](const FlowNetwork& net, const Dendrogram& d, std::size_t k_min, std::size_t k_max) {
              auto c = modularity_curve(net, d, k_min, k_max);
              std::vector<std::pair<std::size_t, double>> points;
              for (const auto& p : c.points) points.emplace_back(p.k, p.modularity);
              py::dict out;
              out["points"] = points;
              out["best_k"] = c.best_k;
              out["best_modularity"] = c.best_modularity;
              return out;
          },
          py::arg("network"), py::arg("dendrogram"), py::arg("k_min"), py::arg("k_max"));

    m.def("plurality_assign",
          [](const FlowTable& t, const HospitalRoster& r) {
              auto res = plurality_assign(t, r);
              py::dict out;
              out["partition"] = res.assignment;
              out["seeds"] = res.seeds;
              out["tied_zones"] = res.tied_zones;
              out["no_flow_zones"] = res.no_flow_zones;
              return out;
          },
          py::arg("table"), py::arg("roster"));
    m.def("enforce_contiguity",
          [](const ZonePartition& p, const std::vector<std::pair<std::string, std::string>>& adjacency,
             const FlowTable& t) {
              auto res = enforce_contiguity(p, make_adjacency(adjacency), t);
              std::vector<std::tuple<std::string, int, int>> moves;
              for (const auto& mv : res.moves) moves.emplace_back(mv.zone, mv.from, mv.to);
              py::dict out;
              out["partition"] = res.assignment;
              out["islands"] = res.islands;
              out["stranded"] = res.stranded;
              out["moves"] = moves;
              return out;
          },
          py::arg("partition"), py::arg("adjacency"), py::arg("table"));

    m.def("evaluate",
          [](const FlowTable& t, const ZonePartition& p, const HospitalRoster& r) {
              return json_to_py(io::report_json(evaluate(t, p, r)));
          },
          py::arg("table"), py::arg("partition"), py::arg("roster"), "Evaluation report as a dict.");

    m.def("generate_planted",
          [](std::size_t regions, std::size_t zones_per_region, double mean_flow, double leakage,
             std::size_t hospitals_per_region, std::uint64_t seed) {
              PlantedSpec spec{regions, zones_per_region, mean_flow, leakage, hospitals_per_region, seed};
              auto data = generate_planted(spec);
              std::vector<RecordTuple> flows;
              for (const auto& f : data.flows)
                  flows.emplace_back(f.patient_zone, f.hospital, f.count, std::string(1, service_code(f.service)));
              std::vector<std::tuple<std::string, std::string, bool>> roster;
              for (const auto& h : data.roster.hospitals()) roster.emplace_back(h.id, h.home_zone, h.is_general);
              py::dict out;
              out["flows"] = flows;
              out["roster"] = roster;
              out["truth"] = data.truth;
              out["adjacency"] = data.adjacency;
              return out;
          },
          py::arg("regions") = 5, py::arg("zones_per_region") = 10, py::arg("mean_flow") = 40.0,
          py::arg("leakage") = 0.1, py::arg("hospitals_per_region") = 1, py::arg("seed") = 0);

    m.def("adjusted_rand_index",
          [](const ZonePartition& a, const ZonePartition& b) { return adjusted_rand_index(a, b); }, py::arg("a"),
          py::arg("b"));

    m.attr("__version__") = "0.1.0";
}
