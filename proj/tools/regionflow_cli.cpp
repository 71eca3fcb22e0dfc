// regionflow command-line interface.
//
// Subcommands: detect, cut, curve, baseline, evaluate, synth.
// Exit codes: 0 success, 2 input/configuration error, 1 internal error.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "regionflow/dartmouth_baseline.hpp"
#include "regionflow/error.hpp"
#include "regionflow/flow_ingest.hpp"
#include "regionflow/geometry.hpp"
#include "regionflow/io.hpp"
#include "regionflow/louvain.hpp"
#include "regionflow/network.hpp"
#include "regionflow/region_metrics.hpp"
#include "regionflow/scale_selector.hpp"
#include "regionflow/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace regionflow;

namespace {

constexpr const char* kVersion = "0.1.0";

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

LogLevel log_level() {
    const char* env = std::getenv("REGIONFLOW_LOG");
    if (!env) return LogLevel::warn;
    const std::string v(env);
    if (v == "error") return LogLevel::error;
    if (v == "info") return LogLevel::info;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::warn;
}

void log(LogLevel level, const std::string& msg) {
    static const LogLevel threshold = log_level();
    static const char* names[] = {"error", "warn", "info", "debug"};
    if (level <= threshold) std::cerr << "[regionflow " << names[static_cast<int>(level)] << "] " << msg << '\n';
}

// FNV-1a, 64-bit. Used only for reproducibility fingerprints.
struct Fnv64 {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void add(std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0xff;
        h *= 0x100000001b3ULL;
    }
    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }
};

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("missing_file", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    Fnv64 f;
    f.add(ss.str());
    return f.hex();
}

struct RunConfig {
    std::string command;
    std::string flows, roster, attrs, geoms, adjacency, dendrogram;
    std::vector<std::string> partitions;
    std::optional<std::size_t> k, k_min, k_max;
    std::uint64_t seed = 0;
    std::string order = "sorted";
    bool specialized = false;
    bool include_non_general = false;
    bool keep_unmatched = false;
    double min_gain = 1e-9;
    std::optional<std::size_t> max_levels;
    std::string out = ".";
    std::string format;  // empty: both

    PlantedSpec synth;

    bool want_csv() const { return format.empty() || format == "csv"; }
    bool want_json() const { return format.empty() || format == "json"; }

    /// Hash over the command, every option value, and the content of every
    /// input file. Output location does not participate.
    std::string config_hash() const {
        Fnv64 f;
        auto opt = [&](const std::string& key, const std::string& value) {
            f.add(key);
            f.add(value);
        };
        auto input = [&](const std::string& key, const std::string& path) {
            opt(key, path.empty() ? "-" : file_digest(path));
        };
        opt("command", command);
        input("flows", flows);
        input("roster", roster);
        input("attrs", attrs);
        input("geoms", geoms);
        input("adjacency", adjacency);
        input("dendrogram", dendrogram);
        for (const auto& p : partitions) input("partition", p);
        auto num = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("-"); };
        opt("k", num(k));
        opt("k_min", num(k_min));
        opt("k_max", num(k_max));
        opt("seed", std::to_string(seed));
        opt("order", order);
        opt("specialized", specialized ? "1" : "0");
        opt("include_non_general", include_non_general ? "1" : "0");
        opt("keep_unmatched", keep_unmatched ? "1" : "0");
        opt("min_gain", io::format_double(min_gain));
        opt("max_levels", num(max_levels));
        opt("format", format);
        if (command == "synth") {
            opt("regions", std::to_string(synth.regions));
            opt("zones_per_region", std::to_string(synth.zones_per_region));
            opt("lambda", io::format_double(synth.mean_flow));
            opt("leakage", io::format_double(synth.leakage));
            opt("hospitals_per_region", std::to_string(synth.hospitals_per_region));
        }
        return f.hex();
    }
};

/// Collects artifacts of one run and writes the run.json manifest.
class Artifacts {
public:
    Artifacts(const RunConfig& cfg) : cfg_(cfg), dir_(cfg.out), hash_(cfg.config_hash()) {
        fs::create_directories(dir_);
    }

    json run_info() const {
        return {{"command", cfg_.command}, {"seed", cfg_.seed}, {"config_hash", hash_}, {"version", kVersion}};
    }

    void text(const std::string& name, const std::string& content) {
        io::write_file(dir_ / name, content);
        Fnv64 f;
        f.add(content);
        files_[name] = f.hex();
        log(LogLevel::info, "wrote " + (dir_ / name).string());
    }

    void json_doc(const std::string& name, json doc) {
        doc["run"] = run_info();
        text(name, doc.dump(2) + "\n");
    }

    void finish() {
        json manifest = run_info();
        manifest["artifacts"] = files_;
        io::write_json(dir_ / "run.json", manifest);
    }

private:
    const RunConfig& cfg_;
    fs::path dir_;
    std::string hash_;
    std::map<std::string, std::string> files_;
};

void require(const std::string& value, const char* flag, const char* command) {
    if (value.empty())
        throw InputError("missing_argument", std::string(command) + " requires " + flag);
}

struct Inputs {
    HospitalRoster roster;
    std::optional<ZoneAttributes> attrs;
    FlowTable table;
};

Inputs load_flows(const RunConfig& cfg) {
    require(cfg.flows, "--flows", cfg.command.c_str());
    require(cfg.roster, "--roster", cfg.command.c_str());
    Inputs in;
    in.roster = io::read_roster_csv(cfg.roster);
    if (!cfg.attrs.empty()) {
        in.attrs = io::read_attributes_csv(cfg.attrs);
        in.roster.validate_against(*in.attrs);
    }
    FilterPolicy policy;
    policy.general_hospitals_only = !cfg.include_non_general;
    policy.require_roster_match = !cfg.keep_unmatched;
    in.table = io::read_flows_csv(cfg.flows, in.roster, policy, in.attrs ? &*in.attrs : nullptr);
    const auto& s = in.table.stats();
    if (s.records_total == 0) throw InputError("empty_input", "'" + cfg.flows + "' contains no flow records");
    log(LogLevel::info, "ingested " + std::to_string(s.records_total) + " records, retained " +
                            std::to_string(s.records_retained));
    if (cfg.specialized) in.table = filter_specialized(in.table);
    if (in.table.empty()) throw InputError("empty_input", "no flow records remain after filtering");
    return in;
}

LouvainOptions louvain_options(const RunConfig& cfg) {
    LouvainOptions o;
    if (cfg.order == "shuffle") {
        o.order = NodeOrder::seeded_shuffle;
        o.seed = cfg.seed;
    }
    o.min_gain = cfg.min_gain;
    o.max_levels = cfg.max_levels;
    return o;
}

/// Dendrogram levels as zone-network partitions: loaded from --dendrogram when
/// given, otherwise recomputed.
std::vector<Partition> dendrogram_levels(const RunConfig& cfg, const FlowNetwork& net) {
    std::vector<Partition> levels;
    if (!cfg.dendrogram.empty()) {
        for (const auto& zp : io::read_dendrogram_json(cfg.dendrogram).levels)
            levels.push_back(to_node_partition(net, zp));
        return levels;
    }
    return run_louvain(net, louvain_options(cfg)).zone_partitions();
}

int cmd_detect(const RunConfig& cfg) {
    Inputs in = load_flows(cfg);
    const FlowNetwork net = build_network(in.table, in.roster);
    const Dendrogram d = run_louvain(net, louvain_options(cfg));

    Artifacts out(cfg);
    out.json_doc("ingest_stats.json", io::stats_json(in.table.stats()));
    json dj = io::dendrogram_json(d);
    dj["zones"] = d.zones;
    out.json_doc("dendrogram.json", std::move(dj));

    const Partition final_p = d.levels.empty() ? Partition::singletons(net.size()) : d.levels.back().zone_partition;
    out.text("partition.csv", io::partition_csv(to_zone_partition(net, final_p)));

    std::ostringstream logtxt;
    logtxt << "zones " << net.size() << " edges " << net.edge_count() << " total_weight "
           << io::format_double(net.total_weight()) << "\n";
    logtxt << "singleton Q " << io::format_double(d.singleton_modularity) << "\n";
    for (std::size_t i = 0; i < d.levels.size(); ++i)
        logtxt << "level " << i << " communities " << d.levels[i].zone_partition.community_count() << " Q "
               << io::format_double(d.levels[i].modularity) << "\n";
    out.text("detect.log", logtxt.str());
    out.finish();

    std::cout << "levels " << d.levels.size() << ", final communities " << final_p.community_count()
              << ", Q " << io::format_double(d.levels.empty() ? d.singleton_modularity : d.levels.back().modularity)
              << "\n";
    return 0;
}

int cmd_curve(const RunConfig& cfg) {
    Inputs in = load_flows(cfg);
    const FlowNetwork net = build_network(in.table, in.roster);
    const auto levels = dendrogram_levels(cfg, net);
    const std::size_t lo = cfg.k_min.value_or(1);
    const std::size_t hi = cfg.k_max.value_or(net.size());
    const ModularityCurve curve = modularity_curve(net, levels, lo, hi);

    Artifacts out(cfg);
    if (cfg.want_csv()) out.text("curve.csv", io::curve_csv(curve));
    if (cfg.want_json()) out.json_doc("curve.json", io::curve_json(curve));
    out.finish();
    std::cout << "best k " << curve.best_k << ", Q " << io::format_double(curve.best_modularity) << "\n";
    return 0;
}

int cmd_cut(const RunConfig& cfg) {
    if (!cfg.k) {
        if (cfg.k_min || cfg.k_max) return cmd_curve(cfg);
        throw InputError("missing_argument", "cut requires --k or --k-min/--k-max");
    }
    Inputs in = load_flows(cfg);
    const FlowNetwork net = build_network(in.table, in.roster);
    const auto levels = dendrogram_levels(cfg, net);
    const ScaleCut cut = cut_to_k(net, levels, *cfg.k);

    Artifacts out(cfg);
    out.text("partition.csv", io::partition_csv(to_zone_partition(net, cut.partition)));
    out.json_doc("cut.json", {{"k", cut.k}, {"Q", cut.modularity}, {"provenance", to_string(cut.provenance)}});
    out.finish();
    std::cout << "k " << cut.k << ", Q " << io::format_double(cut.modularity) << " (" << to_string(cut.provenance)
              << ")\n";
    return 0;
}

int cmd_baseline(const RunConfig& cfg) {
    if (cfg.adjacency.empty() && cfg.geoms.empty())
        throw InputError("missing_adjacency", "baseline requires --adjacency or --geoms");
    Inputs in = load_flows(cfg);
    AdjacencyMap adj = !cfg.adjacency.empty() ? io::read_adjacency_csv(cfg.adjacency)
                                              : zone_adjacency(io::read_geojson(cfg.geoms));

    const PluralityResult plural = plurality_assign(in.table, in.roster, in.attrs ? &*in.attrs : nullptr);
    const ContiguityResult fixed = enforce_contiguity(plural.assignment, adj, in.table);
    const ZonePartition final_p = densify(fixed.assignment);

    json moves = json::array();
    for (const auto& m : fixed.moves) moves.push_back({{"zone", m.zone}, {"from", m.from}, {"to", m.to}});
    json seeds = json::object();
    for (const auto& [label, zone] : plural.seeds) seeds[std::to_string(label)] = zone;
    json flags{{"tied_zones", plural.tied_zones},
               {"no_flow_zones", plural.no_flow_zones},
               {"islands", fixed.islands},
               {"stranded_enclaves", fixed.stranded},
               {"enclave_moves", std::move(moves)},
               {"contiguity_passes", fixed.passes},
               {"plurality_seeds", std::move(seeds)},
               {"region_count", region_count(final_p)}};

    Artifacts out(cfg);
    out.text("partition.csv", io::partition_csv(final_p));
    out.json_doc("baseline_flags.json", std::move(flags));
    out.finish();
    std::cout << "regions " << region_count(final_p) << ", enclaves moved " << fixed.moves.size() << "\n";
    return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
    if (cfg.partitions.empty()) throw InputError("missing_argument", "evaluate requires --partition");
    if (cfg.partitions.size() > 2) throw InputError("config_error", "evaluate accepts at most two partitions");
    Inputs in = load_flows(cfg);
    std::vector<ZoneGeometry> geoms;
    if (!cfg.geoms.empty()) geoms = io::read_geojson(cfg.geoms);

    std::vector<RegionReport> reports;
    std::vector<std::string> names;
    for (const auto& path : cfg.partitions) {
        const ZonePartition p = io::read_partition_csv(path);
        reports.push_back(evaluate(in.table, p, in.roster, geoms, in.attrs ? &*in.attrs : nullptr));
        names.push_back(fs::path(path).filename().string());
    }
    if (names.size() == 2 && names[0] == names[1]) names = {"partition_1", "partition_2"};

    Artifacts out(cfg);
    if (reports.size() == 1) {
        if (cfg.want_json()) out.json_doc("report.json", io::report_json(reports[0]));
        if (cfg.want_csv()) out.text("report.csv", io::report_csv(reports[0]));
    } else {
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const std::string suffix = "_" + std::to_string(i + 1);
            if (cfg.want_json()) out.json_doc("report" + suffix + ".json", io::report_json(reports[i]));
            if (cfg.want_csv()) out.text("report" + suffix + ".csv", io::report_csv(reports[i]));
        }
        if (cfg.want_json()) out.json_doc("comparison.json", io::comparison_json(names, reports));
        if (cfg.want_csv()) out.text("comparison.csv", io::comparison_csv(names, reports));
    }
    out.finish();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& li = reports[i].summary.at("LI");
        const auto& msi = reports[i].summary.at("MSI");
        std::cout << names[i] << ": regions " << reports[i].regions.size() << ", mean LI "
                  << io::format_double(li.mean) << ", mean MSI " << io::format_double(msi.mean) << "\n";
    }
    return 0;
}

int cmd_synth(const RunConfig& cfg) {
    PlantedSpec spec = cfg.synth;
    spec.seed = cfg.seed;
    const PlantedData data = generate_planted(spec);

    ZonePartition truth = data.truth;
    Artifacts out(cfg);
    out.text("flows.csv", io::flows_csv(data.flows));
    out.text("roster.csv", io::roster_csv(data.roster));
    out.text("attrs.csv", io::attributes_csv(data.attributes));
    out.text("truth.csv", io::partition_csv(truth));
    out.text("adjacency.csv", io::adjacency_csv(data.adjacency));
    out.text("geoms.geojson", io::geojson(data.geometry).dump() + "\n");
    out.json_doc("synth.json", {{"regions", spec.regions},
                                {"zones_per_region", spec.zones_per_region},
                                {"lambda", spec.mean_flow},
                                {"leakage", spec.leakage},
                                {"hospitals_per_region", spec.hospitals_per_region}});
    out.finish();
    std::cout << "zones " << data.truth.size() << ", flow rows " << data.flows.size() << "\n";
    return 0;
}

void print_error(const std::string& code, const std::string& message) {
    std::cout << json{{"error", code}, {"message", message}}.dump() << std::endl;
    log(LogLevel::error, code + ": " + message);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"regionflow: service-region delineation from origin-destination flows"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", kVersion);

    RunConfig cfg;
    std::map<std::string, std::function<int(const RunConfig&)>> handlers{
        {"detect", cmd_detect}, {"cut", cmd_cut},           {"curve", cmd_curve},
        {"baseline", cmd_baseline}, {"evaluate", cmd_evaluate}, {"synth", cmd_synth}};

    auto add_inputs = [&](CLI::App* sub) {
        sub->add_option("--flows", cfg.flows, "Flow CSV: patient_zone,hospital_id,count,service_class");
        sub->add_option("--roster", cfg.roster, "Roster CSV: hospital_id,home_zone,is_general,admissions");
        sub->add_option("--attrs", cfg.attrs, "Zone attributes CSV: zone_id,population[,centroid_x,centroid_y]");
        sub->add_flag("--specialized", cfg.specialized, "Use only specialized-care (S) flows");
        sub->add_flag("--include-non-general", cfg.include_non_general, "Keep flows to non-general hospitals");
        sub->add_flag("--keep-unmatched", cfg.keep_unmatched, "Keep flows to hospitals missing from the roster");
        sub->add_option("--out", cfg.out, "Output directory");
        sub->add_option("--format", cfg.format, "Output format (default: both)")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    auto add_louvain = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "Seed for shuffled node order");
        sub->add_option("--order", cfg.order, "Node visit order")->check(CLI::IsMember({"sorted", "shuffle"}));
        sub->add_option("--min-gain", cfg.min_gain, "Minimum Q improvement to record a level");
        sub->add_option("--max-levels", cfg.max_levels, "Cap on recorded levels");
    };

    auto* detect = app.add_subcommand("detect", "Run Louvain detection and record the dendrogram");
    add_inputs(detect);
    add_louvain(detect);

    auto* cut = app.add_subcommand("cut", "Partition with exactly k regions");
    add_inputs(cut);
    add_louvain(cut);
    cut->add_option("--k", cfg.k, "Target region count");
    cut->add_option("--k-min", cfg.k_min, "Curve lower bound (switches to curve output)");
    cut->add_option("--k-max", cfg.k_max, "Curve upper bound (switches to curve output)");
    cut->add_option("--dendrogram", cfg.dendrogram, "dendrogram.json from a previous detect run");

    auto* curve = app.add_subcommand("curve", "Modularity for every k in a range");
    add_inputs(curve);
    add_louvain(curve);
    curve->add_option("--k-min", cfg.k_min, "Lower bound (default 1)");
    curve->add_option("--k-max", cfg.k_max, "Upper bound (default zone count)");
    curve->add_option("--dendrogram", cfg.dendrogram, "dendrogram.json from a previous detect run");

    auto* baseline = app.add_subcommand("baseline", "Plurality-rule regions with contiguity repair");
    add_inputs(baseline);
    baseline->add_option("--adjacency", cfg.adjacency, "Adjacency CSV: zone_a,zone_b");
    baseline->add_option("--geoms", cfg.geoms, "Zone GeoJSON (adjacency derived by rook contiguity)");
    baseline->add_option("--seed", cfg.seed, "Recorded in outputs");

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluation indices for one or two partitions");
    add_inputs(evaluate_cmd);
    evaluate_cmd->add_option("--partition", cfg.partitions, "Partition CSV (repeat for side-by-side)");
    evaluate_cmd->add_option("--geoms", cfg.geoms, "Zone GeoJSON for compactness");
    evaluate_cmd->add_option("--seed", cfg.seed, "Recorded in outputs");

    auto* synth = app.add_subcommand("synth", "Generate a planted-region synthetic data set");
    synth->add_option("--regions", cfg.synth.regions, "Region count R");
    synth->add_option("--zones-per-region", cfg.synth.zones_per_region, "Zones per region Z");
    synth->add_option("--lambda", cfg.synth.mean_flow, "Mean admissions per zone");
    synth->add_option("--leakage", cfg.synth.leakage, "Probability an admission leaves its region");
    synth->add_option("--hospitals-per-region", cfg.synth.hospitals_per_region, "Hospitals per region H");
    synth->add_option("--seed", cfg.seed, "Master seed");
    synth->add_option("--out", cfg.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("usage", e.what());
        return 2;
    }

    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    try {
        return handlers.at(cfg.command)(cfg);
    } catch (const InputError& e) {
        print_error(e.code(), e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
}
