#include "l2graph/cli.hpp"
#include "l2graph/corruption_synth.hpp"
#include "l2graph/embedding.hpp"
#include "l2graph/graph_builder.hpp"
#include "l2graph/matrix_io.hpp"
#include "l2graph/metrics.hpp"
#include "l2graph/spectral.hpp"
#include "l2graph/theory.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace l2graph {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

Orientation parse_orientation(const std::string& name) {
    if (name == "columns") return Orientation::SamplesAsColumns;
    if (name == "rows") return Orientation::SamplesAsRows;
    throw Error("orientation must be 'columns' or 'rows'");
}

SimilarityGraph build_graph(const DataMatrix& data, const std::string& builder,
                            double lambda, int k, double tau) {
    switch (builder_from_name(builder)) {
    case GraphBuilder::L2: return build_l2_graph(data, lambda, k);
    case GraphBuilder::Gaussian: return build_gaussian_graph(data, tau, k);
    case GraphBuilder::Lle: return build_lle_graph(data, k);
    }
    throw Error("unreachable");
}

struct GraphArgs {
    std::string in, out, builder = "l2", orientation = "columns";
    double lambda = 0.1, tau = 1.0;
    int k = 5;
};

int cmd_graph(const GraphArgs& args, std::ostream& out) {
    DataMatrix data = load_matrix(args.in, parse_orientation(args.orientation));
    auto start = std::chrono::steady_clock::now();
    SimilarityGraph graph =
        build_graph(data, args.builder, args.lambda, args.k, args.tau);
    double elapsed = seconds_since(start);
    save_graph(graph, args.out);
    out << "seconds=" << elapsed << "\n";
    return 0;
}

struct ClusterArgs {
    std::string in, in_graph, out, builder = "l2", orientation = "columns";
    double lambda = 0.1, tau = 1.0;
    int k = 5;
    int clusters = 2;
    std::uint64_t seed = 0;
    int repeat = 1;
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

int cmd_cluster(const ClusterArgs& args, std::ostream& out) {
    if (args.in.empty() == args.in_graph.empty())
        throw Error("give exactly one of --in (raw data) or --in-graph");
    if (args.repeat < 1) throw Error("--repeat must be positive");

    SimilarityGraph graph;
    std::optional<std::vector<int>> truth;
    if (!args.in.empty()) {
        DataMatrix data =
            load_matrix(args.in, parse_orientation(args.orientation));
        truth = data.labels;
        graph = build_graph(data, args.builder, args.lambda, args.k, args.tau);
    } else {
        graph = load_graph(args.in_graph);
        std::string sibling = args.in_graph + ".labels";
        if (std::ifstream(sibling).good()) truth = load_labels(sibling);
    }

    std::vector<double> acs, nmis, errors;
    ClusterAssignment first;
    for (int r = 0; r < args.repeat; ++r) {
        ClusterAssignment assignment =
            spectral_cluster(graph, args.clusters, args.seed + r);
        if (r == 0) first = assignment;
        if (truth) {
            double ac = accuracy(assignment.labels, *truth);
            double mi = nmi(assignment.labels, *truth);
            acs.push_back(ac);
            nmis.push_back(mi);
            errors.push_back(1.0 - ac);
            out << "seed=" << args.seed + r << " ac=" << ac << " nmi=" << mi
                << " error=" << 1.0 - ac << "\n";
        }
    }
    if (truth && args.repeat > 1) {
        out << "mean ac=" << mean(acs) << " nmi=" << mean(nmis)
            << " error=" << mean(errors) << "\n";
        out << "median ac=" << median(acs) << " nmi=" << median(nmis)
            << " error=" << median(errors) << "\n";
    }

    if (!args.out.empty()) {
        save_labels(first.labels, args.out);
        std::ofstream meta(args.out + ".meta");
        meta << "{\"l\": " << first.num_clusters
             << ", \"inertia\": " << first.inertia << ", \"seed\": " << args.seed
             << "}\n";
    }
    return 0;
}

struct EmbedArgs {
    std::string train, test, out, orientation = "columns";
    double lambda = 0.1;
    int k = 5;
    int d = 0; // single dimension, appended to the grid when given
    std::vector<int> d_grid;
};

int cmd_embed(EmbedArgs args, std::ostream& out) {
    if (args.d > 0) args.d_grid.push_back(args.d);
    if (args.d_grid.empty()) throw Error("give --d-grid (or a single --d)");
    Orientation orient = parse_orientation(args.orientation);
    DataMatrix train = load_matrix(args.train, orient);
    DataMatrix test = load_matrix(args.test, orient);

    GraphParams params;
    params.lambda = args.lambda;
    params.k = args.k;
    AccuracyTable table =
        evaluate_subspace_learning(train, test, params, args.d_grid);

    std::ostringstream csv;
    csv << "d,accuracy\n";
    for (const auto& row : table.rows)
        csv << row.d << "," << row.accuracy << "\n";
    csv << "# best d=" << table.best_d << " accuracy=" << table.best_accuracy
        << "\n";

    if (args.out.empty()) {
        out << csv.str();
    } else {
        std::ofstream file(args.out);
        if (!file) throw Error("cannot write '" + args.out + "'");
        file << csv.str();
    }
    return 0;
}

struct SynthArgs {
    std::string kind = "union", out;
    int ambient = 50;
    std::vector<int> dims{4, 4, 4, 4, 4};
    std::vector<int> points{20, 20, 20, 20, 20};
    double sigma = 0.0;
    std::string dependence = "independent";
    int overlap = 1;
    int motions = 2, frames = 30, points_per_motion = 50;
    double noise = 0.0;
    std::uint64_t seed = 0;
};

int cmd_synth(const SynthArgs& args, std::ostream& out) {
    DataMatrix data;
    std::ostringstream header;
    if (args.kind == "union") {
        SubspaceSpec spec;
        spec.ambient_dim = args.ambient;
        spec.subspace_dims = args.dims;
        spec.points_per_subspace = args.points;
        spec.noise_sigma = args.sigma;
        spec.dependence = args.dependence == "shared" ? Dependence::SharedBasis
                                                      : Dependence::Independent;
        spec.overlap_count = args.overlap;
        data = sample_union_of_subspaces(spec, args.seed);

        header << "synth kind=union ambient=" << args.ambient << " dims=";
        for (size_t i = 0; i < args.dims.size(); ++i)
            header << (i ? "," : "") << args.dims[i];
        header << " points=";
        for (size_t i = 0; i < args.points.size(); ++i)
            header << (i ? "," : "") << args.points[i];
        header << " sigma=" << args.sigma << " dependence=" << args.dependence
               << " seed=" << args.seed;
    } else if (args.kind == "trajectories") {
        data = synth_trajectories(args.motions, args.frames,
                                  args.points_per_motion, args.noise, args.seed);
        header << "synth kind=trajectories motions=" << args.motions
               << " frames=" << args.frames
               << " points_per_motion=" << args.points_per_motion
               << " noise=" << args.noise << " seed=" << args.seed;
    } else {
        throw Error("kind must be 'union' or 'trajectories'");
    }

    save_data(data, args.out, {header.str()});
    out << "samples=" << data.samples() << " dim=" << data.dim() << "\n";
    return 0;
}

struct CorruptArgs {
    std::string in, out, kind = "gaussian", orientation = "columns";
    double ratio = 0.0, fraction = 1.0, pixel_max = 255.0;
    std::uint64_t seed = 0;
};

int cmd_corrupt(const CorruptArgs& args, std::ostream& out) {
    DataMatrix data = load_matrix(args.in, parse_orientation(args.orientation));
    DataMatrix result;
    if (args.kind == "gaussian") {
        result = add_gaussian(data, args.ratio, args.fraction, args.pixel_max,
                              args.seed);
    } else if (args.kind == "random-pixel") {
        result = random_pixel_corrupt(data, args.ratio, args.fraction, args.seed);
    } else {
        throw Error("kind must be 'gaussian' or 'random-pixel'");
    }

    std::ostringstream header;
    header << "corrupt kind=" << args.kind << " ratio=" << args.ratio
           << " fraction=" << args.fraction;
    if (args.kind == "gaussian") header << " pixel_max=" << args.pixel_max;
    header << " seed=" << args.seed;
    save_data(result, args.out, {header.str()});
    out << "samples=" << result.samples() << " dim=" << result.dim() << "\n";
    return 0;
}

struct VerifyArgs {
    std::uint64_t seed = 0;
    int instances = 50;
    bool inject_failure = false;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
    std::vector<CheckResult> results = run_verification(args.seed, args.instances);
    if (args.inject_failure) {
        // Test hook: a synthetic failing check exercises the failure path.
        CheckResult fake;
        fake.name = "injected-failure";
        fake.instances = 1;
        fake.passed = 0;
        fake.hard = true;
        fake.note = "failure injected via --inject-failure";
        results.push_back(fake);
    }

    bool failed = false;
    for (const auto& r : results) {
        out << "check=" << r.name << " instances=" << r.instances
            << " passed=" << r.passed << " worst_residual=" << r.worst_residual;
        if (!r.note.empty()) out << " note=\"" << r.note << "\"";
        out << "\n";
        if (r.hard && r.passed < r.instances) {
            failed = true;
            out << "FAILED: " << r.name << " (" << r.instances - r.passed << "/"
                << r.instances << " instances)\n";
        }
    }
    out << (failed ? "verification FAILED\n" : "verification passed\n");
    return failed ? 2 : 0;
}

struct BenchArgs {
    std::vector<int> sizes{100, 200, 400};
    std::vector<std::string> builders{"l2"};
    int repeats = 3;
    double lambda = 0.1, tau = 1.0;
    int k = 5;
    std::uint64_t seed = 0;
    std::string out_path;
};

int cmd_bench(const BenchArgs& args, std::ostream& out) {
    if (args.repeats < 1) throw Error("--repeats must be positive");
    std::ostringstream csv;
    csv << "builder,n,seconds\n";

    for (const std::string& builder : args.builders) {
        for (int n : args.sizes) {
            // Synthetic union-of-subspaces input; the shape, not the
            // content, is what the timing depends on.
            SubspaceSpec spec;
            spec.ambient_dim = 50;
            const int l = 5;
            spec.subspace_dims.assign(l, 4);
            spec.points_per_subspace.assign(l, n / l);
            for (int r = 0; r < n % l; ++r) ++spec.points_per_subspace[r];
            DataMatrix data = sample_union_of_subspaces(spec, args.seed);

            // Warmup run is discarded (first-touch allocation, caches).
            build_graph(data, builder, args.lambda, args.k, args.tau);
            double total = 0.0;
            for (int r = 0; r < args.repeats; ++r) {
                auto start = std::chrono::steady_clock::now();
                build_graph(data, builder, args.lambda, args.k, args.tau);
                total += seconds_since(start);
            }
            csv << builder << "," << n << "," << total / args.repeats << "\n";
        }
    }

    if (args.out_path.empty()) {
        out << csv.str();
    } else {
        std::ofstream file(args.out_path);
        if (!file) throw Error("cannot write '" + args.out_path + "'");
        file << csv.str();
    }
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"similarity graphs from self-representation, spectral "
                 "clustering, and graph-embedded subspace learning"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "read defaults from a key=value config file "
                   "(command options live in a [command] section; "
                   "command-line flags win)");

    GraphArgs graph_args;
    CLI::App* graph = app.add_subcommand("graph", "build a similarity graph");
    graph->add_option("--in", graph_args.in, "input matrix CSV")->required();
    graph->add_option("--out", graph_args.out, "output graph CSV")->required();
    graph->add_option("--builder", graph_args.builder, "l2 | gaussian | lle");
    graph->add_option("--lambda", graph_args.lambda, "ridge regularizer (l2)");
    graph->add_option("--k", graph_args.k, "kept coefficients / neighbors");
    graph->add_option("--tau", graph_args.tau, "heat-kernel bandwidth (gaussian)");
    graph->add_option("--orientation", graph_args.orientation,
                      "columns | rows (samples in the file)");

    ClusterArgs cluster_args;
    CLI::App* cluster =
        app.add_subcommand("cluster", "spectral clustering with metrics");
    cluster->add_option("--in", cluster_args.in, "raw data CSV (graph is built)");
    cluster->add_option("--in-graph", cluster_args.in_graph,
                        "prebuilt graph CSV");
    cluster->add_option("--out", cluster_args.out, "output label file");
    cluster->add_option("--builder", cluster_args.builder, "l2 | gaussian | lle");
    cluster->add_option("--lambda", cluster_args.lambda, "ridge regularizer");
    cluster->add_option("--k", cluster_args.k, "kept coefficients / neighbors");
    cluster->add_option("--tau", cluster_args.tau, "heat-kernel bandwidth");
    cluster->add_option("--clusters", cluster_args.clusters, "number of clusters")
        ->required();
    cluster->add_option("--seed", cluster_args.seed, "base RNG seed");
    cluster->add_option("--repeat", cluster_args.repeat,
                        "runs over seeds seed..seed+repeat-1");
    cluster->add_option("--orientation", cluster_args.orientation,
                        "columns | rows");

    EmbedArgs embed_args;
    CLI::App* embed = app.add_subcommand(
        "embed", "subspace learning evaluated with a 1-NN classifier");
    embed->add_option("--train", embed_args.train, "labeled training CSV")
        ->required();
    embed->add_option("--test", embed_args.test, "labeled test CSV")->required();
    embed->add_option("--lambda", embed_args.lambda, "ridge regularizer");
    embed->add_option("--k", embed_args.k, "kept coefficients");
    embed->add_option("--d", embed_args.d, "single embedding dimension");
    embed->add_option("--d-grid", embed_args.d_grid, "embedding dimensions")
        ->delimiter(',');
    embed->add_option("--out", embed_args.out, "accuracy table CSV (default stdout)");
    embed->add_option("--orientation", embed_args.orientation, "columns | rows");

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "generate synthetic data");
    synth->add_option("--kind", synth_args.kind, "union | trajectories");
    synth->add_option("--out", synth_args.out, "output CSV")->required();
    synth->add_option("--ambient", synth_args.ambient, "ambient dimension");
    synth->add_option("--dims", synth_args.dims, "subspace dimensions")
        ->delimiter(',');
    synth->add_option("--points", synth_args.points, "points per subspace")
        ->delimiter(',');
    synth->add_option("--sigma", synth_args.sigma, "isotropic noise sigma");
    synth->add_option("--dependence", synth_args.dependence,
                      "independent | shared");
    synth->add_option("--overlap", synth_args.overlap,
                      "shared basis directions (shared mode)");
    synth->add_option("--motions", synth_args.motions, "rigid motions");
    synth->add_option("--frames", synth_args.frames, "frames F (dim = 2F)");
    synth->add_option("--points-per-motion", synth_args.points_per_motion,
                      "trajectories per motion");
    synth->add_option("--noise", synth_args.noise, "trajectory noise sigma");
    synth->add_option("--seed", synth_args.seed, "RNG seed");

    CorruptArgs corrupt_args;
    CLI::App* corrupt = app.add_subcommand("corrupt", "apply a corruption model");
    corrupt->add_option("--in", corrupt_args.in, "input matrix CSV")->required();
    corrupt->add_option("--out", corrupt_args.out, "output CSV")->required();
    corrupt->add_option("--kind", corrupt_args.kind, "gaussian | random-pixel");
    corrupt->add_option("--ratio", corrupt_args.ratio,
                        "noise scale / corrupted coordinate fraction");
    corrupt->add_option("--fraction", corrupt_args.fraction,
                        "fraction of samples hit");
    corrupt->add_option("--pixel-max", corrupt_args.pixel_max,
                        "pixel range upper bound (gaussian)");
    corrupt->add_option("--seed", corrupt_args.seed, "RNG seed");
    corrupt->add_option("--orientation", corrupt_args.orientation,
                        "columns | rows");

    VerifyArgs verify_args;
    CLI::App* verify =
        app.add_subcommand("verify", "run the numerical verification sweeps");
    verify->add_option("--seed", verify_args.seed, "RNG seed");
    verify->add_option("--instances", verify_args.instances,
                       "instances per sweep");
    verify->add_flag("--inject-failure", verify_args.inject_failure)
        ->group(""); // test hook, hidden from help

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "time the graph builders");
    bench->add_option("--sizes", bench_args.sizes, "sample counts")
        ->delimiter(',');
    bench->add_option("--builders", bench_args.builders, "builders to time")
        ->delimiter(',');
    bench->add_option("--repeats", bench_args.repeats,
                      "timed runs per cell (after one discarded warmup)");
    bench->add_option("--lambda", bench_args.lambda, "ridge regularizer");
    bench->add_option("--k", bench_args.k, "kept coefficients / neighbors");
    bench->add_option("--tau", bench_args.tau, "heat-kernel bandwidth");
    bench->add_option("--seed", bench_args.seed, "RNG seed");
    bench->add_option("--out", bench_args.out_path, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 1;
    }

    try {
        if (graph->parsed()) return cmd_graph(graph_args, out);
        if (cluster->parsed()) return cmd_cluster(cluster_args, out);
        if (embed->parsed()) return cmd_embed(embed_args, out);
        if (synth->parsed()) return cmd_synth(synth_args, out);
        if (corrupt->parsed()) return cmd_corrupt(corrupt_args, out);
        if (verify->parsed()) return cmd_verify(verify_args, out);
        if (bench->parsed()) return cmd_bench(bench_args, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no command given\n";
    return 1;
}

} // namespace l2graph
