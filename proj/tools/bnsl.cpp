#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bnsl/bnsl.hpp"

namespace {

bnsl::ScoreSpec make_score_spec(const std::string& score, const std::string& estimator,
                                double test_fraction, std::uint64_t seed, int max_parents) {
    bnsl::ScoreSpec spec;
    if (score == "bic") spec.kind = bnsl::ScoreSpec::Kind::BIC;
    else if (score == "pred") spec.kind = bnsl::ScoreSpec::Kind::PRED;
    else throw CLI::ValidationError("--score", "expected bic or pred");
    if (estimator == "qr") spec.method = bnsl::FitMethod::QR;
    else if (estimator == "1p") spec.method = bnsl::FitMethod::Closed1;
    else if (estimator == "2p") spec.method = bnsl::FitMethod::Closed2;
    else throw CLI::ValidationError("--estimator", "expected qr, 1p or 2p");
    spec.split.test_fraction = test_fraction;
    spec.split.seed = seed;
    spec.max_parents = max_parents;
    return spec;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

const char* move_name(bnsl::Move::Kind k) {
    switch (k) {
        case bnsl::Move::Kind::Add: return "add";
        case bnsl::Move::Kind::Delete: return "delete";
        case bnsl::Move::Kind::Reverse: return "reverse";
    }
    return "?";
}

void write_trace_csv(const bnsl::SearchTrace& trace, const bnsl::Dag& dag, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "step,phase,move,from,to,score_before,score_after,evals_cum\n";
    out.precision(17);
    for (std::size_t s = 0; s < trace.entries.size(); ++s) {
        const auto& e = trace.entries[s];
        out << s << ',' << e.phase << ',' << move_name(e.move.kind) << ',' << dag.name(e.move.from)
            << ',' << dag.name(e.move.to) << ',' << e.score_before << ',' << e.score_after << ','
            << e.evals_cum << '\n';
    }
}

struct Arm {
    std::string name;
    bnsl::ScoreSpec::Kind kind;
    bnsl::FitMethod method;
};

Arm arm_from_name(const std::string& name, double test_fraction, std::uint64_t seed) {
    (void)test_fraction;
    (void)seed;
    if (name == "QR") return {name, bnsl::ScoreSpec::Kind::BIC, bnsl::FitMethod::QR};
    if (name == "1P") return {name, bnsl::ScoreSpec::Kind::BIC, bnsl::FitMethod::Closed1};
    if (name == "2P") return {name, bnsl::ScoreSpec::Kind::BIC, bnsl::FitMethod::Closed2};
    if (name == "PRED") return {name, bnsl::ScoreSpec::Kind::PRED, bnsl::FitMethod::Closed2};
    throw std::runtime_error("bench: unknown arm '" + name + "'");
}

bnsl::BnModel bench_reference(const nlohmann::json& cfg) {
    const auto& ref = cfg.at("reference");
    if (ref.contains("file")) return bnsl::load_model(ref.at("file").get<std::string>());
    const auto& gen = ref.at("generator");
    std::string kind = gen.value("kind", std::string("clgbn"));
    bnsl::NetworkKind nk;
    if (kind == "discrete") nk = bnsl::NetworkKind::Discrete;
    else if (kind == "gbn") nk = bnsl::NetworkKind::Gbn;
    else if (kind == "clgbn") nk = bnsl::NetworkKind::Clgbn;
    else throw std::runtime_error("bench: unknown generator kind '" + kind + "'");
    return bnsl::random_reference_model(nk, gen.at("nodes").get<int>(),
                                        gen.value("density", 1.5),
                                        gen.value("seed", std::uint64_t{0}));
}

int cmd_bench(const std::string& config_path, const std::string& out_path) {
    nlohmann::json cfg;
    {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot open file: " + config_path);
        in >> cfg;
    }
    auto sizes = cfg.at("sizes").get<std::vector<std::size_t>>();
    int replicates = cfg.value("replicates", 5);
    int repeats = cfg.value("repeats", 5);
    auto arm_names = cfg.value("arms", std::vector<std::string>{"QR", "1P", "2P", "PRED"});
    double test_fraction = cfg.value("test_fraction", 0.25);
    int max_parents = cfg.value("max_parents", 5);
    std::uint64_t seed = cfg.value("seed", std::uint64_t{0});
    if (sizes.empty() || replicates < 1 || repeats < 1 || arm_names.empty())
        throw std::runtime_error("bench: sizes, replicates, repeats and arms must be non-empty");

    bnsl::BnModel reference = bench_reference(cfg);
    bnsl::Cpdag ref_cpdag = bnsl::cpdag_of(reference.dag);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + out_path);
    out << "size,replicate,arm,mean_seconds,sd_seconds,shd,evaluations,normalized,status\n";
    out.precision(17);

    for (std::size_t si = 0; si < sizes.size(); ++si) {
        for (int rep = 0; rep < replicates; ++rep) {
            std::uint64_t data_seed = seed + 7919ull * (si + 1) + 104729ull * (rep + 1);
            bnsl::Dataset ds = bnsl::sample(reference, {sizes[si], data_seed});

            struct Row {
                std::string arm;
                bool ok = false;
                std::string error;
                double mean = 0.0, sd = 0.0;
                int shd = -1;
                long evals = 0;
            };
            std::vector<Row> rows;
            double qr_mean = -1.0;
            for (const auto& an : arm_names) {
                Row row;
                row.arm = an;
                try {
                    Arm arm = arm_from_name(an, test_fraction, data_seed);
                    bnsl::ScoreSpec spec;
                    spec.kind = arm.kind;
                    spec.method = arm.method;
                    spec.split.test_fraction = test_fraction;
                    spec.split.seed = data_seed;
                    spec.max_parents = max_parents;
                    bnsl::SearchParams params;
                    params.seed = data_seed;
                    std::vector<double> times;
                    bnsl::GreedyResult last;
                    for (int t = 0; t < repeats; ++t) {
                        last = bnsl::greedy_search(ds, spec, params);
                        times.push_back(last.trace.seconds);
                    }
                    double mean = 0.0;
                    for (double t : times) mean += t;
                    mean /= times.size();
                    double var = 0.0;
                    for (double t : times) var += (t - mean) * (t - mean);
                    row.mean = mean;
                    row.sd = times.size() > 1 ? std::sqrt(var / (times.size() - 1)) : 0.0;
                    row.shd = bnsl::shd(bnsl::cpdag_of(last.dag), ref_cpdag);
                    row.evals = last.trace.total_evals;
                    row.ok = true;
                    if (an == "QR") qr_mean = mean;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
                rows.push_back(std::move(row));
            }
            for (const auto& row : rows) {
                out << sizes[si] << ',' << rep << ',' << row.arm << ',';
                if (row.ok) {
                    out << row.mean << ',' << row.sd << ',' << row.shd << ',' << row.evals << ',';
                    if (qr_mean > 0.0) out << row.mean / qr_mean;
                    out << ",ok\n";
                } else {
                    out << ",,,,," << "error\n";
                    std::cerr << "bench: arm " << row.arm << " size " << sizes[si] << " replicate "
                              << rep << " failed: " << row.error << "\n";
                }
            }
            out.flush();
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian network structure learning over mixed discrete/continuous data"};
    app.require_subcommand(1);

    // learn
    auto* learn = app.add_subcommand("learn", "learn a network structure from CSV data");
    std::string learn_data, learn_out = "model";
    std::string learn_score = "bic", learn_estimator = "qr";
    double learn_tf = 0.25;
    int learn_t0 = 10, learn_t1 = 10, learn_r0 = 0, learn_r1 = 5, learn_mp = -1;
    std::uint64_t learn_seed = 0;
    learn->add_option("data", learn_data, "input CSV file")->required();
    learn->add_option("--score", learn_score, "score: bic or pred");
    learn->add_option("--estimator", learn_estimator, "estimator: qr, 1p or 2p");
    learn->add_option("--test-fraction", learn_tf, "held-out fraction for pred");
    learn->add_option("--tabu", learn_t0, "max tabu iterations t0");
    learn->add_option("--tabu-list", learn_t1, "tabu list length t1");
    learn->add_option("--restarts", learn_r0, "random restarts r0");
    learn->add_option("--perturb", learn_r1, "perturbation moves per restart r1");
    learn->add_option("--max-parents", learn_mp, "parent cap (negative = unlimited)");
    learn->add_option("--seed", learn_seed, "RNG seed");
    learn->add_option("--out", learn_out, "output prefix (.json, .arcs, .trace.csv)");

    // sample
    auto* sampl = app.add_subcommand("sample", "draw rows from a model by forward sampling");
    std::string sample_model, sample_out = "sample.csv";
    std::size_t sample_n = 1000;
    std::uint64_t sample_seed = 0;
    sampl->add_option("model", sample_model, "model JSON file")->required();
    sampl->add_option("-n,--rows", sample_n, "number of rows");
    sampl->add_option("--seed", sample_seed, "RNG seed");
    sampl->add_option("--out", sample_out, "output CSV file");

    // genref
    auto* genref = app.add_subcommand("genref", "generate a random reference model");
    std::string genref_kind = "clgbn", genref_out = "reference.json";
    int genref_nodes = 20;
    double genref_density = 1.5;
    std::uint64_t genref_seed = 0;
    genref->add_option("--kind", genref_kind, "network kind: discrete, gbn or clgbn");
    genref->add_option("--nodes", genref_nodes, "node count");
    genref->add_option("--density", genref_density, "arcs per node (floor(c*N) arcs)");
    genref->add_option("--seed", genref_seed, "RNG seed");
    genref->add_option("--out", genref_out, "output model JSON file");

    // score
    auto* scorec = app.add_subcommand("score", "score a fixed structure on CSV data");
    std::string score_data, score_model, score_arcs;
    std::string score_score = "bic", score_estimator = "qr";
    double score_tf = 0.25;
    std::uint64_t score_seed = 0;
    scorec->add_option("data", score_data, "input CSV file")->required();
    scorec->add_option("--model", score_model, "model JSON supplying the structure");
    scorec->add_option("--arcs", score_arcs, "arc-list file supplying the structure");
    scorec->add_option("--score", score_score, "score: bic or pred");
    scorec->add_option("--estimator", score_estimator, "estimator: qr, 1p or 2p");
    scorec->add_option("--test-fraction", score_tf, "held-out fraction for pred");
    scorec->add_option("--seed", score_seed, "RNG seed");

    // shd
    auto* shdc = app.add_subcommand("shd", "structural Hamming distance between two models");
    std::string shd_a, shd_b;
    shdc->add_option("first", shd_a, "first model JSON file")->required();
    shdc->add_option("second", shd_b, "second model JSON file")->required();

    // cpdag
    auto* cpdagc = app.add_subcommand("cpdag", "equivalence-class arc list of a model");
    std::string cpdag_model, cpdag_out;
    cpdagc->add_option("model", cpdag_model, "model JSON file")->required();
    cpdagc->add_option("--out", cpdag_out, "output arc-list file (default stdout)");

    // cost
    auto* costc = app.add_subcommand("cost", "analytic per-fit operation counts as CSV");
    std::string cost_class = "gbn_qr", cost_out;
    std::vector<double> cost_n{1000.0};
    std::vector<int> cost_j{0, 1, 2};
    int cost_D = 0, cost_l = 2;
    costc->add_option("--class", cost_class,
                      "node class: discrete, gbn_qr, gbn_closed, clg_qr or clg_closed");
    costc->add_option("--n", cost_n, "sample sizes");
    costc->add_option("--j", cost_j, "parent counts");
    costc->add_option("--D", cost_D, "discrete-parent count (clg_qr)");
    costc->add_option("--l", cost_l, "levels per discrete variable");
    costc->add_option("--out", cost_out, "output CSV file (default stdout)");

    // bench
    auto* benchc = app.add_subcommand("bench", "timed learning harness over generated data");
    std::string bench_config, bench_out = "bench.csv";
    benchc->add_option("config", bench_config, "bench config JSON file")->required();
    benchc->add_option("--out", bench_out, "output CSV file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*learn) {
            auto ds = bnsl::load_csv(learn_data);
            auto spec = make_score_spec(learn_score, learn_estimator, learn_tf, learn_seed, -1);
            bnsl::SearchParams params;
            params.t0 = learn_t0;
            params.t1 = learn_t1;
            params.r0 = learn_r0;
            params.r1 = learn_r1;
            params.seed = learn_seed;
            params.max_parents = learn_mp;
            auto res = bnsl::greedy_search(ds, spec, params);
            bnsl::save_model(res.model, learn_out + ".json");
            write_text(learn_out + ".arcs", bnsl::to_arc_list(res.dag));
            write_trace_csv(res.trace, res.dag, learn_out + ".trace.csv");
        } else if (*sampl) {
            auto model = bnsl::load_model(sample_model);
            auto ds = bnsl::sample(model, {sample_n, sample_seed});
            bnsl::write_csv(ds, sample_out);
        } else if (*genref) {
            bnsl::NetworkKind nk;
            if (genref_kind == "discrete") nk = bnsl::NetworkKind::Discrete;
            else if (genref_kind == "gbn") nk = bnsl::NetworkKind::Gbn;
            else if (genref_kind == "clgbn") nk = bnsl::NetworkKind::Clgbn;
            else throw std::runtime_error("genref: unknown kind '" + genref_kind + "'");
            auto model = bnsl::random_reference_model(nk, genref_nodes, genref_density, genref_seed);
            bnsl::save_model(model, genref_out);
        } else if (*scorec) {
            auto ds = bnsl::load_csv(score_data);
            bnsl::Dag dag;
            if (!score_model.empty()) {
                dag = bnsl::load_model(score_model).dag;
            } else if (!score_arcs.empty()) {
                std::ifstream in(score_arcs);
                if (!in) throw std::runtime_error("cannot open file: " + score_arcs);
                std::ostringstream ss;
                ss << in.rdbuf();
                std::vector<std::string> names;
                for (const auto& c : ds.schema().columns) names.push_back(c.name);
                dag = bnsl::dag_from_arc_list(ss.str(), std::move(names));
            } else {
                throw std::runtime_error("score: need --model or --arcs");
            }
            auto spec = make_score_spec(score_score, score_estimator, score_tf, score_seed, -1);
            std::cout.precision(17);
            std::cout << bnsl::score_graph(ds, spec, dag) << "\n";
        } else if (*shdc) {
            auto a = bnsl::load_model(shd_a);
            auto b = bnsl::load_model(shd_b);
            std::cout << bnsl::shd(bnsl::cpdag_of(a.dag), bnsl::cpdag_of(b.dag)) << "\n";
        } else if (*cpdagc) {
            auto model = bnsl::load_model(cpdag_model);
            std::string text = bnsl::to_arc_list(bnsl::cpdag_of(model.dag));
            if (cpdag_out.empty()) std::cout << text;
            else write_text(cpdag_out, text);
        } else if (*costc) {
            bnsl::NodeClass cls = bnsl::node_class_from_string(cost_class);
            std::ostringstream csv;
            csv.precision(17);
            csv << "class,n,j,D,l,count\n";
            for (double n : cost_n)
                for (int j : cost_j) {
                    bnsl::CostParams p;
                    p.n = n;
                    p.j = j;
                    p.D = cost_D;
                    p.l = cost_l;
                    csv << cost_class << ',' << n << ',' << j << ',' << cost_D << ',' << cost_l
                        << ',' << bnsl::node_cost(cls, p) << '\n';
                }
            if (cost_out.empty()) std::cout << csv.str();
            else write_text(cost_out, csv.str());
        } else if (*benchc) {
            return cmd_bench(bench_config, bench_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
