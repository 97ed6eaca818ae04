// Batch driver for the coincidence-index classification toolkit. One
// subcommand per pipeline stage; all randomness flows from --seed, and
// identical flags on identical inputs produce byte-identical output files
// (run timings go to stderr and the sweep manifest only).

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "coindex/coindex.hpp"

namespace {

using namespace coindex;

struct InputFlags {
    std::string path;
    std::string label_col = "label";
    std::string id_col;
    std::string columns = "all";

    void add(CLI::App* cmd, bool require_label = true) {
        cmd->add_option("--input", path, "input CSV file")->required();
        auto* lab = cmd->add_option("--label-col", label_col,
                                    "label column (name or index; values must be 0/1)");
        if (!require_label) lab->description("label column; omit for unlabeled data");
        cmd->add_option("--id-col", id_col, "id column (name or index)");
        cmd->add_option("--columns", columns,
                        "measurement columns: 'all', 'a..b' or comma list");
    }

    Dataset load(bool labeled = true) const {
        std::optional<std::string> id =
            id_col.empty() ? std::nullopt : std::make_optional(id_col);
        Dataset d = labeled ? load_csv(path, label_col, id) : load_csv_unlabeled(path, id);
        const ColumnSelection sel = ColumnSelection::parse(columns);
        if (sel.kind == ColumnSelection::Kind::all) return d;
        return select_columns(d, sel);
    }
};

struct PredicateFlags {
    std::string kind = "abs";
    double t = 0.5;
    std::string ref_file;

    void add(CLI::App* cmd) {
        cmd->add_option("--predicate", kind, "predicate family: t | abs | ref")
            ->check(CLI::IsMember({"t", "abs", "ref", "t_excess", "abs_t_excess", "ref_excess"}));
        cmd->add_option("--t", t, "threshold for the t / abs families");
        cmd->add_option("--ref-file", ref_file, "CSV of lo,hi per column (ref family)");
    }

    PredicateConfig build() const {
        if (predicate_kind_from_string(kind) == PredicateKind::ref_excess) {
            if (ref_file.empty())
                throw ConfigError("ref predicate needs --ref-file");
            return load_ref_bounds(ref_file);
        }
        PredicateConfig cfg;
        cfg.kind = predicate_kind_from_string(kind);
        cfg.t = t;
        return cfg;
    }
};

struct RunFlags {
    PredicateFlags predicate;
    std::string similarity = "coincidence";
    std::string agg = "max";
    std::string cutoff = "grid";
    std::string q = "kappa";
    double p = 2.0;
    uint64_t seed = 1;
    size_t grid = 101;
    size_t n_steps = 10;
    double epsilon = 1e-6;
    size_t threads = 0;
    bool naive_midpoint = false;

    void add(CLI::App* cmd) {
        predicate.add(cmd);
        cmd->add_option("--similarity", similarity, "coincidence | kappa | cosine")
            ->check(CLI::IsMember({"coincidence", "kappa", "cosine"}));
        cmd->add_option("--agg", agg, "aggregate over the training set: max | min")
            ->check(CLI::IsMember({"max", "min"}));
        cmd->add_option("--cutoff", cutoff, "cutoff selection: naive | grid | refined")
            ->check(CLI::IsMember({"naive", "grid", "refined"}));
        cmd->add_option("--q", q, "quality to optimize: accuracy | kappa")
            ->check(CLI::IsMember({"accuracy", "kappa"}));
        cmd->add_option("--p", p, "training percentage of the positive objects");
        cmd->add_option("--seed", seed, "seed for the training draw");
        cmd->add_option("--grid", grid, "grid points for --cutoff grid");
        cmd->add_option("--n-steps", n_steps, "coarse steps for --cutoff refined");
        cmd->add_option("--epsilon", epsilon, "stop threshold for --cutoff refined");
        cmd->add_option("--threads", threads, "worker threads (0 = logical cores)");
        cmd->add_flag("--naive-midpoint", naive_midpoint,
                      "use (av1+av0)/2 instead of (av1-av0)/2 for --cutoff naive");
    }

    RunConfig build() const {
        RunConfig cfg;
        cfg.predicate = predicate.build();
        cfg.similarity = similarity_from_string(similarity);
        cfg.aggregator = aggregator_from_string(agg);
        cfg.cutoff_strategy = cutoff_strategy_from_string(cutoff);
        cfg.q_metric = quality_from_string(q);
        cfg.train_percent = p;
        cfg.seed = seed;
        cfg.grid_points = grid;
        cfg.refined.n_steps = n_steps;
        cfg.refined.epsilon = epsilon;
        cfg.threads = threads;
        cfg.naive_midpoint = naive_midpoint;
        cfg.check();
        return cfg;
    }
};

void print_report(const RunReport& r) {
    std::printf("classified %zu objects%s\n", r.objects.size(),
                r.inverted ? "  [prediction sense inverted: av1 < av0, training set "
                             "likely insufficient]"
                           : "");
    std::printf("            predicted 1   predicted 0\n");
    std::printf("  truth 1   TP %-10llu FN %llu\n",
                (unsigned long long)r.confusion.tp, (unsigned long long)r.confusion.fn);
    std::printf("  truth 0   FP %-10llu TN %llu\n",
                (unsigned long long)r.confusion.fp, (unsigned long long)r.confusion.tn);
    std::printf("  accuracy %.3f  kappa %.3f  TP/FP %s\n", r.accuracy, r.kappa,
                format_ratio(r.tp_fp_ratio).c_str());
    std::printf("  av1 %.6f  av0 %.6f  q_avg %s\n", r.av1, r.av0,
                std::isnan(r.q_avg_ratio)
                    ? "nan"
                    : (std::isinf(r.q_avg_ratio) ? "inf"
                                                 : csv::format_double(r.q_avg_ratio).c_str()));
    std::fprintf(stderr, "scoring: %.3fs (%.0f objects/sec)\n", r.seconds_scoring,
                 r.objects_per_second);
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& f : csv::split(s, ',')) {
        auto v = csv::parse_double(f);
        if (!v) throw ConfigError("bad number in list: " + f);
        out.push_back(*v);
    }
    return out;
}

std::vector<double> parse_range_or_list(const std::string& s) {
    // a:b:step or comma list
    const auto parts = csv::split(s, ':');
    if (parts.size() == 3) {
        auto a = csv::parse_double(parts[0]);
        auto b = csv::parse_double(parts[1]);
        auto step = csv::parse_double(parts[2]);
        if (!a || !b || !step || !(*step > 0.0) || *b < *a)
            throw ConfigError("bad range: " + s);
        std::vector<double> out;
        for (double v = *a; v <= *b + 1e-12; v += *step) out.push_back(v);
        return out;
    }
    return parse_double_list(s);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coincidence-index defect classification toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "optional key=value config file");
    app.fallthrough();

    // ---- ingest-check ----
    auto* c_ingest = app.add_subcommand("ingest-check", "load a CSV and report its shape");
    auto ingest_in = std::make_shared<InputFlags>();
    ingest_in->add(c_ingest);
    c_ingest->callback([ingest_in] {
        const Dataset d = ingest_in->load();
        std::printf("rows %zu\ncolumns %zu\npositives %zu\n", d.rows(), d.cols(),
                    d.positive_count());
        std::string names;
        for (size_t j = 0; j < d.cols() && j < 8; ++j)
            names += (j ? "," : "") + d.column_names[j];
        if (d.cols() > 8) names += ",...";
        std::printf("column names: %s\n", names.c_str());
    });

    // ---- scale ----
    auto* c_scale = app.add_subcommand("scale", "column-wise z-score scaling");
    auto scale_in = std::make_shared<InputFlags>();
    scale_in->add(c_scale);
    auto scale_out = std::make_shared<std::string>();
    auto scale_params = std::make_shared<std::string>();
    c_scale->add_option("--out", *scale_out, "scaled dataset CSV")->required();
    c_scale->add_option("--params-out", *scale_params, "scaling parameters CSV");
    c_scale->callback([scale_in, scale_out, scale_params] {
        const Dataset d = scale_in->load();
        const ScalingParams s = fit_scaling(d);
        write_csv(apply_scaling(d, s), *scale_out);
        if (!scale_params->empty()) save_scaling(s, d.column_names, *scale_params);
    });

    // ---- reduce ----
    auto* c_reduce = app.add_subcommand("reduce", "sharpness-based column elimination");
    auto reduce_in = std::make_shared<InputFlags>();
    reduce_in->add(c_reduce);
    auto reduce_sharp = std::make_shared<uint64_t>(1);
    auto reduce_out = std::make_shared<std::string>();
    auto reduce_plan_out = std::make_shared<std::string>();
    auto reduce_prescaled = std::make_shared<bool>(false);
    c_reduce->add_option("--reduce-sharpness", *reduce_sharp,
                         "minimum positive rows peaking in a column to keep it");
    c_reduce->add_option("--out", *reduce_out, "reduced (scaled) dataset CSV")->required();
    c_reduce->add_option("--plan-out", *reduce_plan_out, "plan CSV (column,num_occu,kept)");
    c_reduce->add_flag("--assume-scaled", *reduce_prescaled,
                       "input is already auto-scaled; do not rescale");
    c_reduce->callback([reduce_in, reduce_sharp, reduce_out, reduce_plan_out, reduce_prescaled] {
        Dataset d = reduce_in->load();
        if (!*reduce_prescaled) d = apply_scaling(d, fit_scaling(d));
        const ReductionPlan plan = plan_reduction(d, *reduce_sharp);
        if (plan.input_looks_unscaled)
            std::fprintf(stderr, "warning: input does not look auto-scaled\n");
        write_csv(apply_reduction(d, plan), *reduce_out);
        if (!reduce_plan_out->empty()) save_plan(plan, *reduce_plan_out);
        const size_t n = plan.num_occu.size();
        const size_t omitted = n - plan.kept_columns.size();
        std::printf("columns %zu kept %zu omitted %zu (%s%%)\n", n, plan.kept_columns.size(),
                    omitted,
                    format_percent(static_cast<double>(omitted) / static_cast<double>(n))
                        .c_str());
    });

    // ---- train ----
    auto* c_train = app.add_subcommand("train", "fit scaling, draw T, choose the cutoff");
    auto train_in = std::make_shared<InputFlags>();
    train_in->add(c_train);
    auto train_run = std::make_shared<RunFlags>();
    train_run->add(c_train);
    auto train_model_out = std::make_shared<std::string>();
    auto train_curve_out = std::make_shared<std::string>();
    c_train->add_option("--model-out", *train_model_out, "model file to write")->required();
    c_train->add_option("--curve-out", *train_curve_out,
                        "cutoff search curve CSV (grid/refined only)");
    c_train->callback([train_in, train_run, train_model_out, train_curve_out] {
        const Dataset d = train_in->load();
        const TrainOutcome out = train(d, train_run->build());
        save_model(out.model, *train_model_out);
        if (!train_curve_out->empty() && !out.cutoff_search.curve.empty()) {
            std::vector<std::string> lines;
            lines.push_back("cutoff,quality");
            for (const auto& [c, q] : out.cutoff_search.curve)
                lines.push_back(csv::format_double(c) + "," + csv::format_double(q));
            csv::write_lines(*train_curve_out, lines);
        }
        std::printf("trained on %zu of %zu positives  cutoff %s%s  av1 %.6f  av0 %.6f\n",
                    out.model.train_ids.size(), d.positive_count(),
                    csv::format_double(out.model.cutoff).c_str(),
                    out.model.inverted ? " (inverted)" : "", out.model.av1, out.model.av0);
    });

    // ---- predict ----
    auto* c_predict = app.add_subcommand("predict", "score and classify with a saved model");
    auto predict_in = std::make_shared<InputFlags>();
    predict_in->add(c_predict, false);
    auto predict_model = std::make_shared<std::string>();
    auto predict_out = std::make_shared<std::string>();
    auto predict_labeled = std::make_shared<bool>(false);
    auto predict_threads = std::make_shared<size_t>(0);
    c_predict->add_option("--model", *predict_model, "model file")->required();
    c_predict->add_option("--out", *predict_out, "predictions CSV")->required();
    c_predict->add_flag("--labeled", *predict_labeled, "input has a --label-col to read");
    c_predict->add_option("--threads", *predict_threads, "worker threads");
    c_predict->callback([predict_in, predict_model, predict_out, predict_labeled,
                         predict_threads] {
        const Dataset d = predict_in->load(*predict_labeled);
        const TrainedModel model = load_model(*predict_model);
        const RunReport r = evaluate(d, model, *predict_threads);
        std::vector<std::string> lines;
        lines.push_back("id,score,prediction");
        for (const auto& o : r.objects)
            lines.push_back(std::to_string(o.id) + "," + csv::format_double(o.score) + "," +
                            std::to_string(int(o.prediction)));
        csv::write_lines(*predict_out, lines);
        size_t flagged = r.confusion.tp + r.confusion.fp;
        std::printf("predicted %zu of %zu objects positive\n", flagged, r.objects.size());
    });

    // ---- evaluate ----
    auto* c_eval = app.add_subcommand("evaluate", "classify labeled data and report metrics");
    auto eval_in = std::make_shared<InputFlags>();
    eval_in->add(c_eval);
    auto eval_model = std::make_shared<std::string>();
    auto eval_report_out = std::make_shared<std::string>();
    auto eval_scores_out = std::make_shared<std::string>();
    auto eval_threads = std::make_shared<size_t>(0);
    c_eval->add_option("--model", *eval_model, "model file")->required();
    c_eval->add_option("--report-out", *eval_report_out, "per-object CSV");
    c_eval->add_option("--scores-out", *eval_scores_out,
                       "score curve CSV, positives first (figure layout)");
    c_eval->add_option("--threads", *eval_threads, "worker threads");
    c_eval->callback([eval_in, eval_model, eval_report_out, eval_scores_out, eval_threads] {
        const Dataset d = eval_in->load();
        const TrainedModel model = load_model(*eval_model);
        const RunReport r = evaluate(d, model, *eval_threads);
        if (!eval_report_out->empty())
            coindex::detail::write_report_csv(r, *eval_report_out);
        if (!eval_scores_out->empty())
            coindex::detail::write_scores_csv(r, *eval_scores_out);
        print_report(r);
    });

    // ---- identify ----
    auto* c_ident = app.add_subcommand("identify",
                                       "exact identification against all positive objects");
    auto ident_in = std::make_shared<InputFlags>();
    ident_in->add(c_ident);
    auto ident_pred = std::make_shared<PredicateFlags>();
    ident_pred->add(c_ident);
    auto ident_out = std::make_shared<std::string>();
    auto ident_threads = std::make_shared<size_t>(0);
    c_ident->add_option("--out", *ident_out, "per-object CSV (id,predicted,witness)");
    c_ident->add_option("--threads", *ident_threads, "worker threads");
    c_ident->callback([ident_in, ident_pred, ident_out, ident_threads] {
        const Dataset d = ident_in->load();
        const auto results = identify(d, ident_pred->build(), *ident_threads);
        if (!ident_out->empty()) {
            std::vector<std::string> lines;
            lines.push_back("id,predicted,witness");
            for (const auto& r : results)
                lines.push_back(std::to_string(r.id) + "," + std::to_string(int(r.predicted)) +
                                "," + (r.has_witness ? std::to_string(r.witness_id) : ""));
            csv::write_lines(*ident_out, lines);
        }
        size_t flagged = 0;
        for (const auto& r : results) flagged += r.predicted;
        std::printf("identified %zu of %zu non-positive objects as positive\n", flagged,
                    results.size());
    });

    // ---- prolog-gen ----
    auto* c_prolog = app.add_subcommand("prolog-gen",
                                        "emit the implication system as a Prolog program");
    auto prolog_in = std::make_shared<InputFlags>();
    prolog_in->add(c_prolog);
    auto prolog_pred = std::make_shared<PredicateFlags>();
    prolog_pred->add(c_prolog);
    auto prolog_query = std::make_shared<int64_t>(0);
    auto prolog_out = std::make_shared<std::string>();
    c_prolog->add_option("--query-id", *prolog_query, "id of the object under test")->required();
    c_prolog->add_option("--out", *prolog_out, "Prolog file to write")->required();
    c_prolog->callback([prolog_in, prolog_pred, prolog_query, prolog_out] {
        const Dataset d = prolog_in->load();
        const Dataset ds = apply_scaling(d, fit_scaling(d));
        const auto encoded = encode_dataset(ds, prolog_pred->build());
        std::vector<IncidenceVector> positives;
        std::optional<size_t> query_row;
        for (size_t i = 0; i < d.rows(); ++i) {
            if (d.labels[i]) positives.push_back(encoded[i]);
            if (d.ids[i] == *prolog_query) query_row = i;
        }
        if (!query_row)
            throw DataError("query id not found: " + std::to_string(*prolog_query));
        if (positives.empty())
            throw DataError("no positive objects");
        const ImplicationSystem sys = build_system(positives, encoded[*query_row]);
        std::ofstream out(*prolog_out, std::ios::binary);
        if (!out) throw DataError("cannot write " + *prolog_out);
        out << emit_prolog(sys);
        const SolveResult sr = solve(sys);
        std::printf("%s\n", sr.satisfiable ? "satisfiable (query object matches a positive)"
                                           : "unsatisfiable");
    });

    // ---- histogram ----
    auto* c_hist = app.add_subcommand("histogram",
                                      "prototypical positive objects of a trained model");
    auto hist_in = std::make_shared<InputFlags>();
    hist_in->add(c_hist);
    auto hist_model = std::make_shared<std::string>();
    auto hist_out = std::make_shared<std::string>();
    c_hist->add_option("--model", *hist_model, "model file")->required();
    c_hist->add_option("--out", *hist_out, "histogram CSV (train_id,h_percent,n)");
    c_hist->callback([hist_in, hist_model, hist_out] {
        const Dataset d = hist_in->load();
        const TrainedModel model = load_model(*hist_model);
        const RunReport r = evaluate(d, model);
        const PrototypeHistogram h = prototype_histogram(r, model);
        const auto lines = format_histogram(h);
        for (const auto& l : lines) std::printf("%s\n", l.c_str());
        if (!hist_out->empty()) csv::write_lines(*hist_out, lines);
        std::vector<double> counts(model.train_ids.size(), 0.0);
        for (const auto& row : h.rows)
            for (size_t k = 0; k < model.train_ids.size(); ++k)
                if (model.train_ids[k] == row.train_id) counts[k] = static_cast<double>(row.count);
        std::printf("total %llu  gini %.4f\n", (unsigned long long)h.total,
                    gini(counts));
    });

    // ---- sweep ----
    auto* c_sweep = app.add_subcommand("sweep", "experiment grid over t, p and seeds");
    auto sweep_in = std::make_shared<InputFlags>();
    sweep_in->add(c_sweep);
    auto sweep_run = std::make_shared<RunFlags>();
    sweep_run->add(c_sweep);
    auto sweep_t = std::make_shared<std::string>();
    auto sweep_p = std::make_shared<std::string>();
    auto sweep_seeds = std::make_shared<std::string>();
    auto sweep_dir = std::make_shared<std::string>();
    c_sweep->add_option("--t-values", *sweep_t, "t axis: a:b:step or comma list");
    c_sweep->add_option("--p-values", *sweep_p, "p axis: comma list");
    c_sweep->add_option("--seed-values", *sweep_seeds, "seed axis: comma list");
    c_sweep->add_option("--out-dir", *sweep_dir, "output directory")->required();
    c_sweep->callback([sweep_in, sweep_run, sweep_t, sweep_p, sweep_seeds, sweep_dir] {
        ExperimentSpec spec;
        spec.data = sweep_in->load();
        spec.base = sweep_run->build();
        if (!sweep_t->empty()) spec.t_values = parse_range_or_list(*sweep_t);
        if (!sweep_p->empty()) spec.p_values = parse_double_list(*sweep_p);
        if (!sweep_seeds->empty())
            for (double v : parse_double_list(*sweep_seeds))
                spec.seed_values.push_back(static_cast<uint64_t>(v));
        spec.out_dir = *sweep_dir;
        const auto cells = run_experiment(spec);
        std::printf("wrote %zu cells to %s\n", cells.size(), sweep_dir->c_str());
    });

    // ---- gen-synthetic ----
    auto* c_gen = app.add_subcommand("gen-synthetic", "write a planted-archetype batch");
    auto gen_m = std::make_shared<size_t>(1000);
    auto gen_n = std::make_shared<size_t>(100);
    auto gen_rate = std::make_shared<double>(0.05);
    auto gen_arch = std::make_shared<size_t>(2);
    auto gen_arch_cols = std::make_shared<size_t>(20);
    auto gen_arch_mag = std::make_shared<double>(25.0);
    auto gen_noise = std::make_shared<double>(1.0);
    auto gen_outlier_rate = std::make_shared<double>(0.01);
    auto gen_outlier_scale = std::make_shared<double>(100.0);
    auto gen_seed = std::make_shared<uint64_t>(1);
    auto gen_out = std::make_shared<std::string>();
    c_gen->add_option("--m", *gen_m, "rows");
    c_gen->add_option("--n", *gen_n, "columns");
    c_gen->add_option("--defect-rate", *gen_rate, "fraction of defective rows");
    c_gen->add_option("--archetypes", *gen_arch, "number of planted defect signatures");
    c_gen->add_option("--arch-cols", *gen_arch_cols, "columns per archetype");
    c_gen->add_option("--arch-magnitude", *gen_arch_mag, "planted raw value");
    c_gen->add_option("--noise-sigma", *gen_noise, "noise scale (0 = noiseless)");
    c_gen->add_option("--outlier-rate", *gen_outlier_rate, "heavy-tail cell probability");
    c_gen->add_option("--outlier-scale", *gen_outlier_scale, "heavy-tail cell size");
    c_gen->add_option("--seed", *gen_seed, "generator seed");
    c_gen->add_option("--out", *gen_out, "dataset CSV to write")->required();
    c_gen->callback([gen_m, gen_n, gen_rate, gen_arch, gen_arch_cols, gen_arch_mag, gen_noise,
                     gen_outlier_rate, gen_outlier_scale, gen_seed, gen_out] {
        SyntheticSpec spec;
        spec.rows = *gen_m;
        spec.cols = *gen_n;
        spec.defect_rate = *gen_rate;
        spec.noise_sigma = *gen_noise;
        spec.outlier_rate = *gen_outlier_rate;
        spec.outlier_scale = *gen_outlier_scale;
        spec.seed = *gen_seed;
        spec.archetypes =
            make_archetypes(*gen_arch, *gen_arch_cols, *gen_arch_mag, spec.cols, spec.seed);
        const Dataset d = gen_synthetic(spec);
        write_csv(d, *gen_out);
        std::printf("wrote %zu x %zu dataset with %zu positives to %s\n", d.rows(), d.cols(),
                    d.positive_count(), gen_out->c_str());
    });

    // ---- plot ----
    auto* c_plot = app.add_subcommand("plot", "render a curve CSV as a standalone SVG");
    auto plot_curve = std::make_shared<std::string>();
    auto plot_out = std::make_shared<std::string>();
    auto plot_x = std::make_shared<size_t>(0);
    auto plot_y = std::make_shared<size_t>(1);
    auto plot_opts = std::make_shared<PlotOptions>();
    c_plot->add_option("--curve", *plot_curve, "curve CSV")->required();
    c_plot->add_option("--out", *plot_out, "SVG file to write")->required();
    c_plot->add_option("--x-col", *plot_x, "x column index");
    c_plot->add_option("--y-col", *plot_y, "y column index");
    c_plot->add_option("--title", plot_opts->title, "plot title");
    c_plot->add_option("--x-label", plot_opts->x_label, "x axis label");
    c_plot->add_option("--y-label", plot_opts->y_label, "y axis label");
    c_plot->callback([plot_curve, plot_out, plot_x, plot_y, plot_opts] {
        const auto series = load_curve(*plot_curve, *plot_x, *plot_y);
        const std::string svg = render_polyline_svg(series, *plot_opts);
        std::ofstream out(*plot_out, std::ios::binary);
        if (!out) throw DataError("cannot write " + *plot_out);
        out << svg;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
    return 0;
}
