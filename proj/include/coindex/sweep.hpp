#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "coindex/csv.hpp"
#include "coindex/cutoff.hpp"
#include "coindex/dataset.hpp"
#include "coindex/errors.hpp"
#include "coindex/pipeline.hpp"

namespace coindex {

// Cross product of the sweep axes over one dataset. Empty axes fall back to
// the base RunConfig value, so an all-empty spec is a single run.
struct ExperimentSpec {
    Dataset data;
    RunConfig base;
    std::vector<double> t_values;
    std::vector<double> p_values;
    std::vector<uint64_t> seed_values;
    std::string out_dir;
};

struct CellResult {
    double t = 0.0;
    double p = 0.0;
    uint64_t seed = 0;
    RunReport report;
    double cutoff = 0.0;
};

namespace detail {

inline std::string cell_tag(double t, double p, uint64_t seed) {
    return "t" + csv::format_double(t) + "_p" + csv::format_double(p) + "_s" +
           std::to_string(seed);
}

inline void write_report_csv(const RunReport& r, const std::string& path) {
    std::vector<std::string> lines;
    lines.push_back("id,score,prediction,truth");
    for (const auto& o : r.objects)
        lines.push_back(std::to_string(o.id) + "," + csv::format_double(o.score) + "," +
                        std::to_string(int(o.prediction)) + "," + std::to_string(int(o.truth)));
    csv::write_lines(path, lines);
}

// Figure layout: every positive object first, then the negatives, each
// group in dataset order.
inline void write_scores_csv(const RunReport& r, const std::string& path) {
    std::vector<std::string> lines;
    lines.push_back("rank,score,truth");
    size_t rank = 0;
    for (int want = 1; want >= 0; --want)
        for (const auto& o : r.objects)
            if (o.truth == want)
                lines.push_back(std::to_string(rank++) + "," + csv::format_double(o.score) +
                                "," + std::to_string(int(o.truth)));
    csv::write_lines(path, lines);
}

inline void write_curve_csv(const CutoffResult& c, const std::string& path) {
    std::vector<std::string> lines;
    lines.push_back("cutoff,quality");
    for (const auto& [x, q] : c.curve)
        lines.push_back(csv::format_double(x) + "," + csv::format_double(q));
    csv::write_lines(path, lines);
}

inline std::string summary_line(const CellResult& c) {
    const RunReport& r = c.report;
    return csv::format_double(c.t) + "," + csv::format_double(c.p) + "," +
           std::to_string(c.seed) + "," + std::to_string(r.objects.size()) + "," +
           std::to_string(r.confusion.tp) + "," + std::to_string(r.confusion.fp) + "," +
           std::to_string(r.confusion.tn) + "," + std::to_string(r.confusion.fn) + "," +
           csv::format_double(r.accuracy) + "," + csv::format_double(r.kappa) + "," +
           format_ratio(r.tp_fp_ratio) + "," + csv::format_double(r.av0) + "," +
           csv::format_double(r.av1) + "," +
           (std::isnan(r.q_avg_ratio) ? "nan"
                                      : std::isinf(r.q_avg_ratio) ? "inf"
                                                                  : csv::format_double(r.q_avg_ratio)) +
           "," + std::to_string(int(r.inverted)) + "," + csv::format_double(c.cutoff);
}

} // namespace detail

inline std::vector<CellResult> run_experiment(const ExperimentSpec& spec) {
    namespace fs = std::filesystem;
    if (spec.out_dir.empty())
        throw ConfigError("experiment needs an output directory");
    fs::create_directories(spec.out_dir);
    const fs::path dir(spec.out_dir);

    std::vector<double> ts = spec.t_values;
    std::vector<double> ps = spec.p_values;
    std::vector<uint64_t> seeds = spec.seed_values;
    if (ts.empty()) ts.push_back(spec.base.predicate.t);
    if (ps.empty()) ps.push_back(spec.base.train_percent);
    if (seeds.empty()) seeds.push_back(spec.base.seed);
    if (spec.base.predicate.kind == PredicateKind::ref_excess && spec.t_values.size() > 0)
        throw ConfigError("t sweep does not apply to ref_excess predicates");

    std::vector<std::string> manifest;
    std::vector<std::string> summary;
    summary.push_back("t,p,seed,classified,tp,fp,tn,fn,accuracy,kappa,tp_fp,av0,av1,q_avg,"
                      "inverted,cutoff");
    std::vector<CellResult> cells;

    auto flush_manifest = [&] {
        csv::write_lines((dir / "manifest.txt").string(), manifest);
    };

    const auto run_t0 = std::chrono::steady_clock::now();
    for (double p : ps) {
        for (uint64_t seed : seeds) {
            for (double t : ts) {
                RunConfig cfg = spec.base;
                cfg.train_percent = p;
                cfg.seed = seed;
                if (cfg.predicate.kind != PredicateKind::ref_excess) cfg.predicate.t = t;
                const std::string tag = detail::cell_tag(t, p, seed);
                try {
                    const auto t0 = std::chrono::steady_clock::now();
                    TrainOutcome trained = train(spec.data, cfg);
                    RunReport report = evaluate(spec.data, trained.model, cfg.threads);
                    CellResult cell{t, p, seed, std::move(report), trained.model.cutoff};
                    detail::write_report_csv(cell.report, (dir / ("report_" + tag + ".csv")).string());
                    detail::write_scores_csv(cell.report, (dir / ("scores_" + tag + ".csv")).string());
                    if (!trained.cutoff_search.curve.empty())
                        detail::write_curve_csv(trained.cutoff_search,
                                                (dir / ("cutoff_curve_" + tag + ".csv")).string());
                    summary.push_back(detail::summary_line(cell));
                    const double secs = std::chrono::duration<double>(
                                            std::chrono::steady_clock::now() - t0)
                                            .count();
                    manifest.push_back("ok " + tag + " " + std::to_string(secs) + "s");
                    cells.push_back(std::move(cell));
                } catch (const std::exception& e) {
                    manifest.push_back("failed " + tag + ": " + e.what());
                    csv::write_lines((dir / "summary.csv").string(), summary);
                    flush_manifest();
                    throw;
                }
            }
        }
    }

    csv::write_lines((dir / "summary.csv").string(), summary);

    // per (p, seed) curves over t
    if (ts.size() > 1) {
        for (double p : ps) {
            for (uint64_t seed : seeds) {
                std::vector<std::string> lines;
                lines.push_back("t,accuracy,kappa,q_avg,tp_fp");
                for (const auto& c : cells) {
                    if (c.p != p || c.seed != seed) continue;
                    lines.push_back(csv::format_double(c.t) + "," +
                                    csv::format_double(c.report.accuracy) + "," +
                                    csv::format_double(c.report.kappa) + "," +
                                    (std::isfinite(c.report.q_avg_ratio)
                                         ? csv::format_double(c.report.q_avg_ratio)
                                         : std::string(std::isnan(c.report.q_avg_ratio) ? "nan" : "inf")) +
                                    "," +
                                    (std::isfinite(c.report.tp_fp_ratio)
                                         ? csv::format_double(c.report.tp_fp_ratio)
                                         : "inf"));
                }
                csv::write_lines((dir / ("metrics_vs_t_p" + csv::format_double(p) + "_s" +
                                         std::to_string(seed) + ".csv"))
                                     .string(),
                                 lines);
            }
        }
    }

    // per (t, p) kappa spread over seeds
    if (seeds.size() > 1) {
        std::vector<std::string> lines;
        lines.push_back("t,p,kappa_min,kappa_median,kappa_max");
        for (double t : ts) {
            for (double p : ps) {
                std::vector<double> kappas;
                for (const auto& c : cells)
                    if (c.t == t && c.p == p) kappas.push_back(c.report.kappa);
                if (kappas.empty()) continue;
                std::sort(kappas.begin(), kappas.end());
                const double median = kappas.size() % 2
                                          ? kappas[kappas.size() / 2]
                                          : (kappas[kappas.size() / 2 - 1] +
                                             kappas[kappas.size() / 2]) / 2.0;
                lines.push_back(csv::format_double(t) + "," + csv::format_double(p) + "," +
                                csv::format_double(kappas.front()) + "," +
                                csv::format_double(median) + "," +
                                csv::format_double(kappas.back()));
            }
        }
        csv::write_lines((dir / "seed_summary.csv").string(), lines);
    }

    manifest.push_back("total " +
                       std::to_string(std::chrono::duration<double>(
                                          std::chrono::steady_clock::now() - run_t0)
                                          .count()) +
                       "s");
    flush_manifest();
    return cells;
}

} // namespace coindex
