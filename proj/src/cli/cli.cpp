#include "inspectkit/cli/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "inspectkit/analytics/chart.hpp"
#include "inspectkit/analytics/stats.hpp"
#include "inspectkit/bridge/sync.hpp"
#include "inspectkit/classifier/evaluate.hpp"
#include "inspectkit/classifier/model.hpp"
#include "inspectkit/classifier/rules.hpp"
#include "inspectkit/core/error.hpp"
#include "inspectkit/corpus/corpus_csv.hpp"
#include "inspectkit/corpus/corpus_store.hpp"
#include "inspectkit/service/config.hpp"
#include "inspectkit/service/http_service.hpp"

namespace inspectkit::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string corpus;
  std::string config;
  std::string fixtures;
  bool live = false;
};

ServiceConfig resolve_config(const Globals& g) {
  ServiceConfig c = g.config.empty() ? ServiceConfig{} : ServiceConfig::load(g.config);
  if (!g.corpus.empty()) c.corpus_dir = g.corpus;
  if (!g.fixtures.empty()) c.fixture_dir = fs::path(g.fixtures);
  if (g.live) c.live_mode = true;
  auto problems = c.violations();
  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw InvalidArgument(msg);
  }
  return c;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw TransportError("cannot write " + path.string());
  out << content;
  if (!out) throw TransportError("cannot write " + path.string());
}

std::string default_labeler_name() {
  const char* user = std::getenv("USER");
  return user && *user ? user : "cli";
}

std::string fmt_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// Ingests comments and adds assignments whose labels or labeler differ from
// what the corpus already resolves to.
std::size_t merge_into(Corpus& target, const Corpus& source, std::ostream& err) {
  std::vector<InspectionComment> comments;
  for (const auto& [id, c] : source.comments()) comments.push_back(c);
  auto result = target.ingest(comments, source.provenance_map());
  for (const auto& [id, why] : result.violations) err << "rejected " << id << ": " << why << "\n";
  std::size_t relabelled = 0;
  for (const auto& [id, c] : source.comments()) {
    const LabelAssignment* incoming = source.effective_assignment(id);
    if (!incoming || !target.find(id)) continue;
    const LabelAssignment* current = target.effective_assignment(id);
    if (current && current->labels == incoming->labels && current->labeler == incoming->labeler) continue;
    target.append_assignment(*incoming);
    ++relabelled;
  }
  return result.added;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inspection comment toolkit: relay design comments, label, analyse."};
  app.name("inspectkit");
  app.require_subcommand(1);
  app.set_version_flag("--version", "inspectkit 1.0.0");

  Globals g;
  app.add_option("--corpus", g.corpus, "Corpus directory (default: corpus)");
  app.add_option("--config", g.config, "JSON configuration file");
  app.add_option("--fixtures", g.fixtures, "Fixture directory replacing the live APIs");
  app.add_flag("--live", g.live, "Use the live APIs (tokens from the environment)");

  std::function<int()> action;

  // sync
  auto* sync_cmd = app.add_subcommand("sync", "Relay design-tool comments into a pull request");
  std::string project, repo;
  int pr = 0;
  bool no_collect = false;
  std::optional<int> year;
  std::string group = "G1";
  sync_cmd->add_option("--project", project, "Design-tool project id")->required();
  sync_cmd->add_option("--repo", repo, "Code-host repository")->required();
  sync_cmd->add_option("--pr", pr, "Pull request number")->required()->check(CLI::PositiveNumber);
  sync_cmd->add_option("--fixtures", g.fixtures, "Fixture directory");
  sync_cmd->add_flag("--no-collect", no_collect, "Do not ingest the PR comments afterwards");
  sync_cmd->add_option("--year", year, "Year recorded for collected comments");
  sync_cmd->add_option("--group", group, "Group recorded for collected comments");
  sync_cmd->callback([&] {
    action = [&]() -> int {
      ServiceConfig cfg = resolve_config(g);
      auto design = cfg.make_design_transport();
      auto host = cfg.make_code_host_transport();
      auto store = cfg.make_image_store(repo);
      SyncOptions opts;
      opts.image_ref = cfg.image_ref_name;
      opts.image_url_base = cfg.image_url_base;
      if (cfg.live_mode) opts.publish.backoff = jittered_backoff(std::chrono::milliseconds(200));
      SyncReport report = sync(project, repo, pr, *design, *host, *store, opts);
      out << "fetched=" << report.fetched << " published=" << report.published_images
          << " posted=" << report.posted_comments << " skipped=" << report.skipped_duplicates
          << " failures=" << report.failures.size() << "\n";
      for (const auto& f : report.failures) out << "  failed " << f.remote_id << ": " << f.reason << "\n";
      if (!no_collect) {
        CollectOptions copts;
        copts.year = year;
        copts.group = group;
        CodeHostFetch fetched = fetch_code_host_comments(repo, pr, *host, copts);
        for (const auto& w : fetched.warnings) err << "warning: " << w << "\n";
        auto added = CorpusStore(cfg.corpus_dir).modify([&](Corpus& corpus) {
          auto r = corpus.ingest(fetched.comments, fetched.provenance);
          for (const auto& [id, why] : r.violations) err << "rejected " << id << ": " << why << "\n";
          return r.added;
        });
        out << "collected=" << fetched.comments.size() << " added=" << added << "\n";
      }
      return report.failures.empty() ? kExitOk : kExitFailure;
    };
  });

  // collect
  auto* collect_cmd = app.add_subcommand("collect", "Ingest all comments of a pull request into the corpus");
  collect_cmd->add_option("--repo", repo, "Code-host repository")->required();
  collect_cmd->add_option("--pr", pr, "Pull request number")->required()->check(CLI::PositiveNumber);
  collect_cmd->add_option("--year", year, "Year recorded for the comments");
  collect_cmd->add_option("--group", group, "Group recorded for the comments");
  collect_cmd->callback([&] {
    action = [&]() -> int {
      ServiceConfig cfg = resolve_config(g);
      auto host = cfg.make_code_host_transport();
      CollectOptions copts;
      copts.year = year;
      copts.group = group;
      CodeHostFetch fetched = fetch_code_host_comments(repo, pr, *host, copts);
      for (const auto& w : fetched.warnings) err << "warning: " << w << "\n";
      std::size_t rejected = 0;
      auto added = CorpusStore(cfg.corpus_dir).modify([&](Corpus& corpus) {
        auto r = corpus.ingest(fetched.comments, fetched.provenance);
        for (const auto& [id, why] : r.violations) err << "rejected " << id << ": " << why << "\n";
        rejected = r.violations.size();
        return r.added;
      });
      out << "collected=" << fetched.comments.size() << " added=" << added << "\n";
      return rejected ? kExitFailure : kExitOk;
    };
  });

  // import
  auto* import_cmd = app.add_subcommand("import", "Merge a corpus CSV into the corpus");
  std::string source;
  import_cmd->add_option("csv", source, "CSV file with the canonical header")->required();
  import_cmd->callback([&] {
    action = [&]() -> int {
      ServiceConfig cfg = resolve_config(g);
      Corpus incoming = import_csv(source);
      auto added = CorpusStore(cfg.corpus_dir).modify([&](Corpus& corpus) { return merge_into(corpus, incoming, err); });
      out << "imported=" << incoming.size() << " added=" << added << "\n";
      return kExitOk;
    };
  });

  // export
  auto* export_cmd = app.add_subcommand("export", "Write the corpus as CSV");
  std::string out_path;
  export_cmd->add_option("--out", out_path, "Destination file")->required();
  export_cmd->callback([&] {
    action = [&]() -> int {
      ServiceConfig cfg = resolve_config(g);
      Corpus corpus = CorpusStore(cfg.corpus_dir).load();
      std::size_t rows = export_csv(corpus, out_path);
      out << "exported " << rows << " rows to " << out_path << "\n";
      return kExitOk;
    };
  });

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Per-group category counts and shares");
  std::optional<std::string> stats_group;
  std::string svg_path;
  bool as_json = false;
  stats_cmd->add_option("--year", year, "Restrict to one year");
  stats_cmd->add_option("--group", stats_group, "Restrict to one group (requires --year)");
  stats_cmd->add_option("--svg", svg_path, "Write a grouped bar chart");
  stats_cmd->add_flag("--json", as_json, "Print JSON instead of a table");
  stats_cmd->callback([&] {
    action = [&]() -> int {
      if (stats_group && !year) throw CLI::ValidationError("--group requires --year");
      ServiceConfig cfg = resolve_config(g);
      Corpus corpus = CorpusStore(cfg.corpus_dir).load();
      std::vector<GroupStats> stats;
      if (year && stats_group) {
        stats.push_back(compute_stats(corpus, *year, *stats_group));
      } else {
        for (auto& s : compute_all_stats(corpus)) {
          if (!year || s.year == *year) stats.push_back(std::move(s));
        }
      }
      if (!svg_path.empty()) write_file(svg_path, render_svg_bar_chart(chart_from_stats(stats)));
      if (as_json) {
        out << stats_to_json(stats) << "\n";
        return kExitOk;
      }
      if (stats.size() == 1) {
        out << format_group_detail(stats.front());
      } else {
        out << format_stats_table(stats);
      }
      out << "comments per year:";
      auto totals = yearly_comment_totals(corpus);
      for (auto it = totals.rbegin(); it != totals.rend(); ++it) {
        if (!year || it->first == *year) out << " " << it->first << "=" << it->second;
      }
      out << "\n";
      for (const auto& f : trend_flags(stats, cfg.trend_rules)) {
        out << "flag " << f.year << f.group << " " << slug(f.category) << " " << fmt_score(f.share)
            << " >= " << fmt_score(f.threshold) << ": " << f.message << "\n";
      }
      if (!svg_path.empty()) out << "wrote " << svg_path << "\n";
      return kExitOk;
    };
  });

  // label
  auto* label_cmd = app.add_subcommand("label", "Record a human label assignment");
  std::string comment_id, slugs, labeler_name = default_labeler_name();
  label_cmd->add_option("comment-id", comment_id, "Comment id")->required();
  label_cmd->add_option("labels", slugs, "Comma-separated category slugs")->required();
  label_cmd->add_option("--labeler", labeler_name, "Name recorded with the assignment");
  label_cmd->callback([&] {
    action = [&]() -> int {
      ServiceConfig cfg = resolve_config(g);
      LabelSet labels = LabelSet::parse(slugs, ',');
      if (labels.empty()) throw InvalidArgument("empty label set");
      auto a = CorpusStore(cfg.corpus_dir).modify([&](Corpus& corpus) {
        return corpus.assign_labels(comment_id, labels, Labeler::human(labeler_name));
      });
      out << a.comment_id << " <- " << a.labels.join() << " (" << a.labeler.to_string() << ")\n";
      return kExitOk;
    };
  });

  // train
  auto* train_cmd = app.add_subcommand("train", "Fit the classifier on labelled comments");
  std::string model_out, version = "v1";
  std::size_t folds = 0;
  train_cmd->add_option("--out", model_out, "Model file (default: <corpus>/model.json)");
  train_cmd->add_option("--version", version, "Model version label");
  train_cmd->add_option("--evaluate", folds, "Also report k-fold cross-validation");
  train_cmd->callback([&] {
    action = [&]() -> int {
      ServiceConfig cfg = resolve_config(g);
      Corpus corpus = CorpusStore(cfg.corpus_dir).load();
      auto examples = training_examples(corpus);
      MultiLabelModel model = train(examples, version);
      fs::path path = model_out.empty() ? cfg.model_path() : fs::path(model_out);
      save_model(model, path);
      out << "trained " << model.version << " on " << examples.size() << " comments, vocabulary "
          << model.vocabulary.size() << ", wrote " << path.string() << "\n";
      if (folds) {
        EvaluationReport r = evaluate(examples, folds);
        for (std::size_t c = 0; c < kCategoryCount; ++c) {
          const auto& m = r.per_category[c];
          out << "  " << slug(category_at(c)) << " f1=" << (m.f1 ? fmt_score(*m.f1) : "undefined") << "\n";
        }
        out << "macro_f1=" << fmt_score(r.macro_f1) << " folds=" << r.folds << "\n";
      }
      return kExitOk;
    };
  });

  // suggest
  auto* suggest_cmd = app.add_subcommand("suggest", "Classifier scores for one comment");
  std::string model_in;
  bool use_rules = false;
  suggest_cmd->add_option("comment-id", comment_id, "Comment id")->required();
  suggest_cmd->add_option("--model", model_in, "Model file (default: <corpus>/model.json)");
  suggest_cmd->add_flag("--rules", use_rules, "Use the keyword rule baseline instead of the model");
  suggest_cmd->callback([&] {
    action = [&]() -> int {
      ServiceConfig cfg = resolve_config(g);
      Corpus corpus = CorpusStore(cfg.corpus_dir).load();
      const InspectionComment* c = corpus.find(comment_id);
      if (!c) throw NotFound("unknown comment id: " + comment_id);
      if (use_rules) {
        KeywordRules rules = cfg.rules_file ? KeywordRules::load(*cfg.rules_file) : KeywordRules::defaults();
        out << "labels=" << rule_baseline(*c, rules).labels.join() << "\n";
        return kExitOk;
      }
      MultiLabelModel model = load_model(model_in.empty() ? cfg.model_path() : fs::path(model_in));
      LabelAssignment a = predict(model, *c);
      for (std::size_t i = 0; i < kCategoryCount; ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%-20s %s%s\n", std::string(slug(category_at(i))).c_str(),
                      fmt_score((*a.scores)[i]).c_str(), a.labels.contains(category_at(i)) ? " *" : "");
        out << buf;
      }
      out << "labels=" << a.labels.join() << "\n";
      return kExitOk;
    };
  });

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve the JSON API (and the triage UI if configured)");
  std::string listen, static_dir;
  serve_cmd->add_option("--listen", listen, "host:port");
  serve_cmd->add_option("--static", static_dir, "Directory served at /");
  serve_cmd->callback([&] {
    action = [&]() -> int {
      ServiceConfig cfg = g.config.empty() ? ServiceConfig{} : ServiceConfig::load(g.config);
      if (!listen.empty()) cfg.listen_address = listen;
      if (!static_dir.empty()) cfg.static_dir = fs::path(static_dir);
      if (!g.corpus.empty()) cfg.corpus_dir = g.corpus;
      if (!g.fixtures.empty()) cfg.fixture_dir = fs::path(g.fixtures);
      if (g.live) cfg.live_mode = true;
      auto problems = cfg.violations();
      if (!problems.empty()) throw InvalidArgument("invalid configuration: " + problems.front());
      InspectService service(cfg);
      out << "listening on " << cfg.listen_address << "\n" << std::flush;
      if (!service.listen()) throw TransportError("cannot listen on " + cfg.listen_address);
      return kExitOk;
    };
  });

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("inspectkit");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return action ? action() : kExitUsage;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace inspectkit::cli
