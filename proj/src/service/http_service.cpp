#include "inspectkit/service/http_service.hpp"

#include <array>
#include <charconv>

#include <httplib.h>
#include <json.hpp>

#include "inspectkit/analytics/chart.hpp"
#include "inspectkit/bridge/object_store.hpp"
#include "inspectkit/core/error.hpp"
#include "inspectkit/service/views.hpp"

namespace inspectkit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct FileStamp {
  bool exists = false;
  fs::file_time_type mtime{};
  std::uintmax_t size = 0;
  friend bool operator==(const FileStamp&, const FileStamp&) = default;
};

FileStamp stamp_of(const fs::path& p) {
  std::error_code ec;
  FileStamp s;
  auto status = fs::status(p, ec);
  if (ec || !fs::is_regular_file(status)) return s;
  s.exists = true;
  s.mtime = fs::last_write_time(p, ec);
  s.size = fs::file_size(p, ec);
  return s;
}

class HttpError : public Error {
 public:
  HttpError(int status, const std::string& what) : Error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename F>
httplib::Server::Handler guarded(F&& handler) {
  return [handler = std::forward<F>(handler)](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const HttpError& e) {
      send_json(res, {{"error", e.what()}}, e.status());
    } catch (const NotFound& e) {
      send_json(res, {{"error", e.what()}}, 404);
    } catch (const Conflict& e) {
      send_json(res, {{"error", e.what()}}, 409);
    } catch (const InvalidArgument& e) {
      send_json(res, {{"error", e.what()}}, 422);
    } catch (const ParseError& e) {
      send_json(res, {{"error", e.what()}}, 400);
    } catch (const std::exception& e) {
      send_json(res, {{"error", e.what()}}, 500);
    }
  };
}

}  // namespace

struct InspectService::Snapshot {
  Corpus corpus;
  std::array<FileStamp, 3> stamps;
};

struct InspectService::ModelCache {
  FileStamp stamp;
  std::shared_ptr<const MultiLabelModel> model;
};

InspectService::InspectService(ServiceConfig config)
    : config_(std::move(config)),
      store_(config_.corpus_dir),
      server_(std::make_unique<httplib::Server>()),
      model_cache_(std::make_unique<ModelCache>()) {
  install_routes();
}

InspectService::~InspectService() { stop(); }

bool InspectService::listen() {
  auto [host, port] = config_.listen_endpoint();
  return server_->listen(host, port);
}

int InspectService::bind_to_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool InspectService::listen_after_bind() { return server_->listen_after_bind(); }

void InspectService::stop() {
  if (server_) server_->stop();
}

void InspectService::wait_until_ready() const { server_->wait_until_ready(); }

std::shared_ptr<const InspectService::Snapshot> InspectService::snapshot() {
  std::array<FileStamp, 3> now{stamp_of(store_.csv_path()), stamp_of(store_.assignments_path()),
                               stamp_of(store_.threads_path())};
  {
    std::shared_lock lock(snapshot_mu_);
    if (snapshot_ && snapshot_->stamps == now) return snapshot_;
  }
  std::unique_lock lock(snapshot_mu_);
  if (snapshot_ && snapshot_->stamps == now) return snapshot_;
  auto fresh = std::make_shared<Snapshot>();
  fresh->corpus = store_.load();
  fresh->stamps = now;
  snapshot_ = fresh;
  return snapshot_;
}

void InspectService::invalidate() {
  std::unique_lock lock(snapshot_mu_);
  snapshot_.reset();
}

std::shared_ptr<const MultiLabelModel> InspectService::model() {
  fs::path path = config_.model_path();
  FileStamp now = stamp_of(path);
  std::lock_guard lock(model_mu_);
  if (!now.exists) throw NotFound("no model");
  if (!model_cache_->model || !(model_cache_->stamp == now)) {
    model_cache_->model = std::make_shared<const MultiLabelModel>(load_model(path));
    model_cache_->stamp = now;
  }
  return model_cache_->model;
}

void InspectService::install_routes() {
  httplib::Server& srv = *server_;

  srv.Get("/api/taxonomy", guarded([](const httplib::Request&, httplib::Response& res) {
            send_json(res, views::taxonomy());
          }));

  srv.Get("/api/comments", guarded([this](const httplib::Request& req, httplib::Response& res) {
            std::optional<int> year;
            if (req.has_param("year")) {
              std::string y = req.get_param_value("year");
              int v = 0;
              auto [p, ec] = std::from_chars(y.data(), y.data() + y.size(), v);
              if (ec != std::errc() || p != y.data() + y.size()) throw HttpError(400, "invalid year: " + y);
              year = v;
            }
            std::optional<std::string> group;
            if (req.has_param("group")) group = req.get_param_value("group");
            bool unlabeled = false;
            if (req.has_param("unlabeled")) {
              std::string u = req.get_param_value("unlabeled");
              unlabeled = u.empty() || u == "1" || u == "true";
            }
            auto snap = snapshot();
            json out = json::array();
            for (const auto& [id, c] : snap->corpus.comments()) {
              if (year && c.year != *year) continue;
              if (group && c.group != *group) continue;
              if (unlabeled && snap->corpus.effective_labels(id)) continue;
              out.push_back(views::comment(snap->corpus, c));
            }
            send_json(res, out);
          }));

  srv.Get(R"(/api/comments/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
            std::string id = req.matches[1];
            auto snap = snapshot();
            const InspectionComment* c = snap->corpus.find(id);
            if (!c) throw NotFound("unknown comment id: " + id);
            send_json(res, views::comment(snap->corpus, *c));
          }));

  srv.Post(R"(/api/comments/([^/]+)/labels)",
           guarded([this](const httplib::Request& req, httplib::Response& res) {
             std::string id = req.matches[1];
             json body;
             try {
               body = json::parse(req.body);
             } catch (const json::parse_error& e) {
               throw HttpError(400, std::string("invalid JSON: ") + e.what());
             }
             if (!body.is_object() || !body.contains("labels") || !body["labels"].is_array()) {
               throw HttpError(422, "expected {\"labels\": [...]}");
             }
             LabelSet labels;
             for (const auto& l : body["labels"]) {
               if (!l.is_string()) throw HttpError(422, "labels must be strings");
               auto cat = parse_category(l.get<std::string>());
               if (!cat) throw HttpError(422, "unknown label: " + l.get<std::string>());
               labels.insert(*cat);
             }
             if (labels.empty()) throw HttpError(422, "empty label set");
             std::string who = "triage";
             if (body.contains("labeler")) {
               if (!body["labeler"].is_string() || body["labeler"].get<std::string>().empty()) {
                 throw HttpError(422, "labeler must be a non-empty string");
               }
               who = body["labeler"].get<std::string>();
             }
             LabelAssignment recorded = store_.modify([&](Corpus& corpus) {
               return corpus.assign_labels(id, labels, Labeler::human(who));
             });
             invalidate();
             send_json(res, views::assignment(recorded));
           }));

  srv.Get(R"(/api/suggestions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
            std::string id = req.matches[1];
            auto snap = snapshot();
            const InspectionComment* c = snap->corpus.find(id);
            if (!c) throw NotFound("unknown comment id: " + id);
            auto m = model();
            send_json(res, views::suggestion(predict(*m, *c)));
          }));

  srv.Get("/api/stats", guarded([this](const httplib::Request&, httplib::Response& res) {
            auto snap = snapshot();
            res.set_content(stats_to_json(compute_all_stats(snap->corpus)), "application/json");
          }));

  srv.Get("/api/chart", guarded([this](const httplib::Request&, httplib::Response& res) {
            auto snap = snapshot();
            res.set_content(chart_to_json(percentage_chart_data(snap->corpus)), "application/json");
          }));

  srv.Get("/api/flags", guarded([this](const httplib::Request&, httplib::Response& res) {
            auto snap = snapshot();
            send_json(res, views::flags(trend_flags(compute_all_stats(snap->corpus), config_.trend_rules)));
          }));

  srv.Get(R"(/api/images/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
            std::string id = req.matches[1];
            auto snap = snapshot();
            if (!snap->corpus.find(id)) throw NotFound("unknown comment id: " + id);
            const Provenance* p = snap->corpus.provenance(id);
            if (!p || p->image_path.empty()) throw NotFound("no image for " + id);
            if (config_.fixture_dir && !fs::is_directory(fixture_image_store_dir(*config_.fixture_dir, p->repo))) {
              throw NotFound("no image store for " + p->repo);
            }
            auto store = config_.make_image_store(p->repo);
            auto head = store->read_ref(config_.image_ref_name);
            if (!head) throw NotFound("image ref missing");
            auto blob = git::lookup_path(*store, store->read_commit(*head).tree, p->image_path);
            if (!blob) throw NotFound("image not published: " + p->image_path);
            res.set_content(store->read_blob(*blob), "image/png");
          }));

  if (config_.static_dir) srv.set_mount_point("/", config_.static_dir->string());
}

}  // namespace inspectkit
