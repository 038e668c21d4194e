#include "cgoracle/server.hpp"

#include <httplib.h>

#include <map>

#include "cgoracle/snapshot.hpp"

namespace cgoracle {
namespace {

std::multimap<std::string, std::string> to_params(const httplib::Params& params) {
  return {params.begin(), params.end()};
}

void reply_error(httplib::Response& res, int status, std::string_view kind,
                 std::string_view message) {
  res.status = status;
  res.set_content(render_error(kind, message), "text/plain");
}

const char* content_type(RenderFormat render) {
  return render == RenderFormat::html ? "text/html; charset=utf-8" : "text/plain";
}

}  // namespace

QueryServer::QueryServer(GraphDatabase& db, ServerOptions options)
    : db_(db), options_(options), http_(std::make_unique<httplib::Server>()) {
  const auto threads = options_.worker_threads;
  http_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  // No SO_REUSEPORT: a second server on a busy port must fail to bind.
  http_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  install_routes();
}

QueryServer::~QueryServer() { stop(); }

void QueryServer::install_routes() {
  auto query = [this](const httplib::Request& req, httplib::Response& res,
                      std::string_view kind) {
    try {
      const QueryRequest request = request_from_params(kind, to_params(req.params));
      const QueryResult result = handle(db_, request, options_.query);
      res.set_content(render(request, result), content_type(request.render));
    } catch (const ProtocolError& e) {
      reply_error(res, 404, "protocol", e.what());
    } catch (const ValidationError& e) {
      reply_error(res, 400, "validation", e.what());
    } catch (const std::exception& e) {
      reply_error(res, 500, "internal", e.what());
    }
  };

  http_->Get(R"(/query/([^/]+))", [query](const httplib::Request& req, httplib::Response& res) {
    query(req, res, req.matches[1].str());
  });
  http_->Get("/stats", [query](const httplib::Request& req, httplib::Response& res) {
    query(req, res, "stats");
  });

  http_->Post("/admin/ingest", [this](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("path")) return reply_error(res, 400, "validation", "missing 'path'");
    const auto mode_text = req.has_param("mode") ? req.get_param_value("mode") : "skip";
    if (mode_text != "strict" && mode_text != "skip") {
      return reply_error(res, 400, "validation", "mode must be strict or skip");
    }
    try {
      const auto report = db_.ingest(req.get_param_value("path"),
                                     mode_text == "strict" ? IngestMode::strict : IngestMode::skip);
      std::string body = "ingest " + std::to_string(report.files_parsed) + " " +
                         std::to_string(report.edges_emitted) + " " +
                         std::to_string(report.parse_errors.size()) + " " +
                         std::to_string(db_.stats().version) + "\n";
      for (const auto& e : report.parse_errors) {
        body += e.file + ":" + std::to_string(e.line) + ":" + std::to_string(e.column) + ": " +
                e.message + "\n";
      }
      res.set_content(body, "text/plain");
    } catch (const std::exception& e) {
      reply_error(res, 422, "input", e.what());
    }
  });

  http_->Post("/admin/snapshot", [this](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("path") || !req.has_param("action")) {
      return reply_error(res, 400, "validation", "need 'action' and 'path'");
    }
    const auto action = req.get_param_value("action");
    const auto path = req.get_param_value("path");
    try {
      if (action == "save") {
        db_.save(path);
      } else if (action == "load") {
        db_.load(path);
      } else {
        return reply_error(res, 400, "validation", "action must be save or load");
      }
      res.set_content("snapshot " + action + " " + std::to_string(db_.stats().version) + "\n",
                      "text/plain");
    } catch (const std::exception& e) {
      reply_error(res, 422, "input", e.what());
    }
  });
}

int QueryServer::bind(const std::string& address, int port) {
  int bound = port;
  if (port == 0) {
    bound = http_->bind_to_any_port(address);
  } else if (!http_->bind_to_port(address, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw ServerError("cannot bind " + address + ":" + std::to_string(port));
  }
  return bound;
}

void QueryServer::listen() { http_->listen_after_bind(); }

void QueryServer::wait_until_ready() const { http_->wait_until_ready(); }

void QueryServer::stop() {
  if (http_) http_->stop();
}

bool QueryServer::running() const { return http_->is_running(); }

}  // namespace cgoracle
