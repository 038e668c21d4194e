#pragma once

#include <atomic>
#include <memory>
#include <stdexcept>
#include <string>

#include "cgoracle/database.hpp"
#include "cgoracle/query.hpp"

namespace httplib {
class Server;
}

namespace cgoracle {

class ServerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ServerOptions {
  QueryOptions query;
  std::size_t worker_threads = 32;
};

/// HTTP front end over a GraphDatabase.
///
///   GET  /query/{file,source,dest,cutoff,reachable,top}
///   GET  /stats
///   POST /admin/ingest?path=DIR[&mode=strict|skip]
///   POST /admin/snapshot?action=save|load&path=FILE
///
/// Successful replies are 200 with the structured (text/plain) or html
/// (text/html) render. Unknown kinds and bad field sets are 400 with an
/// `error` header line; the connection stays usable.
class QueryServer {
 public:
  QueryServer(GraphDatabase& db, ServerOptions options = {});
  ~QueryServer();

  QueryServer(const QueryServer&) = delete;
  QueryServer& operator=(const QueryServer&) = delete;

  /// Binds; port 0 picks a free port. Throws ServerError on failure.
  int bind(const std::string& address, int port);
  /// Serves until stop(); in-flight requests finish before it returns.
  void listen();
  /// Blocks until listen() is accepting (or has already returned).
  void wait_until_ready() const;
  void stop();
  bool running() const;

 private:
  void install_routes();

  GraphDatabase& db_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace cgoracle
