#pragma once

#include <memory>
#include <string>

#include "softbody/session.hpp"

namespace softbody {

struct ServerOptions {
  std::string address = "0.0.0.0";
  unsigned short port = 8080;  // 0 picks a free port
  std::string path = "/session";
  double tick_rate = 60.0;     // ticks per second of wall time
  double dt = kDefaultDt;      // simulated seconds per tick
};

/// Web-socket front end for one session. A single controlling client at a time steers the
/// simulation; further clients get a "busy" error and are closed. Frames are broadcast at
/// the tick rate; a slow client only ever receives the newest frame.
class SessionServer {
 public:
  SessionServer(Session& session, ServerOptions options);
  ~SessionServer();

  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  /// Binds and starts the network and simulation threads. Throws BindError.
  void start();
  /// Closes the listener and every connection, then joins the threads.
  void stop();

  unsigned short port() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace softbody
