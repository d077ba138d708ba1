#include "softbody/server.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <spdlog/spdlog.h>

#include "softbody/protocol.hpp"

namespace softbody {
namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

class Connection;

}  // namespace

struct SessionServer::Impl {
  Impl(Session& s, ServerOptions o) : session(s), options(std::move(o)) {}

  void accept();
  void deliver(std::shared_ptr<const FrameSnapshot> snapshot);
  void loop();

  Session& session;
  ServerOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::optional<net::executor_work_guard<net::io_context::executor_type>> work;

  // io thread only
  std::weak_ptr<Connection> controller;
  std::vector<std::weak_ptr<Connection>> connections;
  std::shared_ptr<const FrameSnapshot> latest;

  std::thread io_thread;
  std::thread loop_thread;
  std::mutex stop_mutex;
  std::condition_variable stop_cv;
  bool stopping = false;
  bool started = false;
  unsigned short bound_port = 0;
};

namespace {

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, SessionServer::Impl& server)
      : ws_(std::move(socket)), server_(server) {}

  void run() {
    beast::get_lowest_layer(ws_).expires_after(std::chrono::seconds(30));
    http::async_read(ws_.next_layer(), buffer_, request_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_request(ec); });
  }

  void deliver(const std::shared_ptr<const FrameSnapshot>& snapshot) {
    if (!open_ || closing_) return;
    for (const auto& event : snapshot->events) outbox_.push_back(protocol::encode_event(event));
    if (snapshot->topology_changed) needs_topology_ = true;
    pending_frame_ = snapshot;
    flush();
  }

  void send(std::string message) {
    outbox_.push_back(std::move(message));
    flush();
  }

  void shutdown() {
    closing_ = true;
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ec);
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  void on_request(beast::error_code ec) {
    if (ec) return;
    if (!websocket::is_upgrade(request_) || request_.target() != server_.options.path) {
      auto res = std::make_shared<http::response<http::string_body>>(http::status::not_found, request_.version());
      res->set(http::field::content_type, "text/plain");
      res->body() = "websocket endpoint is " + server_.options.path + "\n";
      res->prepare_payload();
      http::async_write(ws_.next_layer(), *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
        self->shutdown();
      });
      return;
    }
    beast::get_lowest_layer(ws_).expires_never();
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(request_, [self = shared_from_this()](beast::error_code accept_ec) { self->on_accept(accept_ec); });
  }

  void on_accept(beast::error_code ec) {
    if (ec) return;
    open_ = true;
    if (server_.controller.lock()) {
      closing_ = true;
      outbox_.push_back(protocol::encode_error("busy", "another client is already controlling this session"));
      flush();
      return;
    }
    controller_ = true;
    server_.controller = weak_from_this();
    if (server_.latest) outbox_.push_back(protocol::encode_state(*server_.latest));
    flush();
    read();
  }

  void read() {
    ws_.async_read(read_buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
  }

  void on_read(beast::error_code ec) {
    if (ec) {
      release();
      return;
    }
    const std::string text = beast::buffers_to_string(read_buffer_.data());
    read_buffer_.consume(read_buffer_.size());
    try {
      server_.session.post(protocol::decode_client(text));
    } catch (const Error& e) {
      send(protocol::encode_error(error_code_name(e.code()), e.what()));
    }
    read();
  }

  void release() {
    open_ = false;
    if (controller_ && server_.controller.lock().get() == this) server_.controller.reset();
    controller_ = false;
  }

  void flush() {
    if (writing_ || !open_) return;
    if (!outbox_.empty()) {
      current_ = std::move(outbox_.front());
      outbox_.pop_front();
    } else if (pending_frame_) {
      auto frame = std::move(pending_frame_);
      pending_frame_.reset();
      if (!(frame->t > last_t_)) return;
      last_t_ = frame->t;
      current_ = protocol::encode_frame(*frame, needs_topology_);
      needs_topology_ = false;
    } else {
      if (closing_) {
        open_ = false;
        ws_.async_close(websocket::close_code::try_again_later,
                        [self = shared_from_this()](beast::error_code) {});
      }
      return;
    }
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(current_), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->writing_ = false;
      if (ec) {
        self->release();
        return;
      }
      self->flush();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  SessionServer::Impl& server_;
  beast::flat_buffer buffer_;
  beast::flat_buffer read_buffer_;
  http::request<http::string_body> request_;

  std::deque<std::string> outbox_;  // never dropped
  std::shared_ptr<const FrameSnapshot> pending_frame_;  // replaced by newer frames
  std::string current_;
  double last_t_ = -std::numeric_limits<double>::infinity();
  bool writing_ = false;
  bool open_ = false;
  bool closing_ = false;
  bool controller_ = false;
  bool needs_topology_ = true;
};

}  // namespace

void SessionServer::Impl::accept() {
  acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;  // acceptor closed
    auto conn = std::make_shared<Connection>(std::move(socket), *this);
    std::erase_if(connections, [](const auto& w) { return w.expired(); });
    connections.push_back(conn);
    conn->run();
    accept();
  });
}

void SessionServer::Impl::deliver(std::shared_ptr<const FrameSnapshot> snapshot) {
  latest = snapshot;
  if (auto c = controller.lock()) c->deliver(snapshot);
}

void SessionServer::Impl::loop() {
  using clock = std::chrono::steady_clock;
  const auto period = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(1.0 / options.tick_rate));
  auto next = clock::now();
  while (true) {
    {
      std::unique_lock lock(stop_mutex);
      if (stop_cv.wait_until(lock, next, [this] { return stopping; })) return;
    }
    std::shared_ptr<const FrameSnapshot> snapshot;
    try {
      snapshot = std::make_shared<const FrameSnapshot>(session.tick(options.dt));
    } catch (const std::exception& e) {
      spdlog::error("session tick failed: {}", e.what());
      continue;
    }
    net::post(ioc, [this, snapshot] { deliver(snapshot); });
    next += period;
    if (next < clock::now()) next = clock::now();
  }
}

SessionServer::SessionServer(Session& session, ServerOptions options)
    : impl_(std::make_unique<Impl>(session, std::move(options))) {}

SessionServer::~SessionServer() { stop(); }

void SessionServer::start() {
  if (impl_->started) return;
  beast::error_code ec;
  const auto address = net::ip::make_address(impl_->options.address, ec);
  if (ec) throw Error(ErrorCode::BindError, "bad listen address '" + impl_->options.address + "'");
  const tcp::endpoint endpoint{address, impl_->options.port};
  auto& acceptor = impl_->acceptor;
  acceptor.open(endpoint.protocol(), ec);
  if (!ec) acceptor.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) acceptor.bind(endpoint, ec);
  if (!ec) acceptor.listen(net::socket_base::max_listen_connections, ec);
  if (ec) {
    beast::error_code ignored;
    acceptor.close(ignored);
    throw Error(ErrorCode::BindError, "cannot listen on port " + std::to_string(impl_->options.port) + ": " + ec.message());
  }
  impl_->bound_port = acceptor.local_endpoint().port();
  impl_->started = true;
  impl_->work.emplace(net::make_work_guard(impl_->ioc));
  impl_->accept();
  impl_->io_thread = std::thread([this] { impl_->ioc.run(); });
  impl_->loop_thread = std::thread([this] { impl_->loop(); });
  spdlog::info("session server listening on {}:{}{}", impl_->options.address, impl_->bound_port, impl_->options.path);
}

void SessionServer::stop() {
  if (!impl_ || !impl_->started) return;
  {
    std::lock_guard lock(impl_->stop_mutex);
    impl_->stopping = true;
  }
  impl_->stop_cv.notify_all();
  if (impl_->loop_thread.joinable()) impl_->loop_thread.join();

  net::post(impl_->ioc, [impl = impl_.get()] {
    beast::error_code ec;
    impl->acceptor.close(ec);
    for (auto& weak : impl->connections) {
      if (auto c = weak.lock()) c->shutdown();
    }
    impl->connections.clear();
    impl->work.reset();
  });
  if (impl_->io_thread.joinable()) impl_->io_thread.join();
  impl_->started = false;
}

unsigned short SessionServer::port() const { return impl_->bound_port; }

}  // namespace softbody
