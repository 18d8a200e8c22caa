#include "toolbench/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <deque>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

namespace toolbench {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

// Only this many frames may wait for the socket before a turbo session
// stops stepping; keeps memory bounded when the client reads slowly.
constexpr std::size_t kTurboBacklog = 8;

std::string query_param(std::string_view target, std::string_view key) {
  auto q = target.find('?');
  while (q != std::string_view::npos) {
    const std::size_t begin = q + 1;
    q = target.find('&', begin);
    const std::size_t end = q == std::string_view::npos ? target.size() : q;
    const std::size_t eq = target.find('=', begin);
    if (eq < end && target.compare(begin, eq - begin, key) == 0) return std::string(target.substr(eq + 1, end - eq - 1));
  }
  return {};
}

std::string_view path_of(std::string_view target) {
  const auto q = target.find('?');
  return q == std::string_view::npos ? target : target.substr(0, q);
}

}  // namespace

struct Server::Impl {
  ServerOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::thread thread;
  std::atomic<int> active_sessions{0};
  std::atomic<std::uint64_t> next_id{1};
  mutable std::mutex finished_mutex;
  std::vector<SessionLog> finished;

  explicit Impl(ServerOptions o) : options(std::move(o)) {}

  void bind();
  void accept();
  void record(std::uint64_t id, const SessionCore& core);
};

namespace {

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, Server::Impl& server)
      : ws_(std::move(socket)), timer_(ws_.get_executor()), server_(server), id_(server.next_id++) {}

  void run(http::request<http::string_body> req) {
    std::string name = query_param(std::string_view(req.target().data(), req.target().size()), "scenario");
    if (name.empty()) name = server_.options.default_scenario;
    try {
      core_ = std::make_unique<SessionCore>(standard_scenario(name));
    } catch (const std::exception& e) {
      startup_error_ = error_frame("unknown-scenario", e.what());
    }
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    ++server_.active_sessions;
    counted_ = true;
    ws_.text(true);
    if (!core_) {
      send(startup_error_);
      closing_ = true;
      return;
    }
    period_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / (60.0 * server_.options.pace)));
    next_tick_ = std::chrono::steady_clock::now();
    read();
    schedule_tick();
  }

  void read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      finish();
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    if (closing_) return;
    auto reply = core_->handle_text(text);
    for (auto& f : reply.frames) send(f);
    if (reply.close) {
      closing_ = true;
      return;
    }
    wake();
    read();
  }

  void schedule_tick() {
    if (closing_) return;
    if (server_.options.turbo) {
      if (outq_.size() >= kTurboBacklog) {
        tick_waiting_ = true;  // resumed by on_write
        return;
      }
      net::post(ws_.get_executor(), beast::bind_front_handler(&WsSession::on_tick, shared_from_this(), beast::error_code{}));
      return;
    }
    next_tick_ += period_;
    timer_.expires_at(next_tick_);
    timer_.async_wait(beast::bind_front_handler(&WsSession::on_tick, shared_from_this()));
  }

  void on_tick(beast::error_code ec) {
    if (ec || closing_) return;
    for (auto& f : core_->tick()) send(f);
    if (!server_.options.turbo && std::chrono::steady_clock::now() - next_tick_ > 10 * period_)
      next_tick_ = std::chrono::steady_clock::now();  // fell far behind: drop the backlog, keep the cadence
    if (core_->running() || !server_.options.turbo) {
      schedule_tick();
    } else {
      tick_waiting_ = true;  // idle (paused/finished); a message wakes it
    }
  }

  void send(const json& frame) {
    outq_.push_back(frame.dump());
    if (!writing_) write_next();
  }

  void write_next() {
    if (outq_.empty()) {
      writing_ = false;
      if (closing_) close();
      return;
    }
    writing_ = true;
    ws_.async_write(net::buffer(outq_.front()), beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) {
      finish();
      return;
    }
    outq_.pop_front();
    if (tick_waiting_ && !closing_ && core_ && (core_->running() || !server_.options.turbo)) {
      tick_waiting_ = false;
      schedule_tick();
    }
    write_next();
  }

  void close() {
    if (close_started_) return;
    close_started_ = true;
    ws_.async_close(websocket::close_code::normal, beast::bind_front_handler(&WsSession::on_close, shared_from_this()));
  }

  void on_close(beast::error_code) { finish(); }

  void finish() {
    if (finished_) return;
    finished_ = true;
    closing_ = true;
    timer_.cancel();
    if (counted_) --server_.active_sessions;
    if (core_ && core_->greeted()) {
      core_->disconnect();
      server_.record(id_, *core_);
    }
  }

  // Incoming messages may wake an idle turbo session.
  void wake() {
    if (tick_waiting_ && core_ && core_->running()) {
      tick_waiting_ = false;
      schedule_tick();
    }
  }

 public:
  ~WsSession() { finish(); }

 private:
  websocket::stream<beast::tcp_stream> ws_;
  net::steady_timer timer_;
  Server::Impl& server_;
  std::uint64_t id_;
  beast::flat_buffer buffer_;
  std::unique_ptr<SessionCore> core_;
  json startup_error_;
  std::deque<std::string> outq_;
  std::chrono::steady_clock::duration period_{};
  std::chrono::steady_clock::time_point next_tick_{};
  bool writing_ = false;
  bool closing_ = false;
  bool close_started_ = false;
  bool finished_ = false;
  bool counted_ = false;
  bool tick_waiting_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, Server::Impl& server) : stream_(std::move(socket)), server_(server) {}

  void run() { read(); }

 private:
  void read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;
    const std::string target(req_.target());
    if (websocket::is_upgrade(req_) && path_of(target) == "/session") {
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), server_)->run(std::move(req_));
      return;
    }
    respond(target);
  }

  void respond(const std::string& target) {
    auto res = std::make_shared<http::response<http::string_body>>();
    res->version(req_.version());
    res->keep_alive(req_.keep_alive());
    res->set(http::field::content_type, "application/json");
    const auto path = path_of(target);
    if (req_.method() != http::verb::get) {
      res->result(http::status::method_not_allowed);
      res->body() = json{{"error", "method not allowed"}}.dump();
    } else if (path == "/healthz") {
      res->result(http::status::ok);
      res->body() = json{{"status", "ok"}, {"protocol", kProtocol}, {"sessions", server_.active_sessions.load()}}.dump();
    } else if (path == "/scenarios") {
      res->result(http::status::ok);
      res->body() = json{{"scenarios", scenario_names()}, {"default", server_.options.default_scenario}}.dump();
    } else {
      res->result(http::status::not_found);
      res->body() = json{{"error", "not found"}}.dump();
    }
    res->prepare_payload();
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
      if (ec) return;
      if (res->keep_alive()) {
        self->read();
      } else {
        beast::error_code ignored;
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
      }
    });
  }

  beast::tcp_stream stream_;
  Server::Impl& server_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
};

}  // namespace

void Server::Impl::bind() {
  const tcp::endpoint endpoint(net::ip::make_address(options.address), options.port);
  acceptor.open(endpoint.protocol());
  acceptor.set_option(net::socket_base::reuse_address(true));
  acceptor.bind(endpoint);
  acceptor.listen(net::socket_base::max_listen_connections);
  accept();
}

void Server::Impl::accept() {
  acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;  // acceptor closed
    std::make_shared<HttpSession>(std::move(socket), *this)->run();
    accept();
  });
}

void Server::Impl::record(std::uint64_t id, const SessionCore& core) {
  SessionLog log = core.log();
  if (!options.record_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(options.record_dir, ec);
    const auto stem = options.record_dir / ("session-" + std::to_string(id));
    std::ofstream(stem.string() + ".json") << log.to_json().dump(2) << '\n';
    if (!core.trace().empty()) {
      std::ofstream trace(stem.string() + ".jsonl");
      write_trace(trace, core.trace());
    }
  }
  std::lock_guard lock(finished_mutex);
  finished.push_back(std::move(log));
}

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {
  if (!(impl_->options.pace > 0.0)) throw InvalidInput("server: pace must be > 0");
  if (impl_->options.default_scenario.empty()) impl_->options.default_scenario = "flat-b";
  (void)standard_scenario(impl_->options.default_scenario);  // unknown name -> ConfigError
}

Server::~Server() { stop(); }

void Server::start() {
  impl_->bind();
  impl_->thread = std::thread([this] { impl_->ioc.run(); });
}

void Server::run() {
  impl_->bind();
  net::signal_set signals(impl_->ioc, SIGINT, SIGTERM);
  signals.async_wait([this](beast::error_code, int) { impl_->ioc.stop(); });
  impl_->ioc.run();
}

void Server::stop() {
  if (!impl_) return;
  net::post(impl_->ioc, [this] {
    beast::error_code ec;
    impl_->acceptor.close(ec);
  });
  impl_->ioc.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::uint16_t Server::port() const { return impl_->acceptor.local_endpoint().port(); }

std::vector<SessionLog> Server::finished_sessions() const {
  std::lock_guard lock(impl_->finished_mutex);
  return impl_->finished;
}

}  // namespace toolbench
