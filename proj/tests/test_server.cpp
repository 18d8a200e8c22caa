#include "toolbench/server.hpp"

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <gtest/gtest.h>

#include <chrono>
#include <thread>

using namespace toolbench;
using nlohmann::json;
namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

std::pair<unsigned, json> http_get(std::uint16_t port, const std::string& target) {
  net::io_context ioc;
  tcp::resolver resolver(ioc);
  beast::tcp_stream stream(ioc);
  stream.connect(resolver.resolve("127.0.0.1", std::to_string(port)));
  http::request<http::empty_body> req(http::verb::get, target, 11);
  req.set(http::field::host, "127.0.0.1");
  http::write(stream, req);
  beast::flat_buffer buf;
  http::response<http::string_body> res;
  http::read(stream, buf, res);
  beast::error_code ec;
  stream.socket().shutdown(tcp::socket::shutdown_both, ec);
  return {res.result_int(), json::parse(res.body())};
}

class WsClient {
 public:
  WsClient(std::uint16_t port, const std::string& target) : ws_(ioc_) {
    tcp::resolver resolver(ioc_);
    net::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
    ws_.handshake("127.0.0.1", target);
    ws_.text(true);
  }

  void send(const json& j) { ws_.write(net::buffer(j.dump())); }

  json read() {
    beast::flat_buffer buf;
    ws_.read(buf);
    return json::parse(beast::buffers_to_string(buf.data()));
  }

  json read_until(const std::string& type) {
    for (int i = 0; i < 100000; ++i) {
      json f = read();
      if (f["type"] == type) return f;
    }
    return {};
  }

  // Drains until the server closes the connection.
  void drain() {
    beast::error_code ec;
    beast::flat_buffer buf;
    while (!ec) ws_.read(buf, ec);
  }

 private:
  net::io_context ioc_;
  websocket::stream<tcp::socket> ws_;
};

std::vector<SessionLog> wait_for_logs(const Server& server, std::size_t n) {
  for (int i = 0; i < 500; ++i) {
    auto logs = server.finished_sessions();
    if (logs.size() >= n) return logs;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  return server.finished_sessions();
}

ServerOptions turbo_options() {
  ServerOptions o;
  o.port = 0;
  o.turbo = true;
  return o;
}

}  // namespace

TEST(Server, HttpEndpoints) {
  Server server(turbo_options());
  server.start();
  const auto [status, health] = http_get(server.port(), "/healthz");
  EXPECT_EQ(status, 200u);
  EXPECT_EQ(health["status"], "ok");
  EXPECT_EQ(health["protocol"], kProtocol);
  const auto [s2, list] = http_get(server.port(), "/scenarios");
  EXPECT_EQ(s2, 200u);
  EXPECT_EQ(list["scenarios"].size(), scenario_names().size());
  EXPECT_EQ(http_get(server.port(), "/nope").first, 404u);
  server.stop();
}

TEST(Server, RejectsUnknownOptions) {
  ServerOptions o = turbo_options();
  o.pace = 0.0;
  EXPECT_THROW(Server{o}, InvalidInput);
  o = turbo_options();
  o.default_scenario = "nowhere";
  EXPECT_THROW(Server{o}, ConfigError);
}

TEST(Server, ServedRunMatchesHeadlessRun) {
  Server server(turbo_options());
  server.start();
  WsClient client(server.port(), "/session?scenario=flat-hybrid");
  client.send({{"type", "hello"}, {"protocol", kProtocol}});
  const json welcome = client.read();
  ASSERT_EQ(welcome["type"], "welcome");
  EXPECT_EQ(welcome["scenario"], "flat-hybrid");
  const json done = client.read_until("finished");
  client.send({{"type", "bye"}});
  const json bye = client.read_until("bye");
  client.drain();
  server.stop();

  const auto headless = run_scenario(standard_scenario("flat-hybrid"));
  EXPECT_EQ(done["hash"], headless.hash);
  EXPECT_EQ(bye["hash"], headless.hash);
}

TEST(Server, LiveSessionReplaysToTheSameHash) {
  Server server(turbo_options());
  server.start();
  {
    WsClient client(server.port(), "/session?scenario=flat-b");
    client.send({{"type", "hello"}, {"protocol", kProtocol}});
    ASSERT_EQ(client.read()["type"], "welcome");
    std::int64_t seq = 0;
    for (int i = 0; i < 40; ++i) {
      client.send({{"type", "intent"}, {"seq", ++seq}, {"pos", {-0.15 + 0.002 * i, 0.0, -0.001}}, {"press_bias", 9.0}, {"buttons", 0u}});
      client.read_until("state");
    }
    client.send({{"type", "set_mode"}, {"mode", "SC"}});
    for (int i = 0; i < 20; ++i) client.read_until("state");
    client.send({{"type", "bye"}});
    const json bye = client.read_until("bye");
    client.drain();

    const auto logs = wait_for_logs(server, 1);
    ASSERT_EQ(logs.size(), 1u);
    EXPECT_EQ(logs[0].hash, bye["hash"]);
    EXPECT_GE(logs[0].events.size(), 41u);
    const auto replay = replay_session(SessionLog::from_json(logs[0].to_json()));
    EXPECT_EQ(replay.hash, bye["hash"]);
  }
  server.stop();
}

TEST(Server, ProtocolErrorClosesTheSocket) {
  Server server(turbo_options());
  server.start();
  WsClient client(server.port(), "/session");
  client.send({{"type", "hello"}, {"protocol", "toolbench-proto/9"}});
  const json err = client.read();
  EXPECT_EQ(err["type"], "error");
  EXPECT_EQ(err["code"], "unsupported-version");
  client.drain();
  server.stop();
}
