#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>

#include "oracles.hpp"
#include "vsds/io.hpp"
#include "vsds/server.hpp"

using namespace vsds;
using namespace vsds::server;

namespace {

const GridSpec kGrid = GridSpec::parse("-0.5:0.2:8,-0.05:0.6:8");

std::shared_ptr<Host> make_host(const std::string& scenario) {
  return std::make_shared<Host>(io::load_scenario(testing::data_dir() / "scenarios" / (scenario + ".json")), kGrid,
                                testing::data_dir());
}

std::vector<json> of_type(const std::vector<json>& frames, const std::string& type) {
  std::vector<json> out;
  for (const auto& f : frames)
    if (f["type"] == type) out.push_back(f);
  return out;
}

std::string force(double fy, double fz, std::int64_t seq) {
  return json{{"type", "force"}, {"fy", fy}, {"fz", fz}, {"seq", seq}}.dump();
}

std::string command(const std::string& name) { return json{{"type", "command"}, {"name", name}}.dump(); }

}  // namespace

TEST_CASE("snapshot carries the full scene") {
  auto host = make_host("near_demo");
  const auto s = host->snapshot();
  REQUIRE(s.size() == 2);
  CHECK(s[0]["type"] == "state");
  CHECK(s[0]["mode"] == "idle");
  CHECK(s[1]["type"] == "field");
  CHECK(s[1]["points"].size() == kGrid.size());
  CHECK(s[1]["seq"].get<std::uint64_t>() > s[0]["seq"].get<std::uint64_t>());
}

TEST_CASE("malformed frames are answered with errors") {
  auto host = make_host("near_demo");
  host->receive("{not json");
  host->receive(R"({"type": "force", "fy": "x", "fz": 0})");
  host->receive(R"({"type": "teleport"})");
  host->receive(command("dance"));
  host->receive(json{{"type", "command"}, {"name", "set_scenario"}, {"path", "../../etc/passwd"}}.dump());
  const auto errors = of_type(host->tick(), "error");
  CHECK(errors.size() == 5);
}

TEST_CASE("state frames are rate limited and ordered") {
  auto host = make_host("near_demo");
  std::vector<json> all;
  for (int i = 0; i < 1000; ++i)
    for (auto& f : host->tick()) all.push_back(std::move(f));
  CHECK(of_type(all, "state").size() == 60);
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i]["seq"].get<std::uint64_t>() > all[i - 1]["seq"].get<std::uint64_t>());
}

TEST_CASE("stale, non-finite and oversized forces") {
  auto host = make_host("near_demo");
  host->receive(force(0.0, 100.0, 5));
  (void)host->tick();
  host->receive(force(0.0, -100.0, 4));
  (void)host->tick();
  // Capped at the scenario force cap and held: v_z = 2 ticks * 30 N * dt / m.
  auto st = of_type(host->snapshot(), "state").front();
  CHECK(st["v_m"][1].get<double>() == doctest::Approx(2 * 30.0 * 1e-3));
  host->receive(R"({"type": "force", "fy": 1e400, "fz": 0, "seq": 6})");
  (void)host->tick();
  st = of_type(host->snapshot(), "state").front();
  CHECK(st["v_m"][1].get<double>() == doctest::Approx(3 * 30.0 * 1e-3));
  CHECK(st["v_m"][0].get<double>() == 0.0);
}

TEST_CASE("set_scenario replaces the session and resends the field") {
  auto host = make_host("near_demo");
  (void)host->tick();
  host->receive(json{{"type", "command"}, {"name", "set_scenario"}, {"path", "scenarios/case1_far_start.json"}}.dump());
  const auto out = host->tick();
  CHECK(of_type(out, "field").size() == 1);
  const auto st = of_type(host->snapshot(), "state").front();
  CHECK(st["x_r"][0].get<double>() == doctest::Approx(-0.5));
}

TEST_CASE("protocol drives a full escape and learning cycle") {
  auto host = make_host("case1_far_start");
  host->receive(command("start"));
  std::vector<std::string> events;
  std::vector<std::string> modes;
  std::int64_t seq = 0;
  Vel2 v = Vel2::Zero();
  int braking = 0;
  auto seen = [&](const char* name) { return std::find(events.begin(), events.end(), name) != events.end(); };
  for (int i = 0; i < 20000 && !seen("learned"); ++i) {
    if (!seen("recording")) {
      host->receive(force(-3.0, 12.0, seq++));
    } else if (braking < 500) {
      // The operator stops the master, then ends the demonstration.
      host->receive(force(-40.0 * v.x(), -40.0 * v.y(), seq++));
      if (++braking == 500) {
        host->receive(force(0.0, 0.0, seq++));
        host->receive(command("end_demo"));
      }
    }
    for (const auto& f : host->tick()) {
      if (f["type"] == "event") events.push_back(f["name"]);
      if (f["type"] == "state") {
        v = {f["v_m"][0].get<double>(), f["v_m"][1].get<double>()};
        if (modes.empty() || modes.back() != f["mode"]) modes.push_back(f["mode"]);
      }
    }
  }
  CHECK(events == std::vector<std::string>{"escaped", "recording", "learned"});
  for (int i = 0; i < 100; ++i) (void)host->tick();
  CHECK(of_type(host->snapshot(), "state").front()["mode"] == "guided");
  CHECK(modes.front() == "guided");
}

TEST_CASE("live WebSocket session") {
  namespace beast = boost::beast;
  namespace net = boost::asio;
  auto host = make_host("case1_far_start");
  Server server(host, {"127.0.0.1", 0, 0.05});
  const auto port = server.start();

  net::io_context ioc;
  net::ip::tcp::resolver resolver(ioc);
  beast::websocket::stream<net::ip::tcp::socket> ws(ioc);
  net::connect(ws.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
  ws.handshake("127.0.0.1", "/");

  auto read = [&] {
    beast::flat_buffer buf;
    ws.read(buf);
    return json::parse(beast::buffers_to_string(buf.data()));
  };
  const auto first = read();
  CHECK(first["type"] == "state");
  CHECK(read()["type"] == "field");

  ws.text(true);
  ws.write(net::buffer(command("start")));
  ws.write(net::buffer(force(-3.0, 12.0, 0)));

  std::vector<std::string> events;
  std::uint64_t last_seq = first["seq"];
  bool monotone = true;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(20);
  while (events.size() < 2 && std::chrono::steady_clock::now() < deadline) {
    const auto f = read();
    monotone = monotone && f["seq"].get<std::uint64_t>() > last_seq;
    last_seq = f["seq"];
    if (f["type"] == "event") events.push_back(f["name"]);
  }
  CHECK(monotone);
  CHECK(events == std::vector<std::string>{"escaped", "recording"});

  beast::error_code ec;
  ws.close(beast::websocket::close_code::normal, ec);
  server.stop();
}
