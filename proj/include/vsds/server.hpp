#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsds/field_export.hpp"
#include "vsds/session.hpp"

namespace vsds::server {

using json = nlohmann::json;

/// Protocol endpoint around one Session, independent of the transport.
/// `receive` may be called from any thread; `tick` only from the runner.
class Host {
 public:
  Host(sim::Scenario scenario, GridSpec grid, std::filesystem::path data_dir, double broadcast_hz = 60.0);

  /// Parses and queues a client frame. Malformed frames are answered by an
  /// error frame on the next tick.
  void receive(const std::string& text);

  /// Drains the queue, advances the session one step and returns the frames
  /// to broadcast, in order.
  std::vector<json> tick();

  /// Frames a newly connected client needs to render the current scene.
  /// Runner thread only, so sequence numbers stay ordered per client.
  std::vector<json> snapshot();

  [[nodiscard]] double dt() const { return dt_; }

 private:
  struct Incoming {
    std::string type;
    json body;
  };

  json frame(json body);
  json state_frame();
  json field_frame();
  void apply_command(const json& body, std::vector<json>& out);

  std::mutex queue_mu_;
  std::vector<Incoming> queue_;
  std::int64_t last_client_seq_ = -1;

  session::Session session_;
  GridSpec grid_;
  std::filesystem::path data_dir_;
  double broadcast_hz_;
  double dt_;
  Force2 u_h_ = Force2::Zero();
  std::size_t ticks_ = 0;
  std::size_t builds_seen_ = 0;
  std::uint64_t seq_ = 0;
  bool field_dirty_ = true;
};

struct ServerConfig {
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  /// Wall-clock seconds per simulated second; 0 runs as fast as possible.
  double time_scale = 1.0;
};

/// WebSocket transport: one runner thread ticks the host at a fixed rate and
/// broadcasts its frames to every connected client.
class Server {
 public:
  Server(std::shared_ptr<Host> host, ServerConfig cfg);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts the I/O and runner threads. Returns the bound port.
  unsigned short start();
  void stop();
  /// Blocks until stop() is called from another thread or a signal handler.
  void wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vsds::server
