#include <boost/asio/signal_set.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <condition_variable>
#include <deque>
#include <iostream>
#include <set>
#include <thread>

#include "vsds/server.hpp"

namespace vsds::server {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

constexpr std::size_t kMaxQueuedFrames = 4096;

class Connection;

struct Registry {
  std::mutex mu;
  std::set<std::shared_ptr<Connection>> live;
  std::vector<std::shared_ptr<Connection>> fresh;  // awaiting a snapshot
};

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, std::shared_ptr<Host> host, Registry& reg)
      : ws_(std::move(socket)), host_(std::move(host)), reg_(reg) {}

  void run() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(beast::bind_front_handler(&Connection::on_accept, shared_from_this()));
  }

  void send(std::shared_ptr<const std::string> text) {
    net::post(ws_.get_executor(), [self = shared_from_this(), text = std::move(text)] {
      if (self->closed_ || self->out_.size() >= kMaxQueuedFrames) return;
      self->out_.push_back(text);
      if (self->out_.size() == 1) self->do_write();
    });
  }

  void close() {
    net::post(ws_.get_executor(), [self = shared_from_this()] {
      if (self->closed_) return;
      self->closed_ = true;
      beast::error_code ec;
      beast::get_lowest_layer(self->ws_).socket().close(ec);
    });
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    {
      std::lock_guard lock(reg_.mu);
      reg_.live.insert(shared_from_this());
      reg_.fresh.push_back(shared_from_this());
    }
    do_read();
  }

  void do_read() {
    ws_.async_read(in_, beast::bind_front_handler(&Connection::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      drop();
      return;
    }
    if (ws_.got_text()) host_->receive(beast::buffers_to_string(in_.data()));
    in_.consume(in_.size());
    do_read();
  }

  void do_write() {
    ws_.text(true);
    ws_.async_write(net::buffer(*out_.front()), beast::bind_front_handler(&Connection::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) {
      drop();
      return;
    }
    out_.pop_front();
    if (!out_.empty()) do_write();
  }

  void drop() {
    closed_ = true;
    out_.clear();
    std::lock_guard lock(reg_.mu);
    reg_.live.erase(shared_from_this());
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer in_;
  std::deque<std::shared_ptr<const std::string>> out_;
  bool closed_ = false;
  std::shared_ptr<Host> host_;
  Registry& reg_;
};

}  // namespace

struct Server::Impl {
  std::shared_ptr<Host> host;
  ServerConfig cfg;
  net::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  net::signal_set signals{ioc, SIGINT, SIGTERM};
  Registry reg;
  std::thread io_thread;
  std::thread runner;
  std::atomic<bool> running{false};
  std::mutex stop_mu;
  std::condition_variable stop_cv;
  bool stop_requested = false;

  void request_stop() {
    {
      std::lock_guard lock(stop_mu);
      stop_requested = true;
    }
    stop_cv.notify_all();
  }

  void do_accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<Connection>(std::move(socket), host, reg)->run();
      do_accept();
    });
  }

  void run_loop() {
    using clock = std::chrono::steady_clock;
    const auto period = std::chrono::duration_cast<clock::duration>(
        std::chrono::duration<double>(host->dt() * cfg.time_scale));
    auto next = clock::now();
    while (running.load()) {
      std::vector<std::shared_ptr<Connection>> fresh;
      std::vector<std::shared_ptr<Connection>> live;
      {
        std::lock_guard lock(reg.mu);
        fresh.swap(reg.fresh);
        live.assign(reg.live.begin(), reg.live.end());
      }
      for (const auto& c : fresh)
        for (auto& f : host->snapshot()) c->send(std::make_shared<const std::string>(f.dump()));
      for (auto& f : host->tick()) {
        const auto text = std::make_shared<const std::string>(f.dump());
        for (const auto& c : live) c->send(text);
      }
      if (cfg.time_scale > 0.0) {
        next += period;
        std::this_thread::sleep_until(next);
      }
    }
  }
};

Server::Server(std::shared_ptr<Host> host, ServerConfig cfg) : impl_(std::make_unique<Impl>()) {
  impl_->host = std::move(host);
  impl_->cfg = std::move(cfg);
}

Server::~Server() { stop(); }

unsigned short Server::start() {
  auto& s = *impl_;
  const tcp::endpoint ep(net::ip::make_address(s.cfg.address), s.cfg.port);
  s.acceptor.open(ep.protocol());
  s.acceptor.set_option(net::socket_base::reuse_address(true));
  s.acceptor.bind(ep);
  s.acceptor.listen(net::socket_base::max_listen_connections);
  const auto port = s.acceptor.local_endpoint().port();
  s.signals.async_wait([&s](beast::error_code ec, int) {
    if (!ec) s.request_stop();
  });
  s.do_accept();
  s.running = true;
  s.io_thread = std::thread([&s] { s.ioc.run(); });
  s.runner = std::thread([&s] { s.run_loop(); });
  return port;
}

void Server::wait() {
  std::unique_lock lock(impl_->stop_mu);
  impl_->stop_cv.wait(lock, [this] { return impl_->stop_requested; });
}

void Server::stop() {
  auto& s = *impl_;
  if (!s.running.exchange(false)) return;
  if (s.runner.joinable()) s.runner.join();
  net::post(s.ioc, [&s] {
    beast::error_code ec;
    s.acceptor.close(ec);
    s.signals.cancel(ec);
  });
  {
    std::lock_guard lock(s.reg.mu);
    for (const auto& c : s.reg.live) c->close();
    s.reg.live.clear();
    s.reg.fresh.clear();
  }
  s.ioc.stop();
  if (s.io_thread.joinable()) s.io_thread.join();
  s.request_stop();
}

}  // namespace vsds::server
