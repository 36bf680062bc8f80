/*
 * Copyright 2026 The seccmp Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SECCMP_TRANSPORT_HPP_
#define SECCMP_TRANSPORT_HPP_

// Frame layout: u32 big-endian length (= 1 + payload size), u8 message tag,
// payload. Integers inside payloads are a u16 big-endian byte count followed
// by the minimal big-endian magnitude; lists carry a u16 element count.

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <cstring>
#include <deque>
#include <exception>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "seccmp/errors.hpp"
#include "seccmp/messages.hpp"
#include "seccmp/numeric.hpp"

namespace seccmp {

namespace tag {
inline constexpr std::uint8_t kP2Request = 0x01;
inline constexpr std::uint8_t kP2Response = 0x02;
inline constexpr std::uint8_t kCBatch = 0x03;
inline constexpr std::uint8_t kGammaBatch = 0x04;
inline constexpr std::uint8_t kOutcome = 0x05;
inline constexpr std::uint8_t kAuctionBid = 0x10;
inline constexpr std::uint8_t kAuctionResult = 0x11;
}  // namespace tag

inline constexpr std::uint32_t kProtocolVersion = 0x00000001;
inline constexpr std::size_t kMaxFrameBytes = std::size_t{1} << 26;

struct Frame {
  std::uint8_t msg_type = 0;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const Frame&, const Frame&) = default;
};

namespace detail {

class Writer {
 public:
  void U8(std::uint8_t v) { out_.push_back(v); }
  void U16(std::size_t v, const char* what) {
    if (v > 0xFFFF) throw EncodingError(std::string(what) + " exceeds 65535");
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
    out_.push_back(static_cast<std::uint8_t>(v));
  }
  void U32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) {
      out_.push_back(static_cast<std::uint8_t>(v >> shift));
    }
  }
  void Big(const BigUint& x) {
    const auto bytes = to_bytes(x);
    U16(bytes.size(), "integer byte length");
    out_.insert(out_.end(), bytes.begin(), bytes.end());
  }
  void Bytes(std::string_view s) {
    U16(s.size(), "string length");
    out_.insert(out_.end(), s.begin(), s.end());
  }
  std::vector<std::uint8_t> Take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t U8() {
    Need(1);
    return in_[pos_++];
  }
  std::size_t U16() {
    Need(2);
    const std::size_t v = (std::size_t{in_[pos_]} << 8) | in_[pos_ + 1];
    pos_ += 2;
    return v;
  }
  std::uint32_t U32() {
    Need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | in_[pos_ + i];
    pos_ += 4;
    return v;
  }
  BigUint Big() {
    const std::size_t len = U16();
    Need(len);
    if (len > 0 && in_[pos_] == 0) {
      throw MalformedFrameError("non-minimal integer encoding");
    }
    BigUint x = from_bytes(in_.subspan(pos_, len));
    pos_ += len;
    return x;
  }
  std::string Bytes() {
    const std::size_t len = U16();
    Need(len);
    std::string s(in_.begin() + pos_, in_.begin() + pos_ + len);
    pos_ += len;
    return s;
  }
  void Finish() const {
    if (pos_ != in_.size()) throw MalformedFrameError("trailing bytes in payload");
  }

 private:
  void Need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw MalformedFrameError("truncated payload");
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

inline void WriteCiphertexts(Writer& w, const std::vector<Ciphertext>& cs) {
  w.U16(cs.size(), "list length");
  for (const auto& c : cs) w.Big(c.value);
}

inline std::vector<Ciphertext> ReadCiphertexts(Reader& r) {
  std::vector<Ciphertext> cs(r.U16());
  for (auto& c : cs) c.value = r.Big();
  return cs;
}

inline Outcome ReadOutcome(Reader& r) {
  const std::uint8_t b = r.U8();
  if (b > 1) throw MalformedFrameError("outcome byte must be 0x00 or 0x01");
  return static_cast<Outcome>(b);
}

}  // namespace detail

inline Frame encode(const ProtocolMessage& msg) {
  detail::Writer w;
  Frame frame;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, P2Request>) {
          frame.msg_type = tag::kP2Request;
          w.Big(m.c.value);
        } else if constexpr (std::is_same_v<T, P2Response>) {
          frame.msg_type = tag::kP2Response;
          w.Big(m.c.value);
        } else if constexpr (std::is_same_v<T, CBatch>) {
          frame.msg_type = tag::kCBatch;
          detail::WriteCiphertexts(w, m.cs);
        } else if constexpr (std::is_same_v<T, GammaBatch>) {
          frame.msg_type = tag::kGammaBatch;
          detail::WriteCiphertexts(w, m.gammas);
        } else if constexpr (std::is_same_v<T, OutcomeMessage>) {
          frame.msg_type = tag::kOutcome;
          w.U8(static_cast<std::uint8_t>(m.result));
        } else if constexpr (std::is_same_v<T, AuctionBid>) {
          frame.msg_type = tag::kAuctionBid;
          w.U32(m.round);
          w.Bytes(m.bidder_id);
          w.U16(m.shares.size(), "list length");
          for (Residue s : m.shares) w.Big(BigUint(s));
        } else if constexpr (std::is_same_v<T, AuctionResult>) {
          frame.msg_type = tag::kAuctionResult;
          w.U32(m.round);
          w.U8(static_cast<std::uint8_t>(m.result));
        }
      },
      msg);
  frame.payload = w.Take();
  return frame;
}

inline ProtocolMessage decode(const Frame& frame) {
  detail::Reader r(frame.payload);
  ProtocolMessage out;
  switch (frame.msg_type) {
    case tag::kP2Request:
      out = P2Request{Ciphertext{r.Big()}};
      break;
    case tag::kP2Response:
      out = P2Response{Ciphertext{r.Big()}};
      break;
    case tag::kCBatch:
      out = CBatch{detail::ReadCiphertexts(r)};
      break;
    case tag::kGammaBatch:
      out = GammaBatch{detail::ReadCiphertexts(r)};
      break;
    case tag::kOutcome:
      out = OutcomeMessage{detail::ReadOutcome(r)};
      break;
    case tag::kAuctionBid: {
      AuctionBid bid;
      bid.round = r.U32();
      bid.bidder_id = r.Bytes();
      bid.shares.resize(r.U16());
      for (auto& s : bid.shares) {
        const BigUint v = r.Big();
        if (bit_length(v) > 63) throw MalformedFrameError("share out of range");
        s = mpz_get_ui(v.get_mpz_t());
      }
      out = std::move(bid);
      break;
    }
    case tag::kAuctionResult: {
      AuctionResult res;
      res.round = r.U32();
      res.result = detail::ReadOutcome(r);
      out = res;
      break;
    }
    default:
      throw MalformedFrameError("unknown message type " +
                                std::to_string(frame.msg_type));
  }
  r.Finish();
  return out;
}

// Length-prefixed wire bytes of a frame.
inline std::vector<std::uint8_t> frame_bytes(const Frame& frame) {
  const std::size_t length = 1 + frame.payload.size();
  if (length > kMaxFrameBytes) throw EncodingError("frame too large");
  std::vector<std::uint8_t> out;
  out.reserve(4 + length);
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(length >> shift));
  }
  out.push_back(frame.msg_type);
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

// Inverse of frame_bytes; the length field must match exactly.
inline Frame parse_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 5) throw MalformedFrameError("frame shorter than header");
  std::uint32_t length = 0;
  for (int i = 0; i < 4; ++i) length = (length << 8) | bytes[i];
  if (length == 0) throw MalformedFrameError("zero frame length");
  if (std::size_t{length} != bytes.size() - 4) {
    throw MalformedFrameError("frame length field does not match frame size");
  }
  return Frame{bytes[4], {bytes.begin() + 5, bytes.end()}};
}

enum class Direction : std::uint8_t { kSent, kReceived };

struct TranscriptEntry {
  Direction direction;
  std::vector<std::uint8_t> bytes;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

// One end of a reliable, ordered, two-party frame channel. Every frame that
// crosses the endpoint is appended to its transcript.
class Endpoint {
 public:
  static constexpr std::chrono::milliseconds kDefaultTimeout{120'000};

  explicit Endpoint(Role role) : role_(role) {}
  virtual ~Endpoint() = default;
  Endpoint(const Endpoint&) = delete;
  Endpoint& operator=(const Endpoint&) = delete;

  Role role() const { return role_; }

  void Send(const ProtocolMessage& msg) {
    auto bytes = frame_bytes(encode(msg));
    SendBytes(bytes);
    transcript_.push_back({Direction::kSent, std::move(bytes)});
  }

  ProtocolMessage Receive(std::chrono::milliseconds timeout = kDefaultTimeout) {
    auto bytes = ReceiveBytes(timeout);
    ProtocolMessage msg = decode(parse_frame(bytes));
    transcript_.push_back({Direction::kReceived, std::move(bytes)});
    return msg;
  }

  // Receives and unwraps a message of the expected kind.
  template <typename T>
  T Expect(std::chrono::milliseconds timeout = kDefaultTimeout) {
    ProtocolMessage msg = Receive(timeout);
    if (auto* m = std::get_if<T>(&msg)) return std::move(*m);
    throw ProtocolError("unexpected message kind on the wire");
  }

  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }

  // Wakes a peer blocked in Receive with a disconnect error.
  virtual void Close() = 0;

 protected:
  virtual void SendBytes(const std::vector<std::uint8_t>& bytes) = 0;
  virtual std::vector<std::uint8_t> ReceiveBytes(
      std::chrono::milliseconds timeout) = 0;

 private:
  Role role_;
  std::vector<TranscriptEntry> transcript_;
};

namespace detail {

struct InProcessChannel {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::vector<std::uint8_t>> to_a;
  std::deque<std::vector<std::uint8_t>> to_b;
  bool closed = false;
};

}  // namespace detail

class InProcessEndpoint final : public Endpoint {
 public:
  InProcessEndpoint(Role role, std::shared_ptr<detail::InProcessChannel> channel)
      : Endpoint(role), channel_(std::move(channel)) {}

  ~InProcessEndpoint() override { Close(); }

  void Close() override {
    std::lock_guard lock(channel_->mu);
    channel_->closed = true;
    channel_->cv.notify_all();
  }

 protected:
  void SendBytes(const std::vector<std::uint8_t>& bytes) override {
    std::lock_guard lock(channel_->mu);
    if (channel_->closed) throw TransportError("peer disconnected");
    Outbox().push_back(bytes);
    channel_->cv.notify_all();
  }

  std::vector<std::uint8_t> ReceiveBytes(
      std::chrono::milliseconds timeout) override {
    std::unique_lock lock(channel_->mu);
    auto& inbox = Inbox();
    if (!channel_->cv.wait_for(lock, timeout, [&] {
          return !inbox.empty() || channel_->closed;
        })) {
      throw TimeoutError("receive timed out");
    }
    if (inbox.empty()) throw TransportError("peer disconnected");
    auto bytes = std::move(inbox.front());
    inbox.pop_front();
    return bytes;
  }

 private:
  std::deque<std::vector<std::uint8_t>>& Inbox() {
    return role() == Role::kA ? channel_->to_a : channel_->to_b;
  }
  std::deque<std::vector<std::uint8_t>>& Outbox() {
    return role() == Role::kA ? channel_->to_b : channel_->to_a;
  }

  std::shared_ptr<detail::InProcessChannel> channel_;
};

struct EndpointPair {
  std::unique_ptr<Endpoint> a;
  std::unique_ptr<Endpoint> b;
};

inline EndpointPair make_in_process_pair() {
  auto channel = std::make_shared<detail::InProcessChannel>();
  return {std::make_unique<InProcessEndpoint>(Role::kA, channel),
          std::make_unique<InProcessEndpoint>(Role::kB, channel)};
}

namespace detail {

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket() { Reset(); }
  Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Socket& operator=(Socket&& other) noexcept {
    if (this != &other) {
      Reset();
      fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
  }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void Reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }
  void Shutdown() {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
  }

 private:
  int fd_ = -1;
};

inline std::string ErrnoText(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

// Waits for `events` on fd until the deadline.
inline void WaitFor(int fd, short events,
                    std::chrono::steady_clock::time_point deadline) {
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() < 0) throw TimeoutError("socket operation timed out");
    pollfd pfd{fd, events, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc > 0) return;
    if (rc == 0) throw TimeoutError("socket operation timed out");
    if (errno != EINTR) throw TransportError(ErrnoText("poll"));
  }
}

inline void WriteAll(int fd, const std::uint8_t* data, std::size_t size) {
  while (size > 0) {
    const ssize_t n = ::send(fd, data, size, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(ErrnoText("send"));
    }
    data += n;
    size -= static_cast<std::size_t>(n);
  }
}

inline void ReadAll(int fd, std::uint8_t* data, std::size_t size,
                    std::chrono::steady_clock::time_point deadline) {
  while (size > 0) {
    WaitFor(fd, POLLIN, deadline);
    const ssize_t n = ::recv(fd, data, size, 0);
    if (n == 0) throw TransportError("peer disconnected");
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw TransportError(ErrnoText("recv"));
    }
    data += n;
    size -= static_cast<std::size_t>(n);
  }
}

inline addrinfo* Resolve(const std::string& host, std::uint16_t port,
                         bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* result = nullptr;
  const std::string service = std::to_string(port);
  const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(),
                               service.c_str(), &hints, &result);
  if (rc != 0) {
    throw TransportError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  return result;
}

}  // namespace detail

// A framed TCP connection. The constructor performs the version handshake:
// each side sends its 4-byte version and rejects a mismatching peer.
class TcpEndpoint final : public Endpoint {
 public:
  TcpEndpoint(Role role, detail::Socket socket,
              std::chrono::milliseconds handshake_timeout,
              std::uint32_t version = kProtocolVersion)
      : Endpoint(role), socket_(std::move(socket)) {
    const int one = 1;
    ::setsockopt(socket_.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    const std::uint8_t mine[4] = {
        static_cast<std::uint8_t>(version >> 24),
        static_cast<std::uint8_t>(version >> 16),
        static_cast<std::uint8_t>(version >> 8),
        static_cast<std::uint8_t>(version)};
    detail::WriteAll(socket_.fd(), mine, 4);
    std::uint8_t theirs[4];
    detail::ReadAll(socket_.fd(), theirs, 4,
                    std::chrono::steady_clock::now() + handshake_timeout);
    const std::uint32_t peer = (std::uint32_t{theirs[0]} << 24) |
                               (std::uint32_t{theirs[1]} << 16) |
                               (std::uint32_t{theirs[2]} << 8) | theirs[3];
    if (peer != version) {
      socket_.Shutdown();
      throw TransportError("protocol version mismatch: local " +
                           std::to_string(version) + ", peer " +
                           std::to_string(peer));
    }
  }

  ~TcpEndpoint() override = default;

  void Close() override { socket_.Shutdown(); }

 protected:
  void SendBytes(const std::vector<std::uint8_t>& bytes) override {
    detail::WriteAll(socket_.fd(), bytes.data(), bytes.size());
  }

  std::vector<std::uint8_t> ReceiveBytes(
      std::chrono::milliseconds timeout) override {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    std::vector<std::uint8_t> bytes(4);
    detail::ReadAll(socket_.fd(), bytes.data(), 4, deadline);
    std::uint32_t length = 0;
    for (int i = 0; i < 4; ++i) length = (length << 8) | bytes[i];
    if (length == 0 || length > kMaxFrameBytes) {
      throw MalformedFrameError("bad frame length on the wire");
    }
    bytes.resize(4 + length);
    detail::ReadAll(socket_.fd(), bytes.data() + 4, length, deadline);
    return bytes;
  }

 private:
  detail::Socket socket_;
};

// Party A's listening socket. Port 0 binds an ephemeral port.
class TcpListener {
 public:
  TcpListener(const std::string& host, std::uint16_t port) {
    addrinfo* info = detail::Resolve(host, port, true);
    std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(info,
                                                               ::freeaddrinfo);
    detail::Socket s(::socket(info->ai_family, info->ai_socktype, 0));
    if (!s.valid()) throw TransportError(detail::ErrnoText("socket"));
    const int one = 1;
    ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(s.fd(), info->ai_addr, info->ai_addrlen) != 0) {
      throw TransportError(detail::ErrnoText("bind"));
    }
    if (::listen(s.fd(), 1) != 0) {
      throw TransportError(detail::ErrnoText("listen"));
    }
    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(s.fd(), reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
    socket_ = std::move(s);
  }

  std::uint16_t port() const { return port_; }

  std::unique_ptr<TcpEndpoint> Accept(
      std::chrono::milliseconds timeout = Endpoint::kDefaultTimeout,
      std::uint32_t version = kProtocolVersion) {
    detail::WaitFor(socket_.fd(), POLLIN,
                    std::chrono::steady_clock::now() + timeout);
    detail::Socket conn(::accept(socket_.fd(), nullptr, nullptr));
    if (!conn.valid()) throw TransportError(detail::ErrnoText("accept"));
    return std::make_unique<TcpEndpoint>(Role::kA, std::move(conn), timeout,
                                         version);
  }

 private:
  detail::Socket socket_;
  std::uint16_t port_ = 0;
};

// Party B's side: retries until A is listening or the timeout expires.
inline std::unique_ptr<TcpEndpoint> tcp_connect(
    const std::string& host, std::uint16_t port,
    std::chrono::milliseconds timeout = Endpoint::kDefaultTimeout,
    std::uint32_t version = kProtocolVersion) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  addrinfo* info = detail::Resolve(host, port, false);
  std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(info,
                                                             ::freeaddrinfo);
  for (;;) {
    detail::Socket s(::socket(info->ai_family, info->ai_socktype, 0));
    if (!s.valid()) throw TransportError(detail::ErrnoText("socket"));
    if (::connect(s.fd(), info->ai_addr, info->ai_addrlen) == 0) {
      return std::make_unique<TcpEndpoint>(Role::kB, std::move(s), timeout,
                                           version);
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      throw TransportError(detail::ErrnoText("connect"));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

// A connected loopback TCP pair on an ephemeral port, for single-process runs.
inline EndpointPair make_tcp_loopback_pair(
    std::chrono::milliseconds timeout = Endpoint::kDefaultTimeout) {
  TcpListener listener("127.0.0.1", 0);
  std::unique_ptr<TcpEndpoint> b;
  std::exception_ptr error;
  std::thread connector([&] {
    try {
      b = tcp_connect("127.0.0.1", listener.port(), timeout);
    } catch (...) {
      error = std::current_exception();
    }
  });
  std::unique_ptr<TcpEndpoint> a;
  try {
    a = listener.Accept(timeout);
  } catch (...) {
    connector.join();
    throw;
  }
  connector.join();
  if (error) std::rethrow_exception(error);
  return {std::move(a), std::move(b)};
}

}  // namespace seccmp

#endif  // SECCMP_TRANSPORT_HPP_
