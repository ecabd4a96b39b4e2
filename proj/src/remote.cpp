/*
Copyright 2026 The simdiff Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "simdiff/remote.hpp"

#include <netdb.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "simdiff/error.hpp"

namespace simdiff {
namespace sdnp {
namespace {

class Encoder {
 public:
  Encoder& U8(std::uint8_t v) { return Raw(&v, 1); }
  Encoder& U16(std::uint16_t v) { return Raw(&v, 2); }
  Encoder& U32(std::uint32_t v) { return Raw(&v, 4); }
  Encoder& Raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out.insert(out.end(), b, b + n);
    return *this;
  }
  std::vector<std::uint8_t> out;
};

}  // namespace

std::vector<std::uint8_t> encode(const Handshake& h) {
  Encoder e;
  e.Raw("SDNP", 4).U16(h.version).U16(h.flags);
  return std::move(e.out);
}

std::vector<std::uint8_t> encode(const HandshakeReply& h) {
  Encoder e;
  e.Raw("SDNP", 4).U16(h.version).U16(h.max_batch).U16(h.height).U16(h.width).U8(h.channels);
  return std::move(e.out);
}

std::vector<std::uint8_t> encode(const TensorFrame& f) {
  if (f.payload.size() != f.value_count()) {
    throw UsageError("SDNP frame payload does not match its shape header");
  }
  Encoder e;
  e.U8(f.type).U32(f.t).U16(f.batch).U16(f.height).U16(f.width).U8(f.channels);
  e.Raw(f.payload.data(), f.payload.size() * sizeof(float));
  return std::move(e.out);
}

std::vector<std::uint8_t> encode(const ErrorReply& r) {
  Encoder e;
  e.U8(kErrorFrame).U16(r.code).U32(static_cast<std::uint32_t>(r.message.size()));
  e.Raw(r.message.data(), r.message.size());
  return std::move(e.out);
}

}  // namespace sdnp

namespace {

template <typename T>
T read_le(ByteStream& s) {
  T v{};
  s.ReadExact(std::span<std::uint8_t>(reinterpret_cast<std::uint8_t*>(&v), sizeof(T)));
  return v;
}

// Reads the body of an ERROR frame (type byte already consumed).
sdnp::ErrorReply read_error_body(ByteStream& s) {
  sdnp::ErrorReply e;
  e.code = read_le<std::uint16_t>(s);
  const auto len = read_le<std::uint32_t>(s);
  if (len > (1u << 20)) throw ProtocolError("SDNP error message too long");
  e.message.resize(len);
  s.ReadExact(std::span<std::uint8_t>(reinterpret_cast<std::uint8_t*>(e.message.data()), len));
  return e;
}

[[noreturn]] void throw_remote_error(const sdnp::ErrorReply& e) {
  throw ProtocolError("denoiser endpoint error " + std::to_string(e.code) + ": " + e.message);
}

constexpr std::uint64_t kMaxPayloadBytes = std::uint64_t{1} << 30;

// Reads shape header + payload (type byte already consumed).
sdnp::TensorFrame read_tensor_body(ByteStream& s, std::uint8_t type) {
  sdnp::TensorFrame f;
  f.type = type;
  f.t = read_le<std::uint32_t>(s);
  f.batch = read_le<std::uint16_t>(s);
  f.height = read_le<std::uint16_t>(s);
  f.width = read_le<std::uint16_t>(s);
  f.channels = read_le<std::uint8_t>(s);
  const std::uint64_t bytes = std::uint64_t{f.batch} * f.height * f.width * f.channels * 4;
  if (bytes > kMaxPayloadBytes) {
    throw ProtocolError("SDNP payload of " + std::to_string(bytes) + " bytes exceeds the limit");
  }
  f.payload.resize(f.value_count());
  s.ReadExact(std::span<std::uint8_t>(reinterpret_cast<std::uint8_t*>(f.payload.data()),
                                      f.payload.size() * sizeof(float)));
  return f;
}

class FdPairStream final : public ByteStream {
 public:
  FdPairStream(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) {}

  void Write(std::span<const std::uint8_t> bytes) override {
    std::size_t done = 0;
    while (done < bytes.size()) {
      const ssize_t n = ::write(write_fd_, bytes.data() + done, bytes.size() - done);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw TransportError(std::string("write failed: ") + std::strerror(errno));
      done += static_cast<std::size_t>(n);
    }
  }
  void ReadExact(std::span<std::uint8_t> out) override {
    if (!TryReadExact(out)) throw TransportError("unexpected end of stream");
  }
  bool TryReadExact(std::span<std::uint8_t> out) override {
    std::size_t done = 0;
    while (done < out.size()) {
      const ssize_t n = ::read(read_fd_, out.data() + done, out.size() - done);
      if (n < 0 && errno == EINTR) continue;
      if (n < 0) throw TransportError(std::string("read failed: ") + std::strerror(errno));
      if (n == 0) {
        if (done == 0) return false;
        throw TransportError("stream closed mid-frame");
      }
      done += static_cast<std::size_t>(n);
    }
    return true;
  }

 private:
  int read_fd_;
  int write_fd_;
};

}  // namespace

SocketStream::SocketStream(int fd, pid_t child) : fd_(fd), child_(child) {}

SocketStream::~SocketStream() {
  if (fd_ >= 0) ::close(fd_);
  if (child_ > 0) {
    int status = 0;
    while (::waitpid(child_, &status, 0) < 0 && errno == EINTR) {
    }
  }
}

std::unique_ptr<SocketStream> SocketStream::SpawnChild(const std::string& command) {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
    throw TransportError(std::string("socketpair failed: ") + std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw TransportError(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(fds[1], STDIN_FILENO);
    ::dup2(fds[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(fds[1]);
  return std::make_unique<SocketStream>(fds[0], pid);
}

std::unique_ptr<SocketStream> SocketStream::ConnectTcp(const std::string& host, int port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &found); rc != 0) {
    throw TransportError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* a = found; a != nullptr; a = a->ai_next) {
    fd = ::socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(found);
  if (fd < 0) throw TransportError("cannot connect to " + host + ":" + service);
  return std::make_unique<SocketStream>(fd);
}

std::unique_ptr<ByteStream> SocketStream::FromFds(int read_fd, int write_fd) {
  return std::make_unique<FdPairStream>(read_fd, write_fd);
}

void SocketStream::Write(std::span<const std::uint8_t> bytes) {
  std::size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t n = ::send(fd_, bytes.data() + done, bytes.size() - done, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw TransportError(std::string("send failed: ") + std::strerror(errno));
    done += static_cast<std::size_t>(n);
  }
}

void SocketStream::ReadExact(std::span<std::uint8_t> out) {
  if (!TryReadExact(out)) throw TransportError("denoiser endpoint closed the connection");
}

bool SocketStream::TryReadExact(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    const ssize_t n = ::recv(fd_, out.data() + done, out.size() - done, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) throw TransportError(std::string("recv failed: ") + std::strerror(errno));
    if (n == 0) {
      if (done == 0) return false;
      throw TransportError("connection closed mid-frame");
    }
    done += static_cast<std::size_t>(n);
  }
  return true;
}

RemoteDenoiser::RemoteDenoiser(std::unique_ptr<ByteStream> stream, std::uint16_t flags)
    : stream_(std::move(stream)) {
  stream_->Write(sdnp::encode(sdnp::Handshake{sdnp::kVersion, flags}));
  std::uint8_t first = 0;
  stream_->ReadExact(std::span<std::uint8_t>(&first, 1));
  if (first == sdnp::kErrorFrame) throw_remote_error(read_error_body(*stream_));
  std::uint8_t rest[3];
  stream_->ReadExact(rest);
  if (first != 'S' || std::memcmp(rest, "DNP", 3) != 0) {
    throw ProtocolError("denoiser endpoint sent a bad handshake magic");
  }
  reply_.version = read_le<std::uint16_t>(*stream_);
  reply_.max_batch = read_le<std::uint16_t>(*stream_);
  reply_.height = read_le<std::uint16_t>(*stream_);
  reply_.width = read_le<std::uint16_t>(*stream_);
  reply_.channels = read_le<std::uint8_t>(*stream_);
  if (reply_.version != sdnp::kVersion) {
    throw ProtocolError("denoiser endpoint speaks SDNP version " +
                        std::to_string(reply_.version));
  }
  if (reply_.max_batch == 0) throw ProtocolError("denoiser endpoint advertises max_batch 0");
  if (reply_.channels != DenseImage::kChannels) {
    throw ProtocolError("denoiser endpoint expects " + std::to_string(reply_.channels) +
                        " channels");
  }
}

std::unique_ptr<RemoteDenoiser> RemoteDenoiser::Connect(const std::string& endpoint) {
  if (endpoint.rfind("stdio:", 0) == 0) {
    return std::make_unique<RemoteDenoiser>(SocketStream::SpawnChild(endpoint.substr(6)));
  }
  if (endpoint.rfind("tcp:", 0) == 0) {
    const std::string rest = endpoint.substr(4);
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos) throw UsageError("tcp endpoint needs host:port");
    int port = 0;
    try {
      port = std::stoi(rest.substr(colon + 1));
    } catch (const std::exception&) {
      throw UsageError("bad port in endpoint '" + endpoint + "'");
    }
    return std::make_unique<RemoteDenoiser>(SocketStream::ConnectTcp(rest.substr(0, colon), port));
  }
  throw UsageError("endpoint must be stdio:<command> or tcp:<host>:<port>");
}

DenoiserDescriptor RemoteDenoiser::descriptor() const {
  DenoiserDescriptor d;
  d.name = "remote";
  d.accepts_batch = true;
  d.concurrent_safe = false;
  d.expected_height = reply_.height;
  d.expected_width = reply_.width;
  return d;
}

std::vector<DenseImage> RemoteDenoiser::Predict(std::span<const DenseImage> batch, int t,
                                                std::size_t /*first_view*/) {
  std::vector<DenseImage> out;
  out.reserve(batch.size());
  for (std::size_t start = 0; start < batch.size(); start += reply_.max_batch) {
    const std::size_t n = std::min<std::size_t>(reply_.max_batch, batch.size() - start);
    sdnp::TensorFrame req;
    req.type = sdnp::kPredictRequest;
    req.t = static_cast<std::uint32_t>(t);
    req.batch = static_cast<std::uint16_t>(n);
    req.height = static_cast<std::uint16_t>(batch[start].height);
    req.width = static_cast<std::uint16_t>(batch[start].width);
    req.channels = DenseImage::kChannels;
    if ((reply_.height && req.height != reply_.height) ||
        (reply_.width && req.width != reply_.width)) {
      throw ProtocolError("image shape differs from the endpoint's advertised shape");
    }
    for (std::size_t i = start; i < start + n; ++i) {
      if (batch[i].height != req.height || batch[i].width != req.width) {
        throw UsageError("remote batch mixes image shapes");
      }
      req.payload.insert(req.payload.end(), batch[i].data.begin(), batch[i].data.end());
    }
    stream_->Write(sdnp::encode(req));

    const auto type = read_le<std::uint8_t>(*stream_);
    if (type == sdnp::kErrorFrame) throw_remote_error(read_error_body(*stream_));
    if (type != sdnp::kPredictResponse) {
      throw ProtocolError("unexpected SDNP frame type " + std::to_string(type));
    }
    const sdnp::TensorFrame resp = read_tensor_body(*stream_, type);
    if (resp.batch != req.batch || resp.height != req.height || resp.width != req.width ||
        resp.channels != req.channels) {
      throw ProtocolError("SDNP response shape does not match the request");
    }
    const std::size_t per_image = req.payload.size() / n;
    for (std::size_t i = 0; i < n; ++i) {
      DenseImage img;
      img.height = req.height;
      img.width = req.width;
      img.data.assign(resp.payload.begin() + static_cast<std::ptrdiff_t>(i * per_image),
                      resp.payload.begin() + static_cast<std::ptrdiff_t>((i + 1) * per_image));
      out.push_back(std::move(img));
    }
  }
  return out;
}

std::vector<DenseImage> remote_denoise(std::span<const DenseImage> batch, int t,
                                       RemoteDenoiser& endpoint) {
  return endpoint.Predict(batch, t, 0);
}

void serve_sdnp(ByteStream& stream, const sdnp::HandshakeReply& reply,
                const PredictHandler& handler) {
  auto send_error = [&](std::uint16_t code, const std::string& msg) {
    stream.Write(sdnp::encode(sdnp::ErrorReply{code, msg}));
  };

  std::uint8_t magic[4];
  if (!stream.TryReadExact(magic)) return;
  if (std::memcmp(magic, "SDNP", 4) != 0) {
    send_error(sdnp::kErrMalformed, "bad handshake magic");
    return;
  }
  std::uint16_t version = 0;
  try {
    version = read_le<std::uint16_t>(stream);
    read_le<std::uint16_t>(stream);  // flags
  } catch (const TransportError&) {
    return;
  }
  if (version != sdnp::kVersion) {
    send_error(sdnp::kErrMalformed, "unsupported version " + std::to_string(version));
    return;
  }
  stream.Write(sdnp::encode(reply));

  for (;;) {
    std::uint8_t type = 0;
    if (!stream.TryReadExact(std::span<std::uint8_t>(&type, 1))) return;
    if (type != sdnp::kPredictRequest) {
      send_error(sdnp::kErrMalformed, "unexpected frame type " + std::to_string(type));
      return;
    }
    sdnp::TensorFrame req;
    try {
      req = read_tensor_body(stream, type);
    } catch (const ProtocolError& e) {
      send_error(sdnp::kErrMalformed, e.what());
      return;
    } catch (const TransportError&) {
      return;  // peer closed mid-frame
    }
    if (req.batch == 0 || req.batch > reply.max_batch || req.channels != reply.channels ||
        (reply.height && req.height != reply.height) ||
        (reply.width && req.width != reply.width)) {
      send_error(sdnp::kErrShape, "request shape not accepted");
      continue;
    }
    std::vector<float> prediction;
    try {
      prediction = handler(req);
    } catch (const std::exception& e) {
      send_error(sdnp::kErrModel, e.what());
      continue;
    }
    if (prediction.size() != req.payload.size()) {
      send_error(sdnp::kErrModel, "predictor returned a wrong-sized tensor");
      continue;
    }
    sdnp::TensorFrame resp = req;
    resp.type = sdnp::kPredictResponse;
    resp.payload = std::move(prediction);
    stream.Write(sdnp::encode(resp));
  }
}

}  // namespace simdiff
