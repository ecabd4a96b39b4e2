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

#ifndef SIMDIFF_REMOTE_HPP_
#define SIMDIFF_REMOTE_HPP_

#include <sys/types.h>

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "simdiff/denoiser.hpp"

namespace simdiff {

// SDNP: framed denoiser protocol over a byte stream. Integers are
// little-endian; tensors are float32, row-major, channel-interleaved.
namespace sdnp {

inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::uint8_t kPredictRequest = 1;
inline constexpr std::uint8_t kPredictResponse = 2;
inline constexpr std::uint8_t kErrorFrame = 255;

inline constexpr std::uint16_t kErrMalformed = 1;
inline constexpr std::uint16_t kErrShape = 2;
inline constexpr std::uint16_t kErrModel = 3;

struct Handshake {
  std::uint16_t version = kVersion;
  std::uint16_t flags = 0;
};

struct HandshakeReply {
  std::uint16_t version = kVersion;
  std::uint16_t max_batch = 1;
  std::uint16_t height = 0;
  std::uint16_t width = 0;
  std::uint8_t channels = 2;
};

struct TensorFrame {
  std::uint8_t type = kPredictRequest;
  std::uint32_t t = 0;
  std::uint16_t batch = 0;
  std::uint16_t height = 0;
  std::uint16_t width = 0;
  std::uint8_t channels = 2;
  std::vector<float> payload;

  std::size_t value_count() const {
    return static_cast<std::size_t>(batch) * height * width * channels;
  }
};

struct ErrorReply {
  std::uint16_t code = 0;
  std::string message;
};

std::vector<std::uint8_t> encode(const Handshake& h);
std::vector<std::uint8_t> encode(const HandshakeReply& h);
std::vector<std::uint8_t> encode(const TensorFrame& f);
std::vector<std::uint8_t> encode(const ErrorReply& e);

}  // namespace sdnp

// Bidirectional byte stream. Failures raise TransportError.
class ByteStream {
 public:
  virtual ~ByteStream() = default;
  virtual void Write(std::span<const std::uint8_t> bytes) = 0;
  virtual void ReadExact(std::span<std::uint8_t> out) = 0;
  // Returns false on clean end-of-stream before the first byte.
  virtual bool TryReadExact(std::span<std::uint8_t> out) = 0;
};

// Stream over a connected socket; optionally owns a child process whose
// stdin/stdout are the other end.
class SocketStream final : public ByteStream {
 public:
  SocketStream(int fd, pid_t child = -1);
  ~SocketStream() override;
  SocketStream(const SocketStream&) = delete;
  SocketStream& operator=(const SocketStream&) = delete;

  // Runs `command` through /bin/sh with stdin/stdout connected to the stream.
  static std::unique_ptr<SocketStream> SpawnChild(const std::string& command);
  static std::unique_ptr<SocketStream> ConnectTcp(const std::string& host, int port);
  // Wraps an existing descriptor (e.g. a server's stdin/stdout pair).
  static std::unique_ptr<ByteStream> FromFds(int read_fd, int write_fd);

  void Write(std::span<const std::uint8_t> bytes) override;
  void ReadExact(std::span<std::uint8_t> out) override;
  bool TryReadExact(std::span<std::uint8_t> out) override;

 private:
  int fd_;
  pid_t child_;
};

// Client for an external noise predictor. One request in flight at a time.
class RemoteDenoiser final : public Denoiser {
 public:
  explicit RemoteDenoiser(std::unique_ptr<ByteStream> stream, std::uint16_t flags = 0);

  // "stdio:<shell command>" or "tcp:<host>:<port>".
  static std::unique_ptr<RemoteDenoiser> Connect(const std::string& endpoint);

  const sdnp::HandshakeReply& handshake() const { return reply_; }

  DenoiserDescriptor descriptor() const override;
  std::vector<DenseImage> Predict(std::span<const DenseImage> batch, int t,
                                  std::size_t first_view) override;

 private:
  std::unique_ptr<ByteStream> stream_;
  sdnp::HandshakeReply reply_;
};

// Sends one PREDICT frame per max_batch chunk and returns the predictions.
std::vector<DenseImage> remote_denoise(std::span<const DenseImage> batch, int t,
                                       RemoteDenoiser& endpoint);

// Minimal SDNP server loop: answers the handshake, then PREDICT frames via
// `handler` until end-of-stream. Malformed input gets an ERROR frame; a bad
// handshake or unknown frame type also ends the session.
using PredictHandler = std::function<std::vector<float>(const sdnp::TensorFrame&)>;
void serve_sdnp(ByteStream& stream, const sdnp::HandshakeReply& reply,
                const PredictHandler& handler);

}  // namespace simdiff

#endif  // SIMDIFF_REMOTE_HPP_
