#pragma once

// Duplex byte streams connecting the session endpoints.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace earac {

class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ByteStream {
public:
    virtual ~ByteStream() = default;

    // Blocks until all bytes are handed to the transport. Throws
    // TransportError after close() or when the peer has gone away.
    virtual void write(std::string_view bytes) = 0;

    // Blocks until at least one byte is available; returns 0 once the peer
    // has closed its side and everything it sent has been read.
    virtual std::size_t read_some(std::span<char> buffer) = 0;

    // Ends this side's output. The peer drains what was sent, then sees EOF.
    virtual void close() = 0;
};

enum class TransportKind { InProcess, TcpLoopback };

const char* transport_name(TransportKind kind);

struct StreamPair {
    std::unique_ptr<ByteStream> first;
    std::unique_ptr<ByteStream> second;
};

// Two connected ends. The TCP variant binds 127.0.0.1 on an ephemeral port.
StreamPair make_stream_pair(TransportKind kind);

// Newline-framed records over a stream. Not thread-safe; one owner.
class LineChannel {
public:
    static constexpr std::size_t kMaxLine = 1 << 16;

    explicit LineChannel(std::unique_ptr<ByteStream> stream) : stream_(std::move(stream)) {}

    void send(std::string_view line);       // appends '\n'
    std::optional<std::string> receive();  // nullopt at a clean EOF
    void close();

private:
    std::unique_ptr<ByteStream> stream_;
    std::string buffer_;
    bool closed_ = false;
};

}  // namespace earac
