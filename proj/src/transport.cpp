#include "earac/transport.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

#include <boost/asio.hpp>

namespace earac {

namespace {

namespace asio = boost::asio;

// One direction of an in-process pipe.
struct Pipe {
    std::mutex mutex;
    std::condition_variable ready;
    std::deque<char> bytes;
    bool writer_closed = false;
    bool reader_gone = false;
};

class InProcessStream : public ByteStream {
public:
    InProcessStream(std::shared_ptr<Pipe> in, std::shared_ptr<Pipe> out) : in_(std::move(in)), out_(std::move(out)) {}

    ~InProcessStream() override {
        close();
        std::lock_guard lock(in_->mutex);
        in_->reader_gone = true;
    }

    void write(std::string_view bytes) override {
        std::lock_guard lock(out_->mutex);
        if (out_->writer_closed) throw TransportError("write after close");
        if (out_->reader_gone) throw TransportError("peer has gone away");
        out_->bytes.insert(out_->bytes.end(), bytes.begin(), bytes.end());
        out_->ready.notify_all();
    }

    std::size_t read_some(std::span<char> buffer) override {
        std::unique_lock lock(in_->mutex);
        in_->ready.wait(lock, [&] { return !in_->bytes.empty() || in_->writer_closed; });
        const std::size_t n = std::min(buffer.size(), in_->bytes.size());
        std::copy_n(in_->bytes.begin(), n, buffer.begin());
        in_->bytes.erase(in_->bytes.begin(), in_->bytes.begin() + static_cast<std::ptrdiff_t>(n));
        return n;
    }

    void close() override {
        std::lock_guard lock(out_->mutex);
        out_->writer_closed = true;
        out_->ready.notify_all();
    }

private:
    std::shared_ptr<Pipe> in_;
    std::shared_ptr<Pipe> out_;
};

class TcpStream : public ByteStream {
public:
    TcpStream(std::shared_ptr<asio::io_context> io, asio::ip::tcp::socket socket)
        : io_(std::move(io)), socket_(std::move(socket)) {}

    ~TcpStream() override {
        boost::system::error_code ec;
        socket_.close(ec);
    }

    void write(std::string_view bytes) override {
        if (closed_) throw TransportError("write after close");
        boost::system::error_code ec;
        asio::write(socket_, asio::buffer(bytes.data(), bytes.size()), ec);
        if (ec) throw TransportError("tcp write: " + ec.message());
    }

    std::size_t read_some(std::span<char> buffer) override {
        boost::system::error_code ec;
        const std::size_t n = socket_.read_some(asio::buffer(buffer.data(), buffer.size()), ec);
        if (ec == asio::error::eof) return 0;
        if (ec) throw TransportError("tcp read: " + ec.message());
        return n;
    }

    void close() override {
        if (closed_) return;
        closed_ = true;
        boost::system::error_code ec;
        socket_.shutdown(asio::ip::tcp::socket::shutdown_send, ec);
    }

private:
    std::shared_ptr<asio::io_context> io_;  // must outlive the socket
    asio::ip::tcp::socket socket_;
    bool closed_ = false;
};

StreamPair make_inprocess_pair() {
    auto a_to_b = std::make_shared<Pipe>();
    auto b_to_a = std::make_shared<Pipe>();
    return {std::make_unique<InProcessStream>(b_to_a, a_to_b), std::make_unique<InProcessStream>(a_to_b, b_to_a)};
}

StreamPair make_tcp_pair() {
    try {
        auto io = std::make_shared<asio::io_context>();
        asio::ip::tcp::acceptor acceptor(*io, asio::ip::tcp::endpoint(asio::ip::address_v4::loopback(), 0));
        asio::ip::tcp::socket client(*io);
        // The handshake completes against the listen backlog, so connecting
        // before accepting does not block.
        client.connect(acceptor.local_endpoint());
        asio::ip::tcp::socket server = acceptor.accept();
        client.set_option(asio::ip::tcp::no_delay(true));
        server.set_option(asio::ip::tcp::no_delay(true));
        return {std::make_unique<TcpStream>(io, std::move(client)), std::make_unique<TcpStream>(io, std::move(server))};
    } catch (const boost::system::system_error& e) {
        throw TransportError(std::string("tcp loopback setup: ") + e.what());
    }
}

}  // namespace

const char* transport_name(TransportKind kind) {
    return kind == TransportKind::InProcess ? "inproc" : "tcp";
}

StreamPair make_stream_pair(TransportKind kind) {
    return kind == TransportKind::InProcess ? make_inprocess_pair() : make_tcp_pair();
}

void LineChannel::send(std::string_view line) {
    if (line.find('\n') != std::string_view::npos) throw std::invalid_argument("record contains a newline");
    std::string framed(line);
    framed.push_back('\n');
    stream_->write(framed);
}

std::optional<std::string> LineChannel::receive() {
    char chunk[4096];
    for (;;) {
        const auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        if (buffer_.size() > kMaxLine) throw TransportError("record exceeds the line limit");
        const std::size_t n = stream_->read_some(chunk);
        if (n == 0) {
            if (!buffer_.empty()) throw TransportError("stream ended inside a record");
            return std::nullopt;
        }
        buffer_.append(chunk, n);
    }
}

void LineChannel::close() {
    if (closed_) return;
    closed_ = true;
    stream_->close();
}

}  // namespace earac
