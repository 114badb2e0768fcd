#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "mathfind/service/searcher.hpp"

namespace mathfind {

struct ApiResponse {
    int status = 200;
    std::string body;  // JSON
};

/// JSON API over a swappable index. Requests made before an index is set
/// get 503. Routing lives in handle(), so it can be driven without sockets.
class ApiServer {
  public:
    explicit ApiServer(SearchOptions options = {});
    ~ApiServer();
    ApiServer(ApiServer const&) = delete;
    ApiServer& operator=(ApiServer const&) = delete;

    /// In-flight requests keep the index they started with.
    void swap_index(std::shared_ptr<LoadedIndex const> next);
    [[nodiscard]] std::shared_ptr<LoadedIndex const> current() const;

    [[nodiscard]] ApiResponse handle(std::string_view method, std::string_view path,
                                     std::string_view body) const;

    /// Port 0 picks a free port. Returns the bound port; throws on failure.
    int bind(std::string const& host, int port);
    /// Serves until stop(); call bind() first.
    void run();
    void stop();

  private:
    struct Impl;
    std::unique_ptr<Impl> m_impl;
};

}  // namespace mathfind
