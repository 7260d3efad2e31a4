#pragma once

#include <memory>
#include <optional>
#include <string>

#include "conceptmap/pipeline.hpp"

namespace conceptmap {

/// HTTP API over the pipeline and the latest graph snapshot.
///
/// Reads run against an immutable snapshot; a pipeline run publishes a new
/// snapshot only after its artifacts are persisted. At most one run is
/// active at a time.
class Service {
 public:
  /// Loads the store's current artifacts if present. Throws on a corrupt store.
  explicit Service(PipelineConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the configured host and port (port 0 picks a free one) and
  /// serves on a background thread. Throws Error("bind_failure").
  int start();
  /// Blocks until stop() is called from another thread or a signal handler.
  void wait();
  /// Stops accepting connections, lets in-flight requests finish and waits
  /// for an active pipeline run.
  void stop();

  int port() const;
  const PipelineConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace conceptmap
