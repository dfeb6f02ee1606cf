#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <unistd.h>

#include "scenesmith/llm/client.hpp"
#include "scenesmith/planner/pipeline.hpp"
#include "scenesmith/registry/registry.hpp"
#include "scenesmith/retrieval/embedder.hpp"
#include "scenesmith/retrieval/index.hpp"
#include "scenesmith/retrieval/retrieve.hpp"

namespace test {

namespace fs = std::filesystem;

inline fs::path source_dir() { return fs::path(SCENESMITH_SOURCE_DIR); }
inline fs::path registry_dir() { return source_dir() / "registry"; }
inline fs::path transcripts_dir() { return source_dir() / "transcripts"; }
inline fs::path fixtures_dir() { return source_dir() / "tests" / "fixtures"; }

/// Fresh empty directory, unique per call within the process.
inline fs::path scratch_dir(const std::string& name) {
  static std::atomic<int> counter{0};
  const fs::path p = fs::temp_directory_path() /
                     ("scenesmith_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + "_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

/// Registry, mock embedder and index over the in-repo registry.
struct World {
  scenesmith::MockEmbedder embedder;
  scenesmith::Registry registry;
  scenesmith::EmbeddingIndex index;

  World()
      : registry(scenesmith::load_registry(registry_dir(), &embedder)),
        index(scenesmith::build_index(registry, embedder)) {}

  scenesmith::PipelineDeps deps(scenesmith::LlmBackend& llm) const { return {registry, index, embedder, llm}; }
};

inline const World& world() {
  static const World w;
  return w;
}

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

/// Runs a shell command, capturing stdout (stderr is folded in when merge_stderr is set).
inline CommandResult run_command(const std::string& cmd, bool merge_stderr = true) {
  CommandResult r;
  const std::string full = merge_stderr ? cmd + " 2>&1" : cmd;
  FILE* pipe = ::popen(full.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace test
