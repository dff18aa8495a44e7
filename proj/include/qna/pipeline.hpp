#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qna/config.hpp"

namespace qna {

// Raised when a stage body fails; carries the stage name so the CLI can
// report where to resume.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& cause)
      : Error("stage " + stage + ": " + cause), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct ManifestEntry {
  std::string stage;
  std::string input_hash;
  std::string params_hash;
  std::string output_hash;
};

// out/manifest.jsonl, one line per completed stage run (last entry wins).
std::map<std::string, ManifestEntry> load_manifest(const std::string& out_dir);

struct StageOverrides {
  std::optional<std::size_t> k;        // topics: fit exactly this k
  std::optional<double> fraction;      // graph: top-fraction override
  std::optional<std::string> event;    // graph: only this event
};

struct RunSummary {
  std::vector<std::string> executed;
  std::vector<std::string> skipped;
};

inline const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {"ingest",  "clean",     "matrix",
                                                 "topics",  "subset",    "extract",
                                                 "normalize", "report",  "graph"};
  return names;
}

// Runs every stage in order, skipping stages whose input/params/output
// hashes are unchanged.
RunSummary run_pipeline(const PipelineConfig& config);

// Runs exactly one stage; upstream artifacts must already exist, otherwise
// throws naming the stage that produces them.
RunSummary run_single_stage(const PipelineConfig& config, const std::string& stage,
                            const StageOverrides& overrides = {});

// JSON-lines logging to stderr.
void log_line(const std::string& level, const std::string& stage, const std::string& msg);

}  // namespace qna
