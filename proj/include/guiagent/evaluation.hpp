#pragma once

// Benchmark drivers: grounding accuracy over screenshot records, offline
// replay of recorded trajectories, and OmniACT-style scoring of recorded
// predictions. Records are scored on a worker pool and folded in id order.

#include <vector>

#include "guiagent/backends.hpp"
#include "guiagent/metrics.hpp"

namespace guiagent {

/// Located point inside the record's bbox, sliced by platform, category and
/// platform+category. Locator failures fall back to the screen center;
/// unreadable images count as misses. Per-record detail carries the raw
/// reply, parsed point, pattern family and fallback flag.
MetricReport grounding_accuracy(const std::vector<GroundingRecord>& records, const Locator& locator,
                                int parallelism = 1);

/// Gold steps for one trajectory as seen by the interpreter's history: the
/// recorded description, operation and value, located at the center of the
/// first acceptable bbox.
std::vector<HistoryEntry> gold_history(const std::vector<const OfflineStepRecord*>& prior);

/// Runs one agent step per record with the gold history of its trajectory
/// and scores Ele.Acc, Op.F1 and Step SR. Steps that fail score as misses
/// with an empty prediction. Sliced by split.
MetricReport replay_offline(const std::vector<OfflineStepRecord>& records,
                            const Interpreter& interpreter, const Locator& locator,
                            int parallelism = 1);

/// Interpreter script that reproduces the recorded steps, keyed by
/// trajectory id.
ScriptedInterpreter::Scripts gold_scripts(const std::vector<OfflineStepRecord>& records);

/// SeqScore and the action score over recorded predictions, sliced by split.
MetricReport score_omni(const std::vector<OmniRecord>& records);

}  // namespace guiagent
