#pragma once

#include <string>
#include <vector>

#include "guiagent/action.hpp"
#include "guiagent/parsing.hpp"

namespace guiagent {

/// One executed step as the interpreter sees it on later turns.
struct HistoryEntry {
  StructuredStep step;
  ActionTriplet action;
};

/// "(none)" for an empty history, otherwise one line per step:
///   1. TYPE "Netflix" on "Search bar"
///   2. CLICK on "Submit button"
std::string history_to_text(const std::vector<HistoryEntry>& history);

}  // namespace guiagent
