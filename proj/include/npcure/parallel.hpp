#pragma once

#include <cstddef>
#include <functional>

namespace npcure {

// Worker count used by parallel loops: explicit request, else the
// NPCURE_WORKERS environment variable, else hardware concurrency.
// Results never depend on the resolved count; work items own their
// random substreams and outputs are written to preassigned slots.
std::size_t resolve_workers(int requested);

// Runs fn(i) for i in [0, count) across workers. fn must only touch
// per-index state. Exceptions are captured and the first one rethrown.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace npcure
