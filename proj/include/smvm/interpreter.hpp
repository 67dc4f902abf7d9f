#pragma once

#include "smvm/action.hpp"
#include "smvm/state.hpp"
#include "smvm/variation.hpp"

namespace smvm {

/// Executes one action for the top frame of thread `tid` of object `oid`.
///
/// Data actions touch only the acting frame or the acting object's
/// attributes. Call, SendSignal and Return additionally hand exactly one
/// event to the configured medium. After Call the thread is Waiting with its
/// pc already advanced past the call. Return pops the frame and terminates
/// the thread when its stack becomes empty.
void interpret(const Action& action, SimState& s, ObjectId oid, ThreadId tid, const Config& cfg);

}  // namespace smvm
