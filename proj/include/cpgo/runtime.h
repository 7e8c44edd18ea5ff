/*
 * Copyright 2026 The cpgo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CPGO_RUNTIME_H_
#define CPGO_RUNTIME_H_

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <mutex>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "cpgo/graph.h"
#include "cpgo/solver.h"

namespace cpgo {

// A vertex's estimate as broadcast to one neighbor in one round.
struct RoundMessage {
  VertexId sender = 0;
  VertexId receiver = 0;
  int round = 0;
  Vector3 t = Vector3::Zero();
  Matrix3 r = Matrix3::Identity();
};

// The sender's own measurement of the receiver, sent once before round 0.
struct MeasurementMessage {
  VertexId sender = 0;
  VertexId receiver = 0;
  Vector3 t = Vector3::Zero();
  Matrix3 r = Matrix3::Identity();
};

// One delivered message. Measurement exchanges use kSetupRound.
struct MessageLogEntry {
  static constexpr int kSetupRound = -1;

  int round = 0;
  VertexId sender = 0;
  VertexId receiver = 0;

  friend auto operator<=>(const MessageLogEntry&,
                          const MessageLogEntry&) = default;
};

template <typename Message>
class Mailbox {
 public:
  void Post(Message message) {
    std::lock_guard lock(mutex_);
    messages_.push_back(std::move(message));
  }

  std::vector<Message> Drain() {
    std::lock_guard lock(mutex_);
    return std::exchange(messages_, {});
  }

 private:
  std::mutex mutex_;
  std::vector<Message> messages_;
};

// Reusable barrier for a fixed number of threads. The last thread to arrive
// runs the completion it passed before anyone is released.
class RoundBarrier {
 public:
  RoundBarrier(int participants, std::chrono::milliseconds timeout);

  // Returns false once Abort() was called. Throws DeadlockTimeout if the
  // other participants do not arrive within the timeout; the barrier is then
  // aborted for everyone else.
  bool ArriveAndWait(const std::function<void()>& completion = {});

  void Abort();

 private:
  std::mutex mutex_;
  std::condition_variable released_;
  const int participants_;
  const std::chrono::milliseconds timeout_;
  int waiting_ = 0;
  std::size_t generation_ = 0;
  bool aborted_ = false;
};

// State owned by one vertex. Built from the vertex's own outgoing
// measurements only; it never sees the graph.
class NodeWorker {
 public:
  // `outgoing` holds measurements (id, j), ascending in j.
  NodeWorker(VertexId id, Pose init,
             std::vector<RelativeMeasurement> outgoing);

  VertexId id() const { return id_; }
  std::span<const VertexId> neighbors() const { return neighbors_; }
  const Pose& estimate() const { return estimate_; }

  std::vector<MeasurementMessage> MeasurementMessages() const;
  // Stores each neighbor's measurement of this vertex. Throws
  // MissingNeighborData unless exactly one arrives from every neighbor.
  void ReceiveMeasurements(std::vector<MeasurementMessage> inbox);

  std::vector<RoundMessage> Broadcast(int round) const;
  // Evaluates controls from one message per neighbor, all tagged `round`.
  // Throws MissingNeighborData otherwise.
  const NodeEvaluation& Compute(int round, std::vector<RoundMessage> inbox,
                                TranslationMode mode);
  // Integrates the controls from the last Compute().
  void Apply(double dt);

 private:
  VertexId id_;
  Pose estimate_;
  std::vector<VertexId> neighbors_;
  std::vector<IncidentEdge> edges_;
  std::vector<Pose> neighbor_estimates_;
  NodeEvaluation last_;
};

struct RuntimeConfig {
  // Worker threads; 0 runs every worker on its own thread.
  int num_threads = static_cast<int>(std::thread::hardware_concurrency());
  std::chrono::milliseconds deadlock_timeout{60000};
  bool log_messages = false;
};

// Called by the monitor after every round with the estimates the round
// evaluated (round k holds the state after k integration steps).
using RoundObserver = std::function<void(int round, std::span<const Pose>)>;

struct DistributedResult {
  std::vector<Pose> estimates;
  std::vector<HistoryEntry> history;
  ObjectiveValue final_objective;
  int iterations = 0;
  bool converged = false;
  double wall_clock_seconds = 0.0;
  // Sorted by (round, sender, receiver); empty unless log_messages.
  std::vector<MessageLogEntry> message_log;
  // Estimate messages delivered in each round.
  std::vector<std::size_t> messages_per_round;
};

// Runs the consensus flow with one worker per vertex exchanging estimates
// with neighbors in synchronous rounds. A monitor sums the per-vertex
// objectives in id order and applies the solver's stopping rule, so the
// result matches Solver::Solve bit for bit.
DistributedResult RunDistributed(const PoseGraph& graph,
                                 std::vector<Pose> init,
                                 const SolverConfig& solver_config,
                                 const RuntimeConfig& runtime_config = {},
                                 const RoundObserver& observer = {});

struct PairwiseRoundResult {
  PoseGraph graph;
  std::vector<MessageLogEntry> message_log;
};

// Every vertex sends each neighbor its rotation measurement once, then
// averages every outgoing rotation with the reply. Equals
// EnforcePairwiseRotations(graph).
PairwiseRoundResult OneShotPairwiseRound(const PoseGraph& graph);

struct LocalityAudit {
  bool ok = true;
  // Entries whose sender and receiver are not adjacent.
  std::size_t non_neighbor_reads = 0;
  // Rounds in which some directed edge carried zero or several messages.
  std::size_t irregular_rounds = 0;
};

LocalityAudit AuditLocality(const PoseGraph& graph,
                            std::span<const MessageLogEntry> log);

// One JSON object per line: {"round":k,"sender":i,"receiver":j}.
void WriteMessageLog(std::span<const MessageLogEntry> log, std::ostream& out);

}  // namespace cpgo

#endif  // CPGO_RUNTIME_H_
