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

#include "cpgo/runtime.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <map>
#include <string>

#include "cpgo/consistency.h"
#include "cpgo/errors.h"
#include "json.hpp"

namespace cpgo {

RoundBarrier::RoundBarrier(int participants, std::chrono::milliseconds timeout)
    : participants_(participants), timeout_(timeout) {}

bool RoundBarrier::ArriveAndWait(const std::function<void()>& completion) {
  std::unique_lock lock(mutex_);
  if (aborted_) return false;
  const std::size_t generation = generation_;
  if (++waiting_ == participants_) {
    if (completion) {
      try {
        completion();
      } catch (...) {
        aborted_ = true;
        released_.notify_all();
        throw;
      }
    }
    waiting_ = 0;
    ++generation_;
    released_.notify_all();
    return true;
  }
  const bool released = released_.wait_for(lock, timeout_, [&] {
    return generation_ != generation || aborted_;
  });
  if (!released) {
    aborted_ = true;
    released_.notify_all();
    throw DeadlockTimeout("barrier: " + std::to_string(waiting_) + " of " +
                          std::to_string(participants_) +
                          " participants arrived within " +
                          std::to_string(timeout_.count()) + " ms");
  }
  return generation_ != generation;
}

void RoundBarrier::Abort() {
  std::lock_guard lock(mutex_);
  aborted_ = true;
  released_.notify_all();
}

NodeWorker::NodeWorker(VertexId id, Pose init,
                       std::vector<RelativeMeasurement> outgoing)
    : id_(id), estimate_(std::move(init)) {
  for (const RelativeMeasurement& m : outgoing) {
    neighbors_.push_back(m.dst);
    edges_.push_back(IncidentEdge{m.dst, m.t_rel, m.r_rel, Vector3::Zero(),
                                  Matrix3::Identity()});
  }
  neighbor_estimates_.resize(neighbors_.size());
}

std::vector<MeasurementMessage> NodeWorker::MeasurementMessages() const {
  std::vector<MeasurementMessage> out;
  for (const IncidentEdge& e : edges_) {
    out.push_back(MeasurementMessage{id_, e.neighbor, e.t_out, e.r_out});
  }
  return out;
}

void NodeWorker::ReceiveMeasurements(std::vector<MeasurementMessage> inbox) {
  std::sort(inbox.begin(), inbox.end(),
            [](const auto& a, const auto& b) { return a.sender < b.sender; });
  if (inbox.size() != edges_.size()) {
    throw MissingNeighborData("vertex " + std::to_string(id_) + " received " +
                              std::to_string(inbox.size()) +
                              " measurements from " +
                              std::to_string(edges_.size()) + " neighbors");
  }
  for (std::size_t k = 0; k < inbox.size(); ++k) {
    if (inbox[k].sender != edges_[k].neighbor) {
      throw MissingNeighborData("vertex " + std::to_string(id_) +
                                " has no measurement from neighbor " +
                                std::to_string(edges_[k].neighbor));
    }
    edges_[k].t_in = inbox[k].t;
    edges_[k].r_in = inbox[k].r;
  }
}

std::vector<RoundMessage> NodeWorker::Broadcast(int round) const {
  std::vector<RoundMessage> out;
  out.reserve(neighbors_.size());
  for (VertexId j : neighbors_) {
    out.push_back(RoundMessage{id_, j, round, estimate_.t, estimate_.r});
  }
  return out;
}

const NodeEvaluation& NodeWorker::Compute(int round,
                                          std::vector<RoundMessage> inbox,
                                          TranslationMode mode) {
  std::sort(inbox.begin(), inbox.end(),
            [](const auto& a, const auto& b) { return a.sender < b.sender; });
  if (inbox.size() != neighbors_.size()) {
    throw MissingNeighborData("vertex " + std::to_string(id_) + " round " +
                              std::to_string(round) + ": " +
                              std::to_string(inbox.size()) + " messages for " +
                              std::to_string(neighbors_.size()) +
                              " neighbors");
  }
  for (std::size_t k = 0; k < inbox.size(); ++k) {
    if (inbox[k].sender != neighbors_[k] || inbox[k].round != round) {
      throw MissingNeighborData(
          "vertex " + std::to_string(id_) + " round " + std::to_string(round) +
          ": no message from neighbor " + std::to_string(neighbors_[k]));
    }
    neighbor_estimates_[k] = Pose{inbox[k].t, inbox[k].r};
  }
  last_ = EvaluateNode(id_, estimate_, edges_, neighbor_estimates_, mode);
  return last_;
}

void NodeWorker::Apply(double dt) {
  estimate_ = Integrate(estimate_, last_.controls, dt);
}

namespace {

// Per-vertex snapshot the monitor reads after each round.
struct NodeReport {
  ObjectiveValue objective;
  double max_control_norm = 0.0;
  bool controls_zero = false;
  std::size_t received = 0;
};

class DistributedRun {
 public:
  DistributedRun(const PoseGraph& graph, std::vector<Pose> init,
                 const SolverConfig& solver_config,
                 const RuntimeConfig& runtime_config,
                 const RoundObserver& observer)
      : solver_config_(solver_config),
        runtime_config_(runtime_config),
        observer_(observer),
        num_threads_(runtime_config.num_threads <= 0
                         ? graph.num_vertices()
                         : std::min(runtime_config.num_threads,
                                    graph.num_vertices())),
        barrier_(num_threads_, runtime_config.deadlock_timeout),
        setup_boxes_(graph.num_vertices()),
        state_boxes_(graph.num_vertices()),
        reports_(graph.num_vertices()),
        logs_(num_threads_) {
    for (VertexId i = 0; i < graph.num_vertices(); ++i) {
      const auto outgoing = graph.outgoing(i);
      workers_.emplace_back(
          i, init[i],
          std::vector<RelativeMeasurement>(outgoing.begin(), outgoing.end()));
    }
  }

  DistributedResult Run() {
    const auto start = std::chrono::steady_clock::now();
    {
      std::vector<std::jthread> threads;
      for (int t = 0; t < num_threads_; ++t) {
        threads.emplace_back([this, t] { ThreadMain(t); });
      }
    }
    if (error_) std::rethrow_exception(error_);

    for (const NodeWorker& w : workers_) {
      result_.estimates.push_back(w.estimate());
    }
    for (auto& log : logs_) {
      result_.message_log.insert(result_.message_log.end(), log.begin(),
                                 log.end());
    }
    std::sort(result_.message_log.begin(), result_.message_log.end());
    result_.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start)
            .count();
    return std::move(result_);
  }

 private:
  void ThreadMain(int thread_index) {
    std::vector<NodeWorker*> mine;
    for (std::size_t i = thread_index; i < workers_.size();
         i += num_threads_) {
      mine.push_back(&workers_[i]);
    }
    std::vector<MessageLogEntry>& log = logs_[thread_index];
    try {
      for (NodeWorker* w : mine) {
        for (MeasurementMessage& m : w->MeasurementMessages()) {
          setup_boxes_[m.receiver].Post(std::move(m));
        }
      }
      if (!barrier_.ArriveAndWait()) return;
      for (NodeWorker* w : mine) {
        std::vector<MeasurementMessage> inbox = setup_boxes_[w->id()].Drain();
        Log(log, MessageLogEntry::kSetupRound, inbox);
        w->ReceiveMeasurements(std::move(inbox));
      }

      for (int round = 0;; ++round) {
        for (NodeWorker* w : mine) {
          for (RoundMessage& m : w->Broadcast(round)) {
            state_boxes_[m.receiver].Post(std::move(m));
          }
        }
        if (!barrier_.ArriveAndWait()) return;
        for (NodeWorker* w : mine) {
          std::vector<RoundMessage> inbox = state_boxes_[w->id()].Drain();
          Log(log, round, inbox);
          NodeReport& report = reports_[w->id()];
          report.received = inbox.size();
          const NodeEvaluation& eval =
              w->Compute(round, std::move(inbox), solver_config_.translation_mode);
          report.objective = eval.objective;
          report.max_control_norm = std::max(eval.controls.linear.norm(),
                                             eval.controls.angular.norm());
          report.controls_zero = eval.controls.linear.isZero(0.0) &&
                                 eval.controls.angular.isZero(0.0);
        }
        if (!barrier_.ArriveAndWait([this, round] { Monitor(round); })) {
          return;
        }
        if (stop_) return;
        for (NodeWorker* w : mine) w->Apply(solver_config_.dt);
      }
    } catch (...) {
      {
        std::lock_guard lock(error_mutex_);
        if (!error_) error_ = std::current_exception();
      }
      barrier_.Abort();
    }
  }

  template <typename Message>
  void Log(std::vector<MessageLogEntry>& log, int round,
           const std::vector<Message>& inbox) const {
    if (!runtime_config_.log_messages) return;
    for (const Message& m : inbox) {
      log.push_back(MessageLogEntry{round, m.sender, m.receiver});
    }
  }

  // Runs on the last thread to reach the post-compute barrier.
  void Monitor(int round) {
    ObjectiveValue total;
    double max_control_norm = 0.0;
    bool all_zero = true;
    std::size_t received = 0;
    for (const NodeReport& r : reports_) {
      total += r.objective;
      max_control_norm = std::max(max_control_norm, r.max_control_norm);
      all_zero = all_zero && r.controls_zero;
      received += r.received;
    }
    result_.messages_per_round.push_back(received);
    if (solver_config_.record_history) {
      result_.history.push_back({round, total, max_control_norm});
    }
    if (observer_) {
      std::vector<Pose> snapshot;
      snapshot.reserve(workers_.size());
      for (const NodeWorker& w : workers_) snapshot.push_back(w.estimate());
      observer_(round, snapshot);
    }
    result_.converged =
        round == 0 ? all_zero
                   : std::abs(total.geodesic - previous_geodesic_) <
                         solver_config_.stop_tol;
    previous_geodesic_ = total.geodesic;
    result_.final_objective = total;
    result_.iterations = round;
    stop_ = result_.converged || round >= solver_config_.max_iters;
  }

  const SolverConfig solver_config_;
  const RuntimeConfig runtime_config_;
  const RoundObserver& observer_;
  const int num_threads_;
  RoundBarrier barrier_;
  std::vector<NodeWorker> workers_;
  std::vector<Mailbox<MeasurementMessage>> setup_boxes_;
  std::vector<Mailbox<RoundMessage>> state_boxes_;
  std::vector<NodeReport> reports_;
  std::vector<std::vector<MessageLogEntry>> logs_;

  // Written by the monitor only, read after barriers.
  bool stop_ = false;
  double previous_geodesic_ = 0.0;
  DistributedResult result_;

  std::mutex error_mutex_;
  std::exception_ptr error_;
};

}  // namespace

DistributedResult RunDistributed(const PoseGraph& graph,
                                 std::vector<Pose> init,
                                 const SolverConfig& solver_config,
                                 const RuntimeConfig& runtime_config,
                                 const RoundObserver& observer) {
  solver_config.Validate();
  CheckStepSize(solver_config.dt, MaxDegree(graph));
  if (static_cast<int>(init.size()) != graph.num_vertices()) {
    throw MissingNeighborData("expected " +
                              std::to_string(graph.num_vertices()) +
                              " initial poses, got " +
                              std::to_string(init.size()));
  }
  if (runtime_config.deadlock_timeout.count() <= 0) {
    throw ConfigError("deadlock_timeout", "must be positive");
  }
  DistributedRun run(graph, std::move(init), solver_config, runtime_config,
                     observer);
  return run.Run();
}

PairwiseRoundResult OneShotPairwiseRound(const PoseGraph& graph) {
  const int n = graph.num_vertices();
  std::vector<Mailbox<MeasurementMessage>> boxes(n);
  for (VertexId i = 0; i < n; ++i) {
    for (const RelativeMeasurement& m : graph.outgoing(i)) {
      boxes[m.dst].Post(MeasurementMessage{i, m.dst, m.t_rel, m.r_rel});
    }
  }
  std::vector<MessageLogEntry> log;
  std::vector<RelativeMeasurement> averaged;
  averaged.reserve(graph.num_measurements());
  for (VertexId i = 0; i < n; ++i) {
    std::vector<MeasurementMessage> inbox = boxes[i].Drain();
    std::sort(inbox.begin(), inbox.end(),
              [](const auto& a, const auto& b) { return a.sender < b.sender; });
    const auto outgoing = graph.outgoing(i);
    if (inbox.size() != outgoing.size()) {
      throw MissingNeighborData("vertex " + std::to_string(i) +
                                " missing reverse measurements");
    }
    for (std::size_t k = 0; k < outgoing.size(); ++k) {
      const RelativeMeasurement& ij = outgoing[k];
      if (inbox[k].sender != ij.dst) {
        throw MissingNeighborData("vertex " + std::to_string(i) +
                                  " has no measurement from " +
                                  std::to_string(ij.dst));
      }
      log.push_back(MessageLogEntry{MessageLogEntry::kSetupRound,
                                    inbox[k].sender, i});
      RelativeMeasurement out = ij;
      try {
        out.r_rel = AveragedRotation(ij.r_rel, inbox[k].r);
      } catch (const AngleAtPi& e) {
        throw AngleAtPi(e.angle(), std::make_pair(ij.src, ij.dst));
      }
      averaged.push_back(out);
    }
  }
  std::sort(log.begin(), log.end());
  return PairwiseRoundResult{PoseGraph::Build(n, std::move(averaged)),
                             std::move(log)};
}

LocalityAudit AuditLocality(const PoseGraph& graph,
                            std::span<const MessageLogEntry> log) {
  LocalityAudit audit;
  std::map<int, std::vector<std::size_t>> per_round;
  for (const MessageLogEntry& e : log) {
    const bool in_range = e.sender >= 0 && e.sender < graph.num_vertices() &&
                          e.receiver >= 0 &&
                          e.receiver < graph.num_vertices();
    const std::size_t k =
        in_range ? graph.Find(e.sender, e.receiver) : PoseGraph::npos;
    auto& counts = per_round[e.round];
    if (counts.empty()) counts.assign(graph.num_measurements(), 0);
    if (k == PoseGraph::npos) {
      ++audit.non_neighbor_reads;
      continue;
    }
    ++counts[k];
  }
  for (const auto& [round, counts] : per_round) {
    if (std::any_of(counts.begin(), counts.end(),
                    [](std::size_t c) { return c != 1; })) {
      ++audit.irregular_rounds;
    }
  }
  audit.ok = audit.non_neighbor_reads == 0 && audit.irregular_rounds == 0;
  return audit;
}

void WriteMessageLog(std::span<const MessageLogEntry> log, std::ostream& out) {
  for (const MessageLogEntry& e : log) {
    out << nlohmann::ordered_json{{"round", e.round},
                          {"sender", e.sender},
                          {"receiver", e.receiver}}
               .dump()
        << '\n';
  }
}

}  // namespace cpgo
