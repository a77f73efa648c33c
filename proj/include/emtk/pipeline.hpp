// Copyright 2026 The emtk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Staged executor: a reader numbers and batches the source, a router hands
// batches to the least-loaded worker mailbox, workers apply the work
// function, and a writer restores sequence order before calling the sink.
// All stages talk through bounded queues; the coordinator (run_pipeline)
// owns the threads and joins them before returning.
//
// At most `channel_capacity` batches are in flight between the reader and
// the sink, which bounds the writer's reorder buffer.

#ifndef EMTK_PIPELINE_HPP
#define EMTK_PIPELINE_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <thread>
#include <vector>

namespace emtk {

struct PipelineConfig {
  std::size_t workers = default_workers();
  std::size_t batch_size = 64;
  std::size_t channel_capacity = 0;  // 0 -> 4 * workers

  static std::size_t default_workers() {
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
  std::size_t capacity() const { return channel_capacity == 0 ? 4 * workers : channel_capacity; }
};

template <typename Out>
struct SequencedResult {
  std::uint64_t seq = 0;
  std::optional<Out> value;
  std::string error;  // set when value is empty

  bool ok() const { return value.has_value(); }
};

struct StageTimes {
  double reader = 0;
  double router = 0;
  double workers = 0;  // summed busy time across workers
  double writer = 0;
  double total = 0;
};

struct RunStats {
  std::size_t processed = 0;  // results delivered to the sink
  std::size_t failed = 0;     // of which carried an error
  std::size_t max_reorder_batches = 0;
  std::size_t max_reorder_items = 0;
  StageTimes seconds;
  std::optional<std::string> source_error;
};

/// Blocking multi-producer multi-consumer queue with a fixed capacity.
template <typename T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(std::max<std::size_t>(capacity, 1)) {}

  /// False when the queue was closed.
  bool push(T item) {
    std::unique_lock lock(mutex_);
    not_full_.wait(lock, [&] { return closed_ || items_.size() < capacity_; });
    if (closed_) return false;
    items_.push_back(std::move(item));
    not_empty_.notify_one();
    return true;
  }

  /// Empty optional once closed and drained.
  std::optional<T> pop() {
    std::unique_lock lock(mutex_);
    not_empty_.wait(lock, [&] { return closed_ || !items_.empty(); });
    if (items_.empty()) return std::nullopt;
    T item = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return item;
  }

  void close() {
    std::lock_guard lock(mutex_);
    closed_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return items_.size();
  }

 private:
  const std::size_t capacity_;
  mutable std::mutex mutex_;
  std::condition_variable not_empty_;
  std::condition_variable not_full_;
  std::deque<T> items_;
  bool closed_ = false;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Work, typename In>
auto apply_work(Work& work, const In& item, std::uint64_t seq) {
  using Out = std::decay_t<decltype(work(item))>;
  SequencedResult<Out> result;
  result.seq = seq;
  try {
    result.value.emplace(work(item));
  } catch (const std::exception& e) {
    result.error = e.what();
  } catch (...) {
    result.error = "unknown error";
  }
  return result;
}

}  // namespace detail

/// Runs `work` over every item of `source` and delivers one result per item
/// to `sink` in source order.
///
///   source: std::optional<In>() -> next item or nullopt at end; may throw
///   work:   Out(const In&), must not touch shared mutable state
///   sink:   void(SequencedResult<Out>&&)
///
/// A throwing work call becomes an error result for that item. A throwing
/// source stops reading; in-flight items are still delivered and the error
/// is reported in RunStats::source_error. A throwing sink cancels the run and
/// the exception is rethrown after every stage has been joined.
template <typename Source, typename Work, typename Sink>
RunStats run_pipeline(Source&& source, Work&& work, Sink&& sink, const PipelineConfig& config) {
  using In = typename std::decay_t<decltype(source())>::value_type;
  using Out = std::decay_t<decltype(work(std::declval<const In&>()))>;

  struct Task {
    std::uint64_t first_seq;
    std::vector<In> items;
  };
  struct Done {
    std::uint64_t batch;
    std::vector<SequencedResult<Out>> results;
  };
  struct Tagged {
    std::uint64_t batch;
    Task task;
  };

  const std::size_t n_workers = std::max<std::size_t>(config.workers, 1);
  const std::size_t batch_size = std::max<std::size_t>(config.batch_size, 1);
  const std::size_t capacity = std::max<std::size_t>(config.capacity(), 1);
  const auto start = detail::Clock::now();

  RunStats stats;
  BoundedQueue<Tagged> to_router(capacity);
  std::vector<std::unique_ptr<BoundedQueue<Tagged>>> mailboxes;
  for (std::size_t w = 0; w < n_workers; ++w) {
    mailboxes.push_back(std::make_unique<BoundedQueue<Tagged>>(capacity));
  }
  BoundedQueue<Done> to_writer(capacity);
  std::counting_semaphore<> in_flight(static_cast<std::ptrdiff_t>(capacity));
  std::atomic<bool> cancelled{false};
  std::exception_ptr sink_error;
  std::vector<double> worker_busy(n_workers, 0.0);

  {
    std::vector<std::jthread> threads;

    // Writer: restores batch order.
    threads.emplace_back([&] {
      const auto t0 = detail::Clock::now();
      std::map<std::uint64_t, std::vector<SequencedResult<Out>>> pending;
      std::uint64_t next_batch = 0;
      while (auto done = to_writer.pop()) {
        pending.emplace(done->batch, std::move(done->results));
        std::size_t items = 0;
        for (const auto& [b, r] : pending) items += r.size();
        stats.max_reorder_batches = std::max(stats.max_reorder_batches, pending.size());
        stats.max_reorder_items = std::max(stats.max_reorder_items, items);
        for (auto it = pending.begin(); it != pending.end() && it->first == next_batch;
             it = pending.erase(it), ++next_batch) {
          if (!cancelled.load()) {
            for (auto& result : it->second) {
              ++stats.processed;
              if (!result.ok()) ++stats.failed;
              try {
                sink(std::move(result));
              } catch (...) {
                sink_error = std::current_exception();
                cancelled.store(true);
                break;
              }
            }
          }
          in_flight.release();
        }
      }
      stats.seconds.writer = detail::seconds_since(t0);
    });

    // Workers.
    for (std::size_t w = 0; w < n_workers; ++w) {
      threads.emplace_back([&, w] {
        while (auto tagged = mailboxes[w]->pop()) {
          const auto t0 = detail::Clock::now();
          Done done{tagged->batch, {}};
          done.results.reserve(tagged->task.items.size());
          std::uint64_t seq = tagged->task.first_seq;
          for (const In& item : tagged->task.items) {
            if (cancelled.load()) {
              SequencedResult<Out> skipped;
              skipped.seq = seq++;
              skipped.error = "cancelled";
              done.results.push_back(std::move(skipped));
              continue;
            }
            done.results.push_back(detail::apply_work(work, item, seq++));
          }
          worker_busy[w] += detail::seconds_since(t0);
          to_writer.push(std::move(done));
        }
      });
    }

    // Router: least-loaded mailbox, lowest index on ties.
    threads.emplace_back([&] {
      const auto t0 = detail::Clock::now();
      while (auto tagged = to_router.pop()) {
        std::size_t target = 0;
        std::size_t depth = mailboxes[0]->size();
        for (std::size_t w = 1; w < n_workers && depth > 0; ++w) {
          std::size_t d = mailboxes[w]->size();
          if (d < depth) {
            depth = d;
            target = w;
          }
        }
        mailboxes[target]->push(std::move(*tagged));
      }
      for (auto& m : mailboxes) m->close();
      stats.seconds.router = detail::seconds_since(t0);
    });

    // Reader runs on the coordinator thread.
    const auto t0 = detail::Clock::now();
    std::uint64_t seq = 0;
    std::uint64_t batch = 0;
    Task task{0, {}};
    const auto flush = [&] {
      if (task.items.empty()) return;
      in_flight.acquire();
      std::uint64_t first = seq;
      seq += task.items.size();
      task.first_seq = first;
      to_router.push(Tagged{batch++, std::move(task)});
      task = Task{seq, {}};
    };
    try {
      while (!cancelled.load()) {
        std::optional<In> item = source();
        if (!item) break;
        task.items.push_back(std::move(*item));
        if (task.items.size() == batch_size) flush();
      }
    } catch (const std::exception& e) {
      stats.source_error = e.what();
    } catch (...) {
      stats.source_error = "unknown source error";
    }
    if (!cancelled.load()) flush();
    stats.seconds.reader = detail::seconds_since(t0);
    to_router.close();

    // Workers finish once their mailboxes are closed and drained; the writer
    // must outlive them, so join workers and router before closing it.
    for (std::size_t i = 1; i < threads.size(); ++i) threads[i].join();
    to_writer.close();
    threads[0].join();
  }

  for (double busy : worker_busy) stats.seconds.workers += busy;
  stats.seconds.total = detail::seconds_since(start);
  if (sink_error) std::rethrow_exception(sink_error);
  return stats;
}

/// Same contract as run_pipeline without any concurrency.
template <typename Source, typename Work, typename Sink>
RunStats sequential_baseline(Source&& source, Work&& work, Sink&& sink) {
  const auto start = detail::Clock::now();
  RunStats stats;
  std::uint64_t seq = 0;
  while (true) {
    using In = typename std::decay_t<decltype(source())>::value_type;
    std::optional<In> item;
    try {
      item = source();
    } catch (const std::exception& e) {
      stats.source_error = e.what();
      break;
    }
    if (!item) break;
    auto result = detail::apply_work(work, *item, seq++);
    ++stats.processed;
    if (!result.ok()) ++stats.failed;
    sink(std::move(result));
  }
  stats.seconds.total = detail::seconds_since(start);
  stats.seconds.workers = stats.seconds.total;
  return stats;
}

/// Source over a random-access container (copies each element).
template <typename Container>
auto source_from(const Container& items) {
  using T = typename Container::value_type;
  return [&items, i = std::size_t{0}]() mutable -> std::optional<T> {
    if (i >= items.size()) return std::nullopt;
    return items[i++];
  };
}

}  // namespace emtk

#endif  // EMTK_PIPELINE_HPP
