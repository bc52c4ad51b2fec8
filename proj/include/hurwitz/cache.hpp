#pragma once

#include <map>
#include <mutex>
#include <optional>

namespace hcn {

// Mutex-guarded memo table. The computation runs outside the lock, so two
// threads may race to fill the same key; both produce the same value.
template <class Key, class Value>
class MemoTable {
 public:
  template <class F>
  Value get(const Key& key, F&& compute) {
    {
      std::lock_guard lock(mutex_);
      if (auto it = table_.find(key); it != table_.end()) return it->second;
    }
    Value v = compute();
    std::lock_guard lock(mutex_);
    return table_.emplace(key, std::move(v)).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<Key, Value> table_;
};

}  // namespace hcn
