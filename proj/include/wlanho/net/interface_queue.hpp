#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <iterator>
#include <optional>
#include <utility>

namespace wlanho {

/**
 * Drop-tail FIFO. Besides the plain push/pop discipline the wireless
 * server needs to take the first item matching a predicate (frames of
 * stations that are off-channel are skipped, not reordered) and to pull
 * out all items of one station when it migrates.
 */
template <typename Item>
class DropTailQueue {
public:
  explicit DropTailQueue(std::size_t capacity)
    : m_capacity(capacity)
  {
  }

  std::size_t capacity() const { return m_capacity; }
  std::size_t size() const { return m_items.size(); }
  bool empty() const { return m_items.empty(); }
  bool full() const { return m_items.size() >= m_capacity; }
  std::uint64_t dropCount() const { return m_drops; }

  /// Returns false (and counts a drop) when the queue is full.
  bool
  push(Item item)
  {
    if (full()) {
      ++m_drops;
      return false;
    }
    m_items.push_back(std::move(item));
    return true;
  }

  /// Re-inserts at the head; used when a transmission is aborted. May
  /// exceed capacity by the aborted item, which was already admitted.
  void
  pushFront(Item item)
  {
    m_items.push_front(std::move(item));
  }

  std::optional<Item>
  pop()
  {
    if (m_items.empty())
      return std::nullopt;
    Item front = std::move(m_items.front());
    m_items.pop_front();
    return front;
  }

  template <typename Pred>
  std::optional<Item>
  takeFirst(Pred&& pred)
  {
    for (auto it = m_items.begin(); it != m_items.end(); ++it) {
      if (pred(*it)) {
        Item out = std::move(*it);
        m_items.erase(it);
        return out;
      }
    }
    return std::nullopt;
  }

  template <typename Pred>
  std::optional<Item>
  takeLast(Pred&& pred)
  {
    for (auto it = m_items.rbegin(); it != m_items.rend(); ++it) {
      if (pred(*it)) {
        Item out = std::move(*it);
        m_items.erase(std::next(it).base());
        return out;
      }
    }
    return std::nullopt;
  }

  template <typename Pred>
  std::deque<Item>
  extractIf(Pred&& pred)
  {
    std::deque<Item> out;
    for (auto it = m_items.begin(); it != m_items.end();) {
      if (pred(*it)) {
        out.push_back(std::move(*it));
        it = m_items.erase(it);
      }
      else {
        ++it;
      }
    }
    return out;
  }

  template <typename Pred>
  std::size_t
  countIf(Pred&& pred) const
  {
    std::size_t n = 0;
    for (const auto& item : m_items)
      n += pred(item) ? 1 : 0;
    return n;
  }

  auto begin() const { return m_items.begin(); }
  auto end() const { return m_items.end(); }

private:
  std::size_t m_capacity;
  std::deque<Item> m_items;
  std::uint64_t m_drops = 0;
};

} // namespace wlanho
