package dev.corpus.util;

import java.util.concurrent.ConcurrentHashMap;

/** Weakly growing intern pool with usage counters. */
public final class Interner<T> {
  private static final class Entry<T> {
    final T value;
    long uses;

    Entry(T value) {
      this.value = value;
    }
  }

  private final ConcurrentHashMap<T, Entry<T>> pool = new ConcurrentHashMap<>();

  public T intern(T value) {
    Entry<T> entry = pool.computeIfAbsent(value, Entry::new);
    entry.uses++;
    return entry.value;
  }

  public long uses(T value) {
    Entry<T> entry = pool.get(value);
    return entry == null ? 0 : entry.uses;
  }

  public int size() {
    return pool.size();
  }

  public void clear() {
    pool.clear();
  }
}
