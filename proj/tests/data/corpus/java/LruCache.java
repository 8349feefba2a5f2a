package dev.corpus.cache;

import java.util.LinkedHashMap;
import java.util.Map;
import java.util.Objects;

/** Size-bounded LRU built on LinkedHashMap's access order. */
public class LruCache<K, V> extends LinkedHashMap<K, V> {
  private static final long serialVersionUID = 1L;

  private final int maxEntries;
  private long hits;
  private long misses;

  public LruCache(int maxEntries) {
    super(16, 0.75f, /* accessOrder= */ true);
    if (maxEntries < 1) {
      throw new IllegalArgumentException("maxEntries < 1");
    }
    this.maxEntries = maxEntries;
  }

  @Override
  protected boolean removeEldestEntry(Map.Entry<K, V> eldest) {
    return size() > maxEntries;
  }

  public V lookup(K key) {
    V value = get(Objects.requireNonNull(key));
    if (value == null) {
      misses++;
    } else {
      hits++;
    }
    return value;
  }

  public double hitRate() {
    long total = hits + misses;
    return total == 0 ? 0.0 : (double) hits / total;
  }
}
