package dev.corpus.util;

import java.util.NoSuchElementException;
import java.util.Objects;
import java.util.function.Function;

/** Minimal ok/err sum type with map/flatMap composition. */
public abstract class Result<T, E> {
  private Result() {}

  public static <T, E> Result<T, E> ok(T value) {
    return new Ok<>(value);
  }

  public static <T, E> Result<T, E> err(E error) {
    return new Err<>(error);
  }

  public abstract boolean isOk();

  public abstract T unwrap();

  public abstract E unwrapErr();

  public <U> Result<U, E> map(Function<? super T, ? extends U> fn) {
    if (isOk()) {
      return ok(fn.apply(unwrap()));
    }
    return err(unwrapErr());
  }

  public <U> Result<U, E> flatMap(Function<? super T, Result<U, E>> fn) {
    if (isOk()) {
      return Objects.requireNonNull(fn.apply(unwrap()));
    }
    return err(unwrapErr());
  }

  private static final class Ok<T, E> extends Result<T, E> {
    private final T value;

    Ok(T value) {
      this.value = value;
    }

    @Override
    public boolean isOk() {
      return true;
    }

    @Override
    public T unwrap() {
      return value;
    }

    @Override
    public E unwrapErr() {
      throw new NoSuchElementException("ok has no error");
    }
  }

  private static final class Err<T, E> extends Result<T, E> {
    private final E error;

    Err(E error) {
      this.error = error;
    }

    @Override
    public boolean isOk() {
      return false;
    }

    @Override
    public T unwrap() {
      throw new NoSuchElementException("err has no value");
    }

    @Override
    public E unwrapErr() {
      return error;
    }
  }
}
