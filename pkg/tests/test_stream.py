from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from hygen.stream import Cons, Nil, Stream, from_list, front, iterate, lazy, to_list


def counted(log: list[int], tag: int, result):
    def producer():
        log.append(tag)
        return result
    return producer


def test_front_runs_producer_once():
    log: list[int] = []
    s = lazy(counted(log, 0, Nil()))
    assert log == []
    assert front(s) == Nil()
    assert front(s) is front(s)
    assert log == [0]


def test_failure_is_memoized():
    calls = []

    def boom():
        calls.append(1)
        raise ValueError("no")

    s = lazy(boom)
    for _ in range(3):
        with pytest.raises(ValueError, match="no"):
            front(s)
    assert calls == [1]


def test_reentrant_forcing_is_reported():
    box: list[Stream[int]] = []
    s: Stream[int] = lazy(lambda: front(box[0]))
    box.append(s)
    with pytest.raises(RuntimeError, match="own producer"):
        front(s)


@given(st.lists(st.integers()))
def test_from_list_round_trip(xs):
    assert to_list(from_list(xs)) == xs
    assert list(iterate(from_list(xs))) == xs


@given(st.lists(st.integers(), max_size=20), st.lists(st.integers(0, 25), max_size=60))
def test_at_most_once_under_any_interleaving(xs, probes):
    """Each cell's producer runs at most once, however often cells are forced."""
    runs: dict[int, int] = {}

    def cell(i: int) -> Stream[int]:
        def producer():
            runs[i] = runs.get(i, 0) + 1
            return Nil() if i == len(xs) else Cons(xs[i], cell(i + 1))
        return lazy(producer)

    head = cell(0)
    reached = set()
    for p in probes:
        s, k = head, 0
        while k < p:
            fr = front(s)
            reached.add(k)
            if isinstance(fr, Nil):
                break
            s, k = fr.tail, k + 1
    assert all(n == 1 for n in runs.values())
    assert set(runs) == reached


def test_repr_reflects_state():
    s = from_list([1])
    assert "unforced" in repr(s)
    front(s)
    assert "Cons" in repr(s)
