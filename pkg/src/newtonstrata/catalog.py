"""Fixed list of (group, mu) pairs used by `check` without --mu and by the test suites."""

from __future__ import annotations

from .rootdata import RootDatum, preset


def _gl_mus(n: int) -> list[tuple[int, ...]]:
    pad = lambda head: tuple(head) + (0,) * (n - len(head))  # noqa: E731
    out = [pad([1])]
    if n >= 2:
        out += [pad([1, 1]), pad([2, 1]), pad([2])]
    if n >= 4:
        out.append(pad([1] * (n // 2)))
        out.append(pad([3, 1, 1]))
    return sorted(set(out), reverse=True)


CATALOG: dict[str, list[tuple[int, ...]]] = {
    **{f"gl:{n}": _gl_mus(n) for n in range(2, 7)},
    "sl:2": [(1,), (2,), (3,)],
    "sl:3": [(1, 1), (2, 1), (2, 2)],
    "sl:4": [(1, 1, 1), (1, 2, 1), (2, 2, 2)],
    "sl:5": [(1, 1, 1, 1), (1, 2, 2, 1)],
    "pgl:2": [(1,), (2,), (3,)],
    "pgl:3": [(1, 0), (1, 1), (2, 0)],
    "pgl:4": [(1, 0, 0), (1, 1, 0), (2, 0, 0)],
    "gsp:4": [(1, 1, 1), (1, 0, 0), (2, 1, 2), (2, 2, 2)],
    "gsp:6": [(1, 1, 1, 1), (1, 0, 0, 0), (2, 1, 1, 2)],
    "u:3": [(1, 0, -1), (2, 0, -2), (3, 0, -3)],
}


def catalog_datum(token: str) -> RootDatum:
    family, n = token.split(":")
    return preset(family, int(n))


def catalog_entries():
    for token, mus in CATALOG.items():
        d = catalog_datum(token)
        for mu in mus:
            yield token, d, mu
