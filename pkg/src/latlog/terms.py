"""Ground first-order terms and atoms, with a total order.

The order is: integers first, then symbols, then compound terms
(by functor, then arity, then arguments left to right), then lists
(by length, then elements). It is deterministic and total on ground
terms, which is all the evaluator ever compares.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple


@dataclass(frozen=True)
class ListTerm:
    elements: tuple


Term = Union[Int, Symbol, Compound, ListTerm]


def term_key(t):
    """Sort key realizing the total order on ground terms."""
    if isinstance(t, Int):
        return (0, t.value)
    if isinstance(t, Symbol):
        return (1, t.name)
    if isinstance(t, Compound):
        return (2, t.functor, len(t.args), tuple(term_key(a) for a in t.args))
    if isinstance(t, ListTerm):
        return (3, len(t.elements), tuple(term_key(e) for e in t.elements))
    raise TypeError(f"not a ground term: {t!r}")


def term_lt(a, b):
    return term_key(a) < term_key(b)


def term_sorted(terms):
    return sorted(terms, key=term_key)


def term_to_str(t):
    if isinstance(t, Int):
        return str(t.value)
    if isinstance(t, Symbol):
        return t.name
    if isinstance(t, Compound):
        inner = ",".join(term_to_str(a) for a in t.args)
        return f"{t.functor}({inner})"
    if isinstance(t, ListTerm):
        inner = ",".join(term_to_str(e) for e in t.elements)
        return f"[{inner}]"
    raise TypeError(f"not a ground term: {t!r}")


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple


def atom_key(a: Atom):
    return (a.pred, len(a.args), tuple(term_key(t) for t in a.args))


def atom_sorted(atoms):
    return sorted(atoms, key=atom_key)


def atom_to_str(a: Atom) -> str:
    if not a.args:
        return a.pred
    return f"{a.pred}({','.join(term_to_str(t) for t in a.args)})"
