"""Greedy evaluation: subsumption applied at every step.

Where the reference semantics runs the whole fixpoint first and
aggregates once at the end, the greedy strategy aggregates the output
of every single step, the way tabling engines fold each new answer
into the table as soon as it appears. One greedy step reads the atoms
a table claims true, applies the immediate-consequence step, and
aggregates the result back into a table.

The chain of tables is forced upward by joining each step's output
onto the running table. On programs where greedy is sound this
computes the same answers as the reference; on others (that is the
point of the checker) it settles somewhere else or converges where
the reference diverges.
"""

from __future__ import annotations

from .lattice import (
    aggregate_atoms,
    build_specs,
    empty_table,
    table_atoms,
    table_join,
)
from .program import Program, fact_clause
from .reference import (
    DEFAULT_FUEL,
    EvalOutcome,
    FixpointResult,
    StratumResult,
    immediate_step,
)
from .stratify import stratify, stratum_clauses
from .terms import atom_sorted


def greedy_step(clauses, specs, table):
    """Aggregate the immediate consequences of the table's atoms."""
    return aggregate_atoms(specs, immediate_step(clauses, table_atoms(specs, table)))


def greedy_fixpoint(clauses, specs, fuel, trace=None) -> FixpointResult:
    """Inflationary iteration: t := t joined with step(t) until stable.

    The raw step alone need not be monotone (again: the point), so the
    loop forces an upward chain by construction. `trace` collects every
    table along the run for the checker's trace strategy.
    """
    table = empty_table()
    if trace is not None:
        trace.append(table)
    steps = 0
    while steps < fuel:
        nxt = table_join(specs, (table, greedy_step(clauses, specs, table)))
        steps += 1
        if nxt == table:
            return FixpointResult(True, table, steps)
        table = nxt
        if trace is not None:
            trace.append(table)
        if len(table.entries) > fuel:
            return FixpointResult(False, table, steps)
    return FixpointResult(False, table, steps)


def stratified_greedy_semantics(program: Program, fuel=DEFAULT_FUEL,
                                trace_sink=None) -> EvalOutcome:
    """Greedy evaluation stratum by stratum, like the reference engine.

    When `trace_sink` is a list, it receives one (clauses, tables)
    pair per stratum: the clauses the stratum ran with (lower-strata
    answers injected as facts) and the chain of tables visited.
    """
    specs = build_specs(program)
    lower = frozenset()
    results = []
    total = 0
    for preds in stratify(program).strata:
        clauses = stratum_clauses(program, preds) + tuple(
            fact_clause(a) for a in atom_sorted(lower))
        trace = [] if trace_sink is not None else None
        fp = greedy_fixpoint(clauses, specs, fuel, trace)
        if trace_sink is not None:
            trace_sink.append((clauses, tuple(trace)))
        total += fp.steps
        names = tuple(sorted(preds))
        atoms = table_atoms(specs, fp.value)
        if not fp.converged:
            results.append(StratumResult(names, atoms, fp.steps, False))
            return EvalOutcome(False, atoms, fp.value, total, tuple(results), names)
        lower = atoms
        results.append(StratumResult(names, lower, fp.steps, True))
    return EvalOutcome(True, lower, aggregate_atoms(specs, lower),
                       total, tuple(results), None)
