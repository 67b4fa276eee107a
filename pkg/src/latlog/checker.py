"""Soundness checking: is the greedy strategy safe for a program?

Greedy evaluation agrees with the reference semantics whenever
aggregating the immediate consequences of a set of atoms gives the
same table as first aggregating the set, reading the surviving atoms
back, and aggregating their immediate consequences:

    aggregate . step  =  aggregate . step . extract . aggregate

The condition quantifies over every subset of the Herbrand base, which
is usually infinite, so the checker restricts itself to a finite
universe of reachable atoms and reports honestly: a clean pass is
"no violation found", never a proof. Three strategies pick the tested
subsets: exhaustive (every subset of a small converged universe),
sampled (seeded random subsets), and trace (the sets an actual greedy
run touches).

The fusion variant tests the same equation with the join-extended step
on the left. By construction the two steps agree under aggregation;
the checker recomputes both sides anyway and treats any gap between
them as a bug in this package, not a property of the program.

`diff_semantics` is the blunt instrument next to these: run both
engines and compare answers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import InternalInconsistencyError
from .greedy import stratified_greedy_semantics
from .lattice import aggregate_atoms, build_specs, table_atoms
from .program import Program, fact_clause
from .reference import (
    DEFAULT_FUEL,
    EvalOutcome,
    aggregate_model,
    close_answer_groups,
    immediate_step,
    stratified_reference_semantics,
    stratum_lfp,
)
from .stratify import stratify, stratum_clauses
from .terms import atom_sorted, atom_to_str, term_key

NO_VIOLATION = "no-violation-found"
VIOLATION = "violation"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CheckStrategy:
    kind: str  # "exhaustive" | "sampled" | "trace"
    max_atoms: int = 16
    samples: int = 1000
    seed: int = 42
    max_subset: int = 9


@dataclass(frozen=True)
class UniverseResult:
    complete: bool      # converged within fuel and within the cap
    atoms: frozenset    # the universe, or the atoms seen before giving up


@dataclass(frozen=True)
class CheckReport:
    verdict: str
    condition: str          # "step-commutation" or "step-fusion"
    universe: UniverseResult
    strategy: CheckStrategy
    tested: int
    witness: frozenset = None
    lhs: object = None      # AnswerTable on a violation
    rhs: object = None
    reason: str = None      # set when inconclusive


@dataclass(frozen=True)
class DiffReport:
    reference: EvalOutcome
    greedy: EvalOutcome
    equal: bool
    per_key_diffs: tuple    # (pred, inputs, reference value, greedy value)


def atom_universe(program: Program, fuel=DEFAULT_FUEL, cap=16) -> UniverseResult:
    """All atoms the join-extended fixpoint reaches, stratum by stratum.

    Complete only when every stratum converged within fuel and the
    union stayed within `cap`; otherwise the partial set still serves
    as a sampling pool.
    """
    specs = build_specs(program)
    seen = set()
    lower = frozenset()
    for preds in stratify(program).strata:
        clauses = stratum_clauses(program, preds) + tuple(
            fact_clause(a) for a in atom_sorted(lower))
        fp = stratum_lfp(clauses, specs, fuel)
        seen |= fp.value
        if not fp.converged:
            return UniverseResult(False, frozenset(seen))
        lower = aggregate_model(specs, fp.value)
    return UniverseResult(len(seen) <= cap, frozenset(seen))


def _compare_on(clauses, specs, atoms, fuel, extended):
    """Both sides of the condition on one subset, plus the cross-check.

    Returns (lhs, rhs) answer tables. `extended` selects which left
    side lands in the report; the plain and join-extended steps must
    agree under aggregation regardless, or this package has a bug.
    """
    stepped = immediate_step(clauses, atoms)
    lhs_plain = aggregate_atoms(specs, stepped)
    lhs_ext = aggregate_atoms(specs, close_answer_groups(specs, stepped, fuel))
    if lhs_plain != lhs_ext:
        raise InternalInconsistencyError(
            "plain and join-extended steps disagree under aggregation "
            f"on {{{', '.join(atom_to_str(a) for a in atom_sorted(atoms))}}}")
    collapsed = table_atoms(specs, aggregate_atoms(specs, atoms))
    rhs = aggregate_atoms(specs, immediate_step(clauses, collapsed))
    return (lhs_ext if extended else lhs_plain), rhs


def _trace_subsets(program, specs, fuel):
    """The subsets a greedy run actually visits, in visiting order:
    each table's extracted atoms, then their immediate consequences
    under that stratum's clauses (the set the engine aggregates next)."""
    sink = []
    stratified_greedy_semantics(program, fuel, trace_sink=sink)
    seen = set()
    out = []
    for clauses, tables in sink:
        for t in tables:
            atoms = table_atoms(specs, t)
            for x in (atoms, immediate_step(clauses, atoms)):
                if x not in seen:
                    seen.add(x)
                    out.append(x)
    return out


def _run_check(program, strategy, fuel, extended, condition) -> CheckReport:
    specs = build_specs(program)
    clauses = program.clauses
    cap = strategy.max_atoms if strategy.kind == "exhaustive" else fuel
    universe = atom_universe(program, fuel, cap)

    if strategy.kind == "exhaustive":
        if not universe.complete:
            reason = (f"universe did not converge to at most {strategy.max_atoms} "
                      f"atoms within fuel {fuel}; use sampled or trace")
            return CheckReport(INCONCLUSIVE, condition, universe, strategy, 0,
                               reason=reason)
        pool = atom_sorted(universe.atoms)
        subsets = (
            frozenset(a for i, a in enumerate(pool) if mask >> i & 1)
            for mask in range(1 << len(pool)))
    elif strategy.kind == "sampled":
        pool = atom_sorted(universe.atoms)
        rng = random.Random(strategy.seed)
        bound = min(strategy.max_subset, len(pool))
        subsets = (
            frozenset(rng.sample(pool, rng.randint(0, bound)))
            for _ in range(strategy.samples))
    elif strategy.kind == "trace":
        subsets = _trace_subsets(program, specs, fuel)
    else:
        raise ValueError(f"unknown strategy {strategy.kind!r}")

    tested = 0
    for x in subsets:
        lhs, rhs = _compare_on(clauses, specs, x, fuel, extended)
        tested += 1
        if lhs != rhs:
            return CheckReport(VIOLATION, condition, universe, strategy, tested,
                               witness=x, lhs=lhs, rhs=rhs)
    return CheckReport(NO_VIOLATION, condition, universe, strategy, tested)


def check_greedy_soundness(program: Program, strategy: CheckStrategy,
                           fuel=DEFAULT_FUEL) -> CheckReport:
    """Test the soundness condition with the plain step on the left."""
    return _run_check(program, strategy, fuel, False, "step-commutation")


def check_fusion_condition(program: Program, strategy: CheckStrategy,
                           fuel=DEFAULT_FUEL) -> CheckReport:
    """Test the same condition with the join-extended step on the left."""
    return _run_check(program, strategy, fuel, True, "step-fusion")


def recompute_sides(program: Program, witness, fuel=DEFAULT_FUEL, extended=False):
    """Re-derive both sides on a witness, for verifying reports."""
    specs = build_specs(program)
    return _compare_on(program.clauses, specs, frozenset(witness), fuel, extended)


def diff_semantics(program: Program, fuel=DEFAULT_FUEL) -> DiffReport:
    """Run both engines and compare their final tables key by key."""
    reference = stratified_reference_semantics(program, fuel)
    greedy = stratified_greedy_semantics(program, fuel)
    diffs = []
    keys = set(reference.table.entries) | set(greedy.table.entries)
    for key in sorted(keys, key=lambda k: (k[0], tuple(term_key(t) for t in k[1]))):
        rv, gv = reference.table.get(key), greedy.table.get(key)
        if rv != gv:
            diffs.append((key[0], key[1], rv, gv))
    equal = reference.converged and greedy.converged and not diffs
    return DiffReport(reference, greedy, equal, tuple(diffs))
