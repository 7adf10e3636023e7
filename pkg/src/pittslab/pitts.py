"""Uniform interpolants for propositional quantifiers.

For a variable p, `pite_exists` returns the strongest p-free consequence
and `pita_forall` the weakest p-free antecedent of a quantifier-free
formula.  Both are computed by a pair of mutually recursive functions over
sequents of the terminating contraction-free calculus: invertible rules are
applied eagerly, and each irreducible sequent contributes one clause per
usable hypothesis or goal shape.  Contexts where the eliminated variable is
unreachable contribute nothing, which is exactly what makes the result
variable-free.

The recursion is exponential in the implication nesting of the input;
results are memoized per eliminated variable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .kernel import Sequent
from .syntax import (
    And,
    BOT,
    Bottom,
    Formula,
    Implies,
    Or,
    TOP,
    UnsupportedFormula,
    Var,
    Variable,
    is_top,
    substitute,
)
from . import prover


def _require_plain(f: Formula):
    if f.has_quantifier:
        raise UnsupportedFormula(f"quantifier in {f}")
    if f.has_app:
        raise UnsupportedFormula(f"uninterpreted connective in {f}")


# Constructors that fold unit laws on the fly; raw outputs stay equivalent
# but exponentially smaller.

def _and(a: Formula, b: Formula) -> Formula:
    if isinstance(a, Bottom) or isinstance(b, Bottom):
        return BOT
    if is_top(a):
        return b
    if is_top(b) or a == b:
        return a
    return And(a, b)


def _or(a: Formula, b: Formula) -> Formula:
    if is_top(a) or is_top(b):
        return TOP
    if isinstance(a, Bottom):
        return b
    if isinstance(b, Bottom) or a == b:
        return a
    return Or(a, b)


def _imp(a: Formula, b: Formula) -> Formula:
    if isinstance(a, Bottom) or is_top(b) or a == b:
        return TOP
    if is_top(a):
        return b
    return Implies(a, b)


def _conj(parts) -> Formula:
    out = TOP
    for part in parts:
        out = _and(out, part)
    return out


def _disj(parts) -> Formula:
    out: Formula = BOT
    for part in parts:
        out = _or(out, part)
    return out


def _sorted(ctx) -> list[Formula]:
    return sorted(ctx, key=lambda f: f.key)


@lru_cache(maxsize=None)
def _E(p: Variable, ctx: frozenset) -> Formula:
    # invertible left reductions
    for h in _sorted(ctx):
        if isinstance(h, Bottom):
            return BOT
        if isinstance(h, And):
            return _E(p, ctx - {h} | {h.left, h.right})
        if isinstance(h, Or):
            return _or(_E(p, ctx - {h} | {h.left}), _E(p, ctx - {h} | {h.right}))
        if isinstance(h, Implies):
            a = h.left
            if isinstance(a, Bottom):
                return _E(p, ctx - {h})
            if isinstance(a, Var) and a in ctx:
                return _E(p, ctx - {h} | {h.right})
            if isinstance(a, And):
                return _E(p, ctx - {h} | {Implies(a.left, Implies(a.right, h.right))})
            if isinstance(a, Or):
                return _E(
                    p,
                    ctx - {h} | {Implies(a.left, h.right), Implies(a.right, h.right)},
                )
    # irreducible: conjoin one clause per usable hypothesis
    parts = []
    for h in _sorted(ctx):
        if isinstance(h, Var):
            if h.var != p:
                parts.append(h)
        elif isinstance(h, Implies):
            a = h.left
            if isinstance(a, Var):
                if a.var != p:
                    parts.append(_imp(a, _E(p, ctx - {h} | {a, h.right})))
            else:  # (c -> d) -> e
                c, d, e = a.left, a.right, h.right
                alpha = _A(p, ctx - {h} | {Implies(d, e)}, a)
                parts.append(_imp(alpha, _E(p, ctx - {h} | {e})))
    return _conj(parts)


@lru_cache(maxsize=None)
def _A(p: Variable, ctx: frozenset, goal: Formula) -> Formula:
    # invertible left reductions
    for h in _sorted(ctx):
        if isinstance(h, Bottom):
            return TOP
        if isinstance(h, And):
            return _A(p, ctx - {h} | {h.left, h.right}, goal)
        if isinstance(h, Or):
            return _and(
                _A(p, ctx - {h} | {h.left}, goal), _A(p, ctx - {h} | {h.right}, goal)
            )
        if isinstance(h, Implies):
            a = h.left
            if isinstance(a, Bottom):
                return _A(p, ctx - {h}, goal)
            if isinstance(a, Var) and a in ctx:
                return _A(p, ctx - {h} | {h.right}, goal)
            if isinstance(a, And):
                return _A(p, ctx - {h} | {Implies(a.left, Implies(a.right, h.right))}, goal)
            if isinstance(a, Or):
                return _A(
                    p,
                    ctx - {h} | {Implies(a.left, h.right), Implies(a.right, h.right)},
                    goal,
                )
    # invertible right rules
    if isinstance(goal, And):
        return _and(_A(p, ctx, goal.left), _A(p, ctx, goal.right))
    if isinstance(goal, Implies):
        return _A(p, ctx | {goal.left}, goal.right)
    # irreducible: the context summary guards a disjunction of enablers
    if isinstance(goal, Var) and goal in ctx:
        return TOP
    parts = []
    if isinstance(goal, Var) and goal.var != p:
        parts.append(goal)
    if isinstance(goal, Or):
        parts.append(_A(p, ctx, goal.left))
        parts.append(_A(p, ctx, goal.right))
    for h in _sorted(ctx):
        if isinstance(h, Implies):
            a = h.left
            if isinstance(a, Var):
                if a.var != p:
                    parts.append(_and(a, _A(p, ctx - {h} | {a, h.right}, goal)))
            else:  # (c -> d) -> e
                c, d, e = a.left, a.right, h.right
                first = _A(p, ctx - {h} | {Implies(d, e)}, a)
                parts.append(_and(first, _A(p, ctx - {h} | {e}, goal)))
    return _imp(_E(p, ctx), _disj(parts))


def pite_exists(phi: Formula, y: Variable) -> Formula:
    """Strongest y-free consequence: phi |- psi iff result |- psi for y-free psi."""
    _require_plain(phi)
    return _E(y, frozenset([phi]))


def pita_forall(phi: Formula, y: Variable) -> Formula:
    """Weakest y-free antecedent: psi |- phi iff psi |- result for y-free psi."""
    _require_plain(phi)
    return _A(y, frozenset(), phi)


def clear_cache():
    _E.cache_clear()
    _A.cache_clear()


# ---------------------------------------------------------------------------
# Normalization: a fixed, size-nonincreasing rewrite set applied to a
# fixpoint.  Equivalence is prover-certified in the test suite.

def _rw(f: Formula) -> Formula:
    if isinstance(f, And):
        a, b = _rw(f.left), _rw(f.right)
        if is_top(a):
            return b
        if is_top(b):
            return a
        if isinstance(a, Bottom) or isinstance(b, Bottom):
            return BOT
        if a == b:
            return a
        if isinstance(b, Or) and (b.left == a or b.right == a):
            return a
        if isinstance(a, Or) and (a.left == b or a.right == b):
            return b
        return And(a, b)
    if isinstance(f, Or):
        a, b = _rw(f.left), _rw(f.right)
        if isinstance(a, Bottom):
            return b
        if isinstance(b, Bottom):
            return a
        if is_top(a) or is_top(b):
            return TOP
        if a == b:
            return a
        if isinstance(b, And) and (b.left == a or b.right == a):
            return a
        if isinstance(a, And) and (a.left == b or a.right == b):
            return b
        return Or(a, b)
    if isinstance(f, Implies):
        a, b = _rw(f.left), _rw(f.right)
        if isinstance(a, Bottom):
            return TOP
        if is_top(b):
            return TOP
        if a == b:
            return TOP
        if is_top(a):
            return b
        if isinstance(b, Implies) and b.left == a:
            return Implies(a, b.right)
        # triple negation collapses to single negation
        if (
            isinstance(b, Bottom)
            and isinstance(a, Implies)
            and isinstance(a.right, Bottom)
            and isinstance(a.left, Implies)
            and isinstance(a.left.right, Bottom)
            and not isinstance(a.left.left, Bottom)
        ):
            return Implies(a.left.left, BOT)
        return Implies(a, b)
    return f


def simplify(f: Formula) -> Formula:
    """Prover-equivalent normalization; never grows the formula."""
    _require_plain(f)
    cur = f
    while True:
        nxt = _rw(cur)
        if nxt == cur:
            return cur
        cur = nxt


# ---------------------------------------------------------------------------
# The validation gate: interpolants are accepted by their defining property
# against a finite probe corpus, not trusted from the construction.

@dataclass
class ValidationReport:
    ok: bool
    variable_free: bool
    consequence_holds: bool
    failures: list = field(default_factory=list)  # (probe, direction) pairs
    probes_run: int = 0


def validate_interpolant(
    phi: Formula, y: Variable, candidate: Formula, probes
) -> ValidationReport:
    """Check the defining biconditional of the existential interpolant.

    For each y-free probe psi: (candidate |- psi) iff (phi |- psi); plus
    phi |- candidate and the variable condition.
    """
    _require_plain(phi)
    _require_plain(candidate)
    variable_free = y not in candidate.free_vars
    consequence = prover.decide(Sequent((phi,), candidate))
    failures = []
    count = 0
    for psi in probes:
        if y in psi.free_vars:
            continue
        count += 1
        left = prover.decide(Sequent((candidate,), psi))
        right = prover.decide(Sequent((phi,), psi))
        if left != right:
            failures.append((psi, "candidate" if left else "input"))
    ok = variable_free and consequence and not failures
    return ValidationReport(ok, variable_free, consequence, failures, count)


def validate_forall_interpolant(
    phi: Formula, y: Variable, candidate: Formula, probes
) -> ValidationReport:
    """Dual gate: for each y-free probe psi, (psi |- candidate) iff (psi |- phi),
    plus candidate |- phi and the variable condition."""
    _require_plain(phi)
    _require_plain(candidate)
    variable_free = y not in candidate.free_vars
    antecedent = prover.decide(Sequent((candidate,), phi))
    failures = []
    count = 0
    for psi in probes:
        if y in psi.free_vars:
            continue
        count += 1
        left = prover.decide(Sequent((psi,), candidate))
        right = prover.decide(Sequent((psi,), phi))
        if left != right:
            failures.append((psi, "candidate" if left else "input"))
    ok = variable_free and antecedent and not failures
    return ValidationReport(ok, variable_free, antecedent, failures, count)


def _comm_key(f: Formula) -> str:
    if isinstance(f, (And, Or)):
        ka, kb = _comm_key(f.left), _comm_key(f.right)
        if kb < ka:
            ka, kb = kb, ka
        tag = "&" if isinstance(f, And) else "|"
        return f"{tag}({ka},{kb})"
    if isinstance(f, Implies):
        return f">({_comm_key(f.left)},{_comm_key(f.right)})"
    return f.key


def probe_corpus(variables, max_nodes: int = 8) -> list[Formula]:
    """All formulas over the given atoms up to `max_nodes` AST nodes,
    deduplicated up to commutativity of /\\ and \\/ (deterministic order).
    """
    leaves: list[Formula] = [BOT] + [Var(v) for v in sorted(variables)]
    by_size: dict[int, list[Formula]] = {1: leaves}
    out: list[Formula] = []
    seen: set[str] = set()
    for f in leaves:
        seen.add(_comm_key(f))
        out.append(f)
    for size in range(3, max_nodes + 1, 2):
        bucket: list[Formula] = []
        for lsize in range(1, size - 1, 2):
            rsize = size - 1 - lsize
            for a in by_size.get(lsize, []):
                for b in by_size.get(rsize, []):
                    for ctor in (And, Or, Implies):
                        g = ctor(a, b)
                        k = _comm_key(g)
                        if k not in seen:
                            seen.add(k)
                            bucket.append(g)
                            out.append(g)
        by_size[size] = bucket
    return out


@dataclass
class InterpolationResult:
    input: Formula
    bound_var: Variable
    existential: Formula
    universal: Formula
    certificate_checks: list = field(default_factory=list)  # (probe, bool)


def interpolate(phi: Formula, y: Variable, probe_substitutions=None) -> InterpolationResult:
    """Both interpolants plus certificate checks on probe substitutions.

    Each probe T exercises the two halves: phi[T/y] follows from the
    universal interpolant, and the existential one follows from phi[T/y].
    """
    ex = pite_exists(phi, y)
    un = pita_forall(phi, y)
    checks = []
    for t in probe_substitutions or []:
        inst = substitute(phi, {y: t})
        ok = prover.decide(Sequent((un,), inst)) and prover.decide(
            Sequent((inst,), ex)
        )
        checks.append((t, ok))
    return InterpolationResult(phi, y, ex, un, checks)
