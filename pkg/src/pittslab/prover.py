"""Decision procedure for quantifier-free intuitionistic derivability.

Proof search runs in a contraction-free calculus (G4ip): the left rules for
implication are split on the head connective of the antecedent, so search
terminates without loop checking.  Successful searches are replayed into
plain sequent-calculus trees (with cuts) that the kernel checks.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .kernel import (
    ProofTree,
    Sequent,
    _minus,
    t_andL1,
    t_andL2,
    t_andR,
    t_ax,
    t_botL,
    t_cl,
    t_cl_to,
    t_cut,
    t_impL,
    t_impR,
    t_orL_on,
    t_orR1,
    t_orR2,
    t_wl,
)
from .syntax import (
    And,
    Bottom,
    Formula,
    Implies,
    Or,
    UnsupportedFormula,
    Var,
    Variable,
)


def _require_plain(f: Formula):
    if f.has_quantifier:
        raise UnsupportedFormula(f"quantifier in {f}")
    if f.has_app:
        raise UnsupportedFormula(f"uninterpreted connective in {f}")


def _check_sequent(s: Sequent):
    for f in s.hyps + (s.concl,):
        _require_plain(f)


@lru_cache(maxsize=None)
def _decide(hyps: frozenset, goal: Formula) -> bool:
    # Success leaves: falsum on the left, or the goal among the hypotheses.
    if goal in hyps:
        return True
    for h in hyps:
        if isinstance(h, Bottom):
            return True

    # Invertible left reductions, first reducible hypothesis in key order.
    for h in sorted(hyps, key=lambda f: f.key):
        if isinstance(h, And):
            return _decide(hyps - {h} | {h.left, h.right}, goal)
        if isinstance(h, Or):
            return _decide(hyps - {h} | {h.left}, goal) and _decide(
                hyps - {h} | {h.right}, goal
            )
        if isinstance(h, Implies):
            a = h.left
            if isinstance(a, Bottom):
                return _decide(hyps - {h}, goal)
            if isinstance(a, Var):
                if a in hyps:
                    return _decide(hyps - {h} | {h.right}, goal)
                continue
            if isinstance(a, And):
                curried = Implies(a.left, Implies(a.right, h.right))
                return _decide(hyps - {h} | {curried}, goal)
            if isinstance(a, Or):
                split = {Implies(a.left, h.right), Implies(a.right, h.right)}
                return _decide(hyps - {h} | split, goal)
            # implication antecedent: non-invertible, handled below

    # Invertible right rules.
    if isinstance(goal, And):
        return _decide(hyps, goal.left) and _decide(hyps, goal.right)
    if isinstance(goal, Implies):
        return _decide(hyps | {goal.left}, goal.right)

    # Choice points: disjunction introduction and implication-implication left.
    if isinstance(goal, Or):
        if _decide(hyps, goal.left) or _decide(hyps, goal.right):
            return True
    for h in sorted(hyps, key=lambda f: f.key):
        if isinstance(h, Implies) and isinstance(h.left, Implies):
            a, b, c = h.left.left, h.left.right, h.right
            if _decide(hyps - {h} | {Implies(b, c)}, h.left) and _decide(
                hyps - {h} | {c}, goal
            ):
                return True
    return False


def decide(s: Sequent) -> bool:
    """Total decision procedure for quantifier-free, App-free sequents."""
    _check_sequent(s)
    return _decide(frozenset(s.hyps), s.concl)


def clear_cache():
    _decide.cache_clear()


# ---------------------------------------------------------------------------
# Witness construction.  Mirrors the search above on exact multisets, using
# `_decide` as the oracle at choice points, and emits Def-1.3-style trees.

def _plus(hyps: tuple, *fs: Formula) -> tuple:
    return hyps + tuple(fs)


def _lemma_curry(h: Implies) -> ProofTree:
    """(A /\\ B) -> C |- A -> (B -> C)"""
    a, b = h.left.left, h.left.right
    c = h.right
    ta = t_andR(t_ax(a, extra=(b,)), t_ax(b, extra=(a,)))
    t = t_impL(ta, t_ax(c), c)  # A, B, (A/\B)->C |- C
    return t_impR(t_impR(t, b), a)


def _lemma_or_part(h: Implies, which: str) -> ProofTree:
    """(A \\/ B) -> C |- A -> C   (or B -> C)"""
    a, b = h.left.left, h.left.right
    c = h.right
    if which == "left":
        inj = t_orR1(t_ax(a), b)
        part = a
    else:
        inj = t_orR2(t_ax(b), a)
        part = b
    t = t_impL(inj, t_ax(c), c)  # part, (A\/B)->C |- C
    return t_impR(t, part)


def _lemma_nested(h: Implies) -> ProofTree:
    """(A -> B) -> C |- B -> C"""
    a, b = h.left.left, h.left.right
    c = h.right
    tb = t_impR(t_ax(b, extra=(a,)), a)  # B |- A -> B
    t = t_impL(tb, t_ax(c), c)  # B, (A->B)->C |- C
    return t_impR(t, b)


def _derive(hyps: tuple, goal: Formula) -> ProofTree:
    for h in hyps:
        if isinstance(h, Bottom):
            return t_botL(goal, extra=_minus(hyps, h))
        if h == goal:
            return t_ax(goal, extra=_minus(hyps, h))

    for h in sorted(set(hyps), key=lambda f: f.key):
        rest = _minus(hyps, h)
        if isinstance(h, And):
            t = _derive(_plus(rest, h.left, h.right), goal)
            t = t_andL2(t, h.right, h.left)
            t = t_andL1(t, h.left, h.right)
            return t_cl(t, h)
        if isinstance(h, Or):
            t1 = _derive(_plus(rest, h.left), goal)
            t2 = _derive(_plus(rest, h.right), goal)
            return t_orL_on(t1, h.left, t2, h.right)
        if isinstance(h, Implies):
            a = h.left
            if isinstance(a, Bottom):
                return t_wl(_derive(rest, goal), h)
            if isinstance(a, Var):
                if a in hyps:
                    t = _derive(_plus(rest, h.right), goal)
                    t = t_impL(t_ax(a), t, h.right)
                    return t_cl(t, a)
                continue
            if isinstance(a, And):
                curried = Implies(a.left, Implies(a.right, h.right))
                t = _derive(_plus(rest, curried), goal)
                return t_cut(_lemma_curry(h), t)
            if isinstance(a, Or):
                fl = Implies(a.left, h.right)
                fr = Implies(a.right, h.right)
                t = _derive(_plus(rest, fl, fr), goal)
                t = t_cut(_lemma_or_part(h, "left"), t)
                t = t_cut(_lemma_or_part(h, "right"), t)
                return t_cl(t, h)

    if isinstance(goal, And):
        return t_andR(_derive(hyps, goal.left), _derive(hyps, goal.right))
    if isinstance(goal, Implies):
        return t_impR(_derive(_plus(hyps, goal.left), goal.right), goal.left)

    base = frozenset(hyps)
    if isinstance(goal, Or):
        if _decide(base, goal.left):
            return t_orR1(_derive(hyps, goal.left), goal.right)
        if _decide(base, goal.right):
            return t_orR2(_derive(hyps, goal.right), goal.left)
    for h in sorted(set(hyps), key=lambda f: f.key):
        if isinstance(h, Implies) and isinstance(h.left, Implies):
            a, b, c = h.left.left, h.left.right, h.right
            rest = _minus(hyps, h)
            s = frozenset(rest)
            if _decide(s | {Implies(b, c)}, h.left) and _decide(s | {c}, goal):
                p1 = _derive(_plus(rest, Implies(b, c)), h.left)
                p2 = _derive(_plus(rest, c), goal)
                q = t_cut(_lemma_nested(h), p1)  # hyps: rest + h |- A -> B
                r = t_impL(q, p2, c)
                return t_cl_to(r, hyps)
    raise AssertionError(f"derive called on unprovable sequent {Sequent(hyps, goal)}")


@dataclass
class Unknown:
    """Refuted sequent with no countermodel found within the given bound."""

    bound: int


@dataclass
class Verdict:
    provable: bool
    witness: object  # ProofTree | (KripkeModel, world) | Unknown


def derive(s: Sequent) -> ProofTree:
    """Kernel-checkable tree for a provable sequent."""
    _check_sequent(s)
    if not _decide(frozenset(s.hyps), s.concl):
        raise ValueError(f"not provable: {s}")
    return _derive(tuple(s.hyps), s.concl)


def prove(s: Sequent, countermodel_bound: int = 6) -> Verdict:
    """Decide a sequent; attach a proof tree or a countermodel witness."""
    _check_sequent(s)
    if _decide(frozenset(s.hyps), s.concl):
        return Verdict(True, _derive(tuple(s.hyps), s.concl))
    from .kripke import find_countermodel

    found = find_countermodel(s, countermodel_bound)
    return Verdict(False, found if found is not None else Unknown(countermodel_bound))


def provable(hyps, concl) -> bool:
    return decide(Sequent(tuple(hyps), concl))


def equivalent(a: Formula, b: Formula) -> bool:
    """Mutual derivability."""
    _require_plain(a)
    _require_plain(b)
    return _decide(frozenset([a]), b) and _decide(frozenset([b]), a)


def classical_tautology(f: Formula) -> bool:
    """Truth-table evaluation over all valuations of the free atoms."""
    _require_plain(f)
    names = sorted(f.free_vars)

    def ev(g: Formula, val: dict[Variable, bool]) -> bool:
        if isinstance(g, Var):
            return val[g.var]
        if isinstance(g, Bottom):
            return False
        if isinstance(g, And):
            return ev(g.left, val) and ev(g.right, val)
        if isinstance(g, Or):
            return ev(g.left, val) or ev(g.right, val)
        if isinstance(g, Implies):
            return (not ev(g.left, val)) or ev(g.right, val)
        raise AssertionError

    for bits in range(1 << len(names)):
        val = {v: bool(bits >> i & 1) for i, v in enumerate(names)}
        if not ev(f, val):
            return False
    return True
