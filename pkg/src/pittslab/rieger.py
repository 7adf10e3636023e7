"""The lattice of one-variable formulas, and the standing facts used by the
star-connective replays.

Classes are enumerated bottom-up by closing {bot, X} under the connectives,
one closure round per level: after r rounds every one-variable formula of
connective depth at most r is equivalent to a generated representative.
Inside the enumeration, entailment between one-variable formulas is decided
on truncations of the one-atom universal Kripke model (depth bounded by the
implication count of the formulas involved), which stays fast where plain
proof search blows up; the test suite cross-validates this oracle against
the prover, and everything the module reports (classification, lattice
order) is certified by the prover or by an explicit countermodel.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .kernel import Sequent
from .prover import decide
from .syntax import (
    And,
    BOT,
    Bottom,
    Formula,
    Implies,
    Or,
    UnsupportedFormula,
    Var,
    Variable,
    neg,
    substitute,
)

Y = Variable("Y")
X = Variable("X")


class LevelExceeded(Exception):
    """The formula lies above the generated portion of the lattice."""


class HypothesisFails(Exception):
    """The standing hypothesis  ~Y \\/ ~~Y |- psi  is unprovable."""


@dataclass(frozen=True)
class RNClass:
    level: int  # discovery index in the enumeration
    representative: Formula


# ---------------------------------------------------------------------------
# Truncations of the universal model over one atom.  Worlds are built level
# by level: an antichain of existing worlds plus a persistent valuation,
# skipping worlds that would duplicate their unique successor.

@lru_cache(maxsize=None)
def _universal_model(depth: int):
    """Worlds of the one-atom universal model to the given depth.

    Returns (atom_true: tuple[bool], succs: tuple[tuple[int, ...]]) where
    succs[i] lists all strictly greater worlds (transitively closed).
    """
    atom_true: list[bool] = [True, False]
    above: list[frozenset[int]] = [frozenset(), frozenset()]  # strict ups
    frontier = [0, 1]
    seen: set[tuple[frozenset, bool]] = {
        (frozenset(), True),
        (frozenset(), False),
    }
    for _ in range(depth - 1):
        fresh: list[int] = []
        count = len(atom_true)
        candidates = []
        import itertools

        pool = list(range(count))
        for r in (1, 2, 3):
            for combo in itertools.combinations(pool, r):
                if any(i in above[j] or j in above[i] for i in combo for j in combo if i != j):
                    continue  # not an antichain
                if not any(i in frontier for i in combo):
                    continue  # already considered at an earlier depth
                candidates.append(combo)
        for combo in candidates:
            up = frozenset(combo) | frozenset().union(*(above[i] for i in combo))
            vals = [False] if any(not atom_true[i] for i in combo) else [False, True]
            for val in vals:
                if len(combo) == 1 and atom_true[combo[0]] == val:
                    continue  # duplicates its unique successor
                key = (up, val)
                if key in seen:
                    continue
                seen.add(key)
                atom_true.append(val)
                above.append(up)
                fresh.append(len(atom_true) - 1)
        frontier = fresh
        if not frontier:
            break
    return tuple(atom_true), tuple(tuple(sorted(s)) for s in above)


def _imp_depth(f: Formula) -> int:
    """Implication nesting degree; refuting models need at most this depth."""
    try:
        return f._impd  # type: ignore[attr-defined]
    except AttributeError:
        d = max((_imp_depth(c) for c in f.children()), default=0)
        if isinstance(f, Implies):
            d += 1
        object.__setattr__(f, "_impd", d)
        return d


def _eval_universal(f: Formula, atom: Variable, depth: int) -> tuple[bool, ...]:
    atom_true, succs = _universal_model(depth)
    n = len(atom_true)
    memo: dict[str, list[bool]] = {}

    def ev(g: Formula) -> list[bool]:
        got = memo.get(g.key)
        if got is not None:
            return got
        if isinstance(g, Var):
            if g.var != atom:
                raise UnsupportedFormula(f"unexpected atom {g.var}")
            out = list(atom_true)
        elif isinstance(g, Bottom):
            out = [False] * n
        elif isinstance(g, And):
            a, b = ev(g.left), ev(g.right)
            out = [x and y for x, y in zip(a, b)]
        elif isinstance(g, Or):
            a, b = ev(g.left), ev(g.right)
            out = [x or y for x, y in zip(a, b)]
        elif isinstance(g, Implies):
            a, b = ev(g.left), ev(g.right)
            out = [
                ((not a[w]) or b[w]) and all((not a[v]) or b[v] for v in succs[w])
                for w in range(n)
            ]
        else:
            raise UnsupportedFormula(f"cannot evaluate {g}")
        memo[g.key] = out
        return out

    return tuple(ev(f))


def _entails_1var(f: Formula, g: Formula, atom: Variable) -> bool:
    """Semantic entailment for one-variable formulas on the universal model.

    The truncation depth follows the refuting-model depth bound: an
    unprovable one-variable sequent has a countermodel whose depth is at
    most the implication nesting degree of the formulas involved.
    """
    depth = _imp_depth(f) + _imp_depth(g) + 2
    fa = _eval_universal(f, atom, depth)
    ga = _eval_universal(g, atom, depth)
    return all((not x) or y for x, y in zip(fa, ga))


def _equiv_1var(f: Formula, g: Formula, atom: Variable) -> bool:
    return _entails_1var(f, g, atom) and _entails_1var(g, f, atom)


def refuting_model(f: Formula, g: Formula, atom: Variable = X):
    """A concrete finite model refuting f |- g, or None (independent witness)."""
    from .kripke import KripkeModel

    depth = _imp_depth(f) + _imp_depth(g) + 2
    fa = _eval_universal(f, atom, depth)
    ga = _eval_universal(g, atom, depth)
    try:
        w0 = next(w for w in range(len(fa)) if fa[w] and not ga[w])
    except StopIteration:
        return None
    atom_true, succs = _universal_model(depth)
    keep = sorted({w0} | set(succs[w0]))
    index = {w: i for i, w in enumerate(keep)}
    order = frozenset(
        (index[u], index[v])
        for u in keep
        for v in keep
        if u == v or v in succs[u]
    )
    valuation = tuple(
        (index[w], frozenset({atom.name} if atom_true[w] else set())) for w in keep
    )
    return KripkeModel(tuple(range(len(keep))), order, valuation), index[w0]


# ---------------------------------------------------------------------------
# Lattice enumeration.

class RNLattice:
    """Generated portion of the one-variable lattice, up to a given level.

    Each level is one closure round; a round only combines classes found in
    the previous round with everything older (older pairs cannot produce new
    classes, the connectives being congruences).  Representatives are kept
    minimal in size.
    """

    def __init__(self, level: int = 12, variable: Variable = X):
        self.level = level
        self.variable = variable
        self.reps: list[Formula] = []
        self._tried: set[str] = set()
        self._grow()

    def _find(self, f: Formula) -> int | None:
        for idx, rep in enumerate(self.reps):
            if _equiv_1var(rep, f, self.variable):
                return idx
        return None

    def _try_add(self, f: Formula) -> bool:
        idx = self._find(f)
        if idx is not None:
            if f.size < self.reps[idx].size:
                self.reps[idx] = f
            return False
        self.reps.append(f)
        return True

    def _grow(self):
        for seed in (BOT, Var(self.variable)):
            self._tried.add(seed.key)
            self._try_add(seed)
        frontier = list(range(len(self.reps)))
        for _round in range(self.level):
            fset = set(frontier)
            frontier = []
            count = len(self.reps)
            for i in range(count):
                for j in range(count):
                    if i not in fset and j not in fset:
                        continue
                    a, b = self.reps[i], self.reps[j]
                    for op in (And, Or, Implies):
                        cand = op(a, b)
                        if cand.key in self._tried:
                            continue
                        self._tried.add(cand.key)
                        if self._try_add(cand):
                            frontier.append(len(self.reps) - 1)
            if not frontier:
                break

    def classify(self, f: Formula, certify: bool = True) -> RNClass:
        """The unique generated class of `f`; prover-certified by default."""
        if f.has_quantifier or f.has_app:
            raise UnsupportedFormula("classification needs quantifier-free input")
        fv = f.free_vars
        if not fv <= {self.variable}:
            if len(fv) == 1:
                f = substitute(f, {next(iter(fv)): Var(self.variable)})
            else:
                raise UnsupportedFormula("at most one free variable allowed")
        idx = self._find(f)
        if idx is None:
            raise LevelExceeded(f"{f} lies above the generated lattice portion")
        rep = self.reps[idx]
        if certify and not (decide(Sequent((f,), rep)) and decide(Sequent((rep,), f))):
            raise AssertionError(f"classification of {f} failed prover certification")
        return RNClass(idx, rep)

    def leq(self, a: RNClass, b: RNClass) -> bool:
        """Prover-certified lattice order (entailment of representatives)."""
        return decide(Sequent((a.representative,), b.representative))


_DEFAULT: dict[int, RNLattice] = {}


def default_lattice(level: int = 12) -> RNLattice:
    if level not in _DEFAULT:
        _DEFAULT[level] = RNLattice(level)
    return _DEFAULT[level]


def rn_classify(f: Formula, level: int = 12) -> RNClass:
    return default_lattice(level).classify(f)


# ---------------------------------------------------------------------------
# The four standing facts about formulas above weak excluded middle.

@dataclass
class RiegerFactsReport:
    psi: Formula
    double_negated: bool      # |- ~~psi
    follows_from_truth: bool  # Y |- psi
    self_instance: bool       # |- psi[psi/Y]
    reflection: bool          # psi -> Y |- Y

    @property
    def all_hold(self) -> bool:
        return (
            self.double_negated
            and self.follows_from_truth
            and self.self_instance
            and self.reflection
        )


def check_rieger_lower_facts(psi: Formula, y: Variable = Y) -> RiegerFactsReport:
    """Verify the four consequences of  ~Y \\/ ~~Y |- psi(Y)  mechanically."""
    if not psi.free_vars <= {y}:
        raise UnsupportedFormula(f"psi must use only {y.name}")
    wlem = Or(neg(Var(y)), neg(neg(Var(y))))
    if not decide(Sequent((wlem,), psi)):
        raise HypothesisFails(f"~{y.name} \\/ ~~{y.name} does not prove {psi}")
    return RiegerFactsReport(
        psi=psi,
        double_negated=decide(Sequent((), neg(neg(psi)))),
        follows_from_truth=decide(Sequent((Var(y),), psi)),
        self_instance=decide(Sequent((), substitute(psi, {y: psi}))),
        reflection=decide(Sequent((Implies(psi, Var(y)),), Var(y))),
    )
