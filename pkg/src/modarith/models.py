"""Finite Heyting algebras and intuitionistic models.

Every algebra here is finite, hence complete: ``⋂`` and ``⋃`` are folds
of the binary operations.  Algebras are built as the downsets of a finite
poset ordered by inclusion, and are checked against the sixteen lattice
and Heyting laws by brute force over all element tuples and all subsets.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Optional

import numpy as np

from .syntax import (
    And,
    Atom,
    Bot,
    Exists,
    Forall,
    Imp,
    Or,
    Proposition,
    Signature,
    Term,
    Top,
    Var,
    free_vars,
    show,
)


class ModelError(ValueError):
    pass


# --------------------------------------------------------------------------
# Algebras


@dataclass(eq=False)
class HeytingAlgebra:
    """Element ids are ``0..n-1``; tables are numpy arrays."""

    leq: np.ndarray
    meet: np.ndarray
    join: np.ndarray
    imp: np.ndarray
    bottom: int
    top: int
    labels: tuple = ()
    name: str = ""

    @property
    def size(self) -> int:
        return self.leq.shape[0]

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"HeytingAlgebra({self.name or 'anonymous'}, {self.size} elements)"

    def label(self, e: int) -> str:
        return self.labels[e] if self.labels else str(e)

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def big_meet(self, elems: Iterable[int]) -> int:
        out = self.top
        for e in elems:
            out = int(self.meet[out, e])
        return out

    def big_join(self, elems: Iterable[int]) -> int:
        out = self.bottom
        for e in elems:
            out = int(self.join[out, e])
        return out

    def neg(self, a: int) -> int:
        return int(self.imp[a, self.bottom])

    @property
    def is_boolean(self) -> bool:
        return all(self.join[a, self.neg(a)] == self.top for a in range(self.size))

    def describe(self) -> str:
        n = self.size
        head = "     " + " ".join(f"{self.label(j):>4}" for j in range(n))
        rows = [f"order ({self.name or 'algebra'}, min={self.label(self.bottom)}, max={self.label(self.top)}):", head]
        for i in range(n):
            rows.append(f"{self.label(i):>4} " + " ".join(f"{int(self.leq[i, j]):>4}" for j in range(n)))
        return "\n".join(rows)


def _bits(mask: int, n: int) -> list:
    return [i for i in range(n) if mask >> i & 1]


def downsets(order: np.ndarray) -> list:
    """Downward-closed subsets of the poset, as bitmasks, by size then value."""
    n = order.shape[0]
    below = [sum(1 << j for j in range(n) if order[j, i]) for i in range(n)]
    out = []
    for mask in range(1 << n):
        if all((below[i] & ~mask) == 0 for i in _bits(mask, n)):
            out.append(mask)
    out.sort(key=lambda m: (bin(m).count("1"), m))
    return out


def algebra_from_poset(order, name: str = "") -> HeytingAlgebra:
    """The algebra of downsets of a finite poset, ordered by inclusion.

    ``a → b`` is the union of all downsets ``d`` with ``d ∩ a ⊆ b``.
    """
    order = np.asarray(order, dtype=bool)
    n = order.shape[0]
    ds = downsets(order)
    index = {m: k for k, m in enumerate(ds)}
    size = len(ds)
    arr = np.array(ds, dtype=np.int64)
    sub = (arr[:, None] & ~arr[None, :]) == 0
    meet = np.vectorize(lambda i, j: index[ds[i] & ds[j]])(*np.indices((size, size)))
    join = np.vectorize(lambda i, j: index[ds[i] | ds[j]])(*np.indices((size, size)))
    imp = np.empty((size, size), dtype=np.int64)
    for i in range(size):
        for j in range(size):
            u = 0
            for d in ds:
                if d & ds[i] & ~ds[j] == 0:
                    u |= d
            imp[i, j] = index[u]
    labels = tuple("{" + ",".join(map(str, _bits(m, n))) + "}" for m in ds)
    return HeytingAlgebra(sub, meet.astype(np.int64), join.astype(np.int64), imp, 0, size - 1, labels, name)


def chain_order(k: int) -> np.ndarray:
    return np.triu(np.ones((k, k), dtype=bool))


def antichain_order(k: int) -> np.ndarray:
    return np.eye(k, dtype=bool)


def chain_algebra(n: int) -> HeytingAlgebra:
    """The ``n``-element chain (``n >= 2``)."""
    if n < 2:
        raise ModelError("a chain algebra needs at least two elements")
    alg = algebra_from_poset(chain_order(n - 1), name=f"{n}-chain")
    return alg


def boolean_algebra(atoms: int = 1) -> HeytingAlgebra:
    return algebra_from_poset(antichain_order(atoms), name=f"boolean-{1 << atoms}")


def _is_partial_order(m: np.ndarray) -> bool:
    if not m.diagonal().all():
        return False
    if ((m & m.T) & ~np.eye(len(m), dtype=bool)).any():
        return False
    return not (((m.astype(int) @ m.astype(int)) > 0) & ~m).any()


def canonical_order(m: np.ndarray) -> bytes:
    """Smallest byte string of the order matrix over all relabellings."""
    n = len(m)
    best = None
    for perm in itertools.permutations(range(n)):
        b = m[np.ix_(perm, perm)].tobytes()
        if best is None or b < best:
            best = b
    return best


@lru_cache(maxsize=None)
def posets(n: int) -> tuple:
    """All posets on ``n`` points up to isomorphism, as boolean matrices."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen = {}
    for bits in range(1 << len(pairs)):
        m = np.eye(n, dtype=bool)
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                m[i, j] = True
        if not _is_partial_order(m):
            continue
        key = canonical_order(m)
        if key not in seen:
            m.setflags(write=False)
            seen[key] = m
    return tuple(seen[k] for k in sorted(seen))


@lru_cache(maxsize=None)
def generated_algebras(max_points: int = 4) -> tuple:
    """Downset algebras of all posets with 1..max_points points, smallest first.

    Within one carrier size, Boolean algebras come first and chains next,
    so the 3-chain is the first non-Boolean algebra tried.
    """
    out = []
    for n in range(1, max_points + 1):
        for k, order in enumerate(posets(n)):
            alg = algebra_from_poset(order, name=f"downsets(poset {n}.{k})")
            if np.all(alg.leq | alg.leq.T):
                alg.name = f"{alg.size}-chain"
            elif alg.is_boolean:
                alg.name = f"boolean-{alg.size}"
            out.append(alg)

    def rank(a):
        is_chain = bool(np.all(a.leq | a.leq.T))
        return (a.size, not a.is_boolean, not is_chain)

    out.sort(key=rank)
    return tuple(out)


# --------------------------------------------------------------------------
# Laws

LAW_NAMES = (
    "reflexive",
    "antisymmetric",
    "transitive",
    "min-least",
    "max-greatest",
    "meet-left",
    "meet-right",
    "meet-greatest",
    "join-left",
    "join-right",
    "join-least",
    "big-meet-lower",
    "big-meet-greatest",
    "big-join-upper",
    "big-join-least",
    "residuation",
)


def _subset_folds(alg: HeytingAlgebra):
    """For every subset mask: ⋂, ⋃, common lower bounds, common upper bounds."""
    n = alg.size
    total = 1 << n
    bm = np.empty(total, dtype=np.int64)
    bj = np.empty(total, dtype=np.int64)
    lower = np.empty((total, n), dtype=bool)
    upper = np.empty((total, n), dtype=bool)
    bm[0], bj[0] = alg.top, alg.bottom
    lower[0], upper[0] = True, True
    for k in range(n):
        lo, hi = 1 << k, 1 << (k + 1)
        bm[lo:hi] = alg.meet[bm[:lo], k]
        bj[lo:hi] = alg.join[bj[:lo], k]
        lower[lo:hi] = lower[:lo] & alg.leq[:, k][None, :]
        upper[lo:hi] = upper[:lo] & alg.leq[k, :][None, :]
    member = ((np.arange(total)[:, None] >> np.arange(n)[None, :]) & 1).astype(bool)
    return bm, bj, lower, upper, member


def check_laws(alg: HeytingAlgebra, big: bool = True) -> dict:
    """Law name -> bool, each checked on every tuple (and every subset when ``big``)."""
    L, M, J, I = alg.leq, alg.meet, alg.join, alg.imp
    n = alg.size
    eye = np.eye(n, dtype=bool)
    r = np.arange(n)
    out = {}
    out["reflexive"] = bool(L.diagonal().all())
    out["antisymmetric"] = bool(((L & L.T) == eye).all())
    out["transitive"] = not bool((L[:, :, None] & L[None, :, :] & ~L[:, None, :]).any())
    out["min-least"] = bool(L[alg.bottom, :].all())
    out["max-greatest"] = bool(L[:, alg.top].all())
    out["meet-left"] = bool(L[M, r[:, None]].all())
    out["meet-right"] = bool(L[M, r[None, :]].all())
    LT = L.T
    out["meet-greatest"] = not bool((LT[:, None, :] & LT[None, :, :] & ~LT[M]).any())
    out["join-left"] = bool(L[r[:, None], J].all())
    out["join-right"] = bool(L[r[None, :], J].all())
    # x <= z and y <= z imply x ∪ y <= z; indices (x, y, z)
    out["join-least"] = not bool((L[:, None, :] & L[None, :, :] & ~L[J]).any())
    if big:
        bm, bj, lower, upper, member = _subset_folds(alg)
        out["big-meet-lower"] = bool(L[bm][member].all())
        out["big-meet-greatest"] = not bool((lower & ~LT[bm]).any())
        out["big-join-upper"] = bool(LT[bj][member].all())
        out["big-join-least"] = not bool((upper & ~L[bj]).any())
    # x <= y → z  iff  x ∩ y <= z; indices (x, y, z)
    lhs = L[r[:, None, None], I[None, :, :]]
    rhs = L[M[:, :, None], r[None, None, :]]
    out["residuation"] = bool((lhs == rhs).all())
    return out


def laws_hold(alg: HeytingAlgebra) -> bool:
    return all(check_laws(alg).values())


# --------------------------------------------------------------------------
# Models


@dataclass(eq=False)
class IntuitionisticModel:
    """Domains are ``range(k)`` per sort; tables are numpy arrays.

    ``functions[f]`` has one axis per argument and holds domain elements;
    ``predicates[P]`` has one axis per argument and holds algebra elements.
    """

    algebra: HeytingAlgebra
    domains: Mapping[str, int]
    functions: dict = field(default_factory=dict)
    predicates: dict = field(default_factory=dict)
    signature: Optional[Signature] = None

    def __post_init__(self):
        for s, k in self.domains.items():
            if k < 1:
                raise ModelError(f"domain of sort {s} is empty")

    def domain(self, sort: str) -> range:
        try:
            return range(self.domains[sort])
        except KeyError:
            raise ModelError(f"model has no domain for sort {sort!r}") from None

    def describe(self) -> str:
        alg = self.algebra
        lines = [alg.describe()]
        lines.append("domains: " + ", ".join(f"{s}={{0..{k - 1}}}" for s, k in sorted(self.domains.items())))
        for f, tab in sorted(self.functions.items()):
            tab = np.asarray(tab)
            if tab.ndim == 0:
                lines.append(f"{f} = {int(tab)}")
            else:
                for idx in np.ndindex(tab.shape):
                    lines.append(f"{f}({', '.join(map(str, idx))}) = {int(tab[idx])}")
        for p, tab in sorted(self.predicates.items()):
            tab = np.asarray(tab)
            if tab.ndim == 0:
                lines.append(f"{p} = {alg.label(int(tab))}")
            else:
                for idx in np.ndindex(tab.shape):
                    lines.append(f"{p}({', '.join(map(str, idx))}) = {alg.label(int(tab[idx]))}")
        return "\n".join(lines)


def eval_term(t: Term, model: IntuitionisticModel, phi: Mapping[Var, int]) -> int:
    if isinstance(t, Var):
        try:
            return phi[t]
        except KeyError:
            raise ModelError(f"variable {t.name} is not assigned") from None
    tab = model.functions.get(t.name)
    if tab is None:
        raise ModelError(f"model does not interpret function {t.name!r}")
    args = tuple(eval_term(a, model, phi) for a in t.args)
    return int(np.asarray(tab)[args]) if args else int(tab)


def evaluate(a: Proposition, model: IntuitionisticModel, phi: Mapping[Var, int] | None = None) -> int:
    """The denotation ``|a|_phi`` as an algebra element."""
    phi = dict(phi or {})
    alg = model.algebra

    def ev(p):
        t = type(p)
        if t is Atom:
            tab = model.predicates.get(p.pred)
            if tab is None:
                raise ModelError(f"model does not interpret predicate {p.pred!r}")
            args = tuple(eval_term(u, model, phi) for u in p.args)
            return int(np.asarray(tab)[args]) if args else int(tab)
        if t is Top:
            return alg.top
        if t is Bot:
            return alg.bottom
        if t is Imp:
            return int(alg.imp[ev(p.left), ev(p.right)])
        if t is And:
            return int(alg.meet[ev(p.left), ev(p.right)])
        if t is Or:
            return int(alg.join[ev(p.left), ev(p.right)])
        old = phi.get(p.var)
        vals = []
        for v in model.domain(p.var.sort):
            phi[p.var] = v
            vals.append(ev(p.body))
        if old is None:
            del phi[p.var]
        else:
            phi[p.var] = old
        return alg.big_meet(vals) if t is Forall else alg.big_join(vals)

    return ev(a)


eval_prop = evaluate


def assignments(vars_: Iterable[Var], model: IntuitionisticModel):
    vs = sorted(vars_, key=lambda v: (v.sort, v.name))
    for vals in itertools.product(*(model.domain(v.sort) for v in vs)):
        yield dict(zip(vs, vals))


def failing_assignment(a: Proposition, model: IntuitionisticModel):
    """An assignment giving ``a`` a value other than max, with that value; or None."""
    for phi in assignments(free_vars(a), model):
        v = evaluate(a, model, phi)
        if v != model.algebra.top:
            return phi, v
    return None


def is_valid(a: Proposition, model: IntuitionisticModel) -> bool:
    """True iff ``a`` denotes max under every assignment of its free variables."""
    return failing_assignment(a, model) is None


# --------------------------------------------------------------------------
# Countermodels


@dataclass
class Countermodel:
    model: IntuitionisticModel
    assignment: dict
    value: int

    def describe(self) -> str:
        alg = self.model.algebra
        lines = [self.model.describe()]
        if self.assignment:
            lines.append("assignment: " + ", ".join(f"{v.name}={e}" for v, e in self.assignment.items()))
        lines.append(f"value: {alg.label(self.value)} (max is {alg.label(alg.top)})")
        return "\n".join(lines)


def _vocabulary(a: Proposition, sig: Signature | None):
    """Function and predicate ranks used by ``a``; guessed from use when no signature."""
    franks, pranks = {}, {}

    def walk_term(t, sort):
        if isinstance(t, Var):
            return t.sort
        args = []
        for u in t.args:
            args.append(walk_term(u, None))
        if sig is not None and t.name in sig.functions:
            franks[t.name] = sig.functions[t.name]
        else:
            franks.setdefault(t.name, (tuple(args), sort or "iota"))
        return franks[t.name][1]

    def walk(p):
        if isinstance(p, Atom):
            sorts = tuple(walk_term(u, None) for u in p.args)
            if sig is not None and p.pred in sig.predicates:
                pranks[p.pred] = sig.predicates[p.pred]
            else:
                pranks.setdefault(p.pred, sorts)
        elif isinstance(p, (Imp, And, Or)):
            walk(p.left)
            walk(p.right)
        elif isinstance(p, (Forall, Exists)):
            walk(p.body)

    walk(a)
    return franks, pranks


def _sorts_of(a, franks, pranks):
    sorts = {v.sort for v in free_vars(a)}

    def walk(p):
        if isinstance(p, (Forall, Exists)):
            sorts.add(p.var.sort)
            walk(p.body)
        elif isinstance(p, (Imp, And, Or)):
            walk(p.left)
            walk(p.right)

    walk(a)
    for args, res in franks.values():
        sorts.update(args)
        sorts.add(res)
    for args in pranks.values():
        sorts.update(args)
    return sorts or {"iota"}


def _table_slots(franks, pranks, domains, alg):
    """(kind, name, shape, choices) for every symbol table."""
    slots = []
    for f, (args, res) in sorted(franks.items()):
        slots.append(("f", f, tuple(domains[s] for s in args), domains[res]))
    for p, args in sorted(pranks.items()):
        slots.append(("p", p, tuple(domains[s] for s in args), alg.size))
    return slots


def _build(alg, domains, slots, flat, sig):
    funcs, preds = {}, {}
    pos = 0
    for kind, name, shape, _ in slots:
        cells = int(np.prod(shape)) if shape else 1
        vals = np.array(flat[pos:pos + cells], dtype=np.int64).reshape(shape)
        pos += cells
        (funcs if kind == "f" else preds)[name] = vals
    return IntuitionisticModel(alg, dict(domains), funcs, preds, sig)


def _domain_choices(sorts, max_domain):
    sorts = sorted(sorts)
    for sizes in itertools.product(range(1, max_domain + 1), repeat=len(sorts)):
        yield dict(zip(sorts, sizes))


def find_countermodel(
    a: Proposition,
    max_domain: int = 2,
    max_algebra: int = 4,
    signature: Signature | None = None,
    limit: int = 200_000,
    seed: int = 0,
) -> Optional[Countermodel]:
    """Search small models for one in which ``a`` is not valid.

    Algebras are the downset algebras of posets with at most
    ``max_algebra`` points, smallest first.  Domain sizes run from 1 to
    ``max_domain``.  Symbol tables are enumerated exhaustively while the
    number of interpretations for one (algebra, domains) pair stays within
    ``limit``; beyond that ``limit`` random interpretations are sampled.
    Returns None when nothing was found, which is not a validity proof.
    """
    if max_domain < 1 or max_algebra < 1:
        raise ValueError("bounds must be at least 1")
    franks, pranks = _vocabulary(a, signature)
    sorts = _sorts_of(a, franks, pranks)
    rng = random.Random(seed)
    for alg in generated_algebras(max_algebra):
        for domains in _domain_choices(sorts, max_domain):
            slots = _table_slots(franks, pranks, domains, alg)
            ranges = []
            for _, _, shape, choices in slots:
                ranges.extend([choices] * (int(np.prod(shape)) if shape else 1))
            count = 1
            for c in ranges:
                count *= c
                if count > limit:
                    break
            if count <= limit:
                stream = itertools.product(*(range(c) for c in ranges))
            else:
                stream = ([rng.randrange(c) for c in ranges] for _ in range(limit))
            for flat in stream:
                model = _build(alg, domains, slots, flat, signature)
                bad = failing_assignment(a, model)
                if bad is not None:
                    return Countermodel(model, bad[0], bad[1])
    return None


def random_model(
    a_or_props,
    rng: random.Random,
    max_domain: int = 3,
    max_algebra: int = 4,
    signature: Signature | None = None,
) -> IntuitionisticModel:
    """A random model interpreting every symbol of the given proposition(s)."""
    props = [a_or_props] if not isinstance(a_or_props, (list, tuple)) else list(a_or_props)
    franks, pranks, sorts = {}, {}, set()
    for p in props:
        f, q = _vocabulary(p, signature)
        franks.update(f)
        pranks.update(q)
        sorts |= _sorts_of(p, f, q)
    alg = rng.choice(generated_algebras(max_algebra))
    domains = {s: rng.randint(1, max_domain) for s in sorted(sorts)}
    slots = _table_slots(franks, pranks, domains, alg)
    flat = []
    for _, _, shape, choices in slots:
        flat.extend(rng.randrange(choices) for _ in range(int(np.prod(shape)) if shape else 1))
    return _build(alg, domains, slots, flat, signature)


def arithmetic_model(k: int, alg: HeytingAlgebra | None = None) -> IntuitionisticModel:
    """``Z/k`` with 0, S, + and ×; ``=`` is two-valued equality."""
    alg = alg or boolean_algebra(1)
    r = np.arange(k)
    eqt = np.where(r[:, None] == r[None, :], alg.top, alg.bottom)
    return IntuitionisticModel(
        alg,
        {"iota": k},
        {
            "0": np.array(0),
            "S": (r + 1) % k,
            "+": (r[:, None] + r[None, :]) % k,
            "*": (r[:, None] * r[None, :]) % k,
        },
        {"=": eqt},
    )


def value_name(model: IntuitionisticModel, a: Proposition, phi=None) -> str:
    return f"|{show(a)}| = {model.algebra.label(evaluate(a, model, phi))}"

