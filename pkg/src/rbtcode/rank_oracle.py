"""Entropy of linear-code symbols measured as matrix rank.

For a linear code with uniformly random message, the entropy (in units of one
field symbol) of a set of stored or transmitted symbols equals the rank of
their coefficient vectors. This module uses that bridge to check the
information-theoretic properties of exact-repair codes on the constructed
repair-by-transfer code. It says nothing about nonlinear codes.

Labels: ``("W", l)`` is everything node l stores, ``("S", m, l)`` is what
helper m sends when node l is repaired.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Hashable, Iterable

import numpy as np

from .errors import UsageError
from .gf import Field
from .rbt import RbtCode, slot_of

Label = Hashable


class SymbolSpace:
    """Coefficient vectors (rows of length ``dim``) for every label."""

    def __init__(self, dim: int, field: Field, vectors: dict[Label, np.ndarray]):
        self.dim = dim
        self.field = field
        self.vectors: dict[Label, np.ndarray] = {}
        for label, vecs in vectors.items():
            vecs = np.atleast_2d(np.asarray(vecs, dtype=np.uint16))
            if vecs.shape[1] != dim:
                raise UsageError(f"vectors of {label!r} have length {vecs.shape[1]}, expected {dim}")
            self.vectors[label] = vecs
        self._cache: dict[frozenset, int] = {}

    @classmethod
    def from_code(cls, code: RbtCode) -> SymbolSpace:
        """Message space of one stripe: beta independent groups of B_unit symbols.

        A symbol of group g has the generator column of its edge embedded at
        offset ``g * B_unit``.
        """
        p = code.params
        G = code.mds.generator
        Bu = p.B_unit
        dim = Bu * p.beta

        def embed(edge: int, group: int) -> np.ndarray:
            v = np.zeros(dim, dtype=np.uint16)
            v[group * Bu:(group + 1) * Bu] = G[:, edge]
            return v

        vectors: dict[Label, np.ndarray] = {}
        for node in range(p.n):
            edges = code.edges[node]
            vectors[("W", node)] = np.array([embed(e, g) for g in range(p.beta) for e in edges])
            for failed in range(p.n):
                if failed != node:
                    e = edges[slot_of(node, failed)]
                    vectors[("S", node, failed)] = np.array([embed(e, g) for g in range(p.beta)])
        return cls(dim, code.field, vectors)

    def with_duplicate_column(self, node: int, slot: int = 0, source: int = 1) -> SymbolSpace:
        """Copy where one of ``node``'s stored vectors is replaced by another of its own."""
        vecs = dict(self.vectors)
        w = vecs[("W", node)].copy()
        w[slot] = w[source]
        vecs[("W", node)] = w
        return SymbolSpace(self.dim, self.field, vecs)

    def entropy(self, labels: Iterable[Label]) -> int:
        key = frozenset(labels)
        if not key:
            return 0
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        missing = [lab for lab in key if lab not in self.vectors]
        if missing:
            raise UsageError(f"unknown labels: {missing}")
        mat = np.concatenate([self.vectors[lab] for lab in sorted(key, key=repr)], axis=0)
        r = self.field.rank(mat)
        self._cache[key] = r
        return r


def entropy(space: SymbolSpace, labels: Iterable[Label]) -> int:
    return space.entropy(labels)


def mutual_information(space: SymbolSpace, labels_a: Iterable[Label], labels_b: Iterable[Label]) -> int:
    a, b = frozenset(labels_a), frozenset(labels_b)
    return space.entropy(a) + space.entropy(b) - space.entropy(a | b)


def conditional_entropy(space: SymbolSpace, labels: Iterable[Label], given: Iterable[Label]) -> int:
    a, g = frozenset(labels), frozenset(given)
    return space.entropy(a | g) - space.entropy(g)


@dataclass
class CheckResult:
    status: str  # PASS, FAIL or N/A
    prop: str
    subset: str
    detail: str = ""

    def line(self) -> str:
        out = f"{self.status} {self.prop} {self.subset}"
        return f"{out} ({self.detail})" if self.detail else out


@dataclass
class PropertyReport:
    n: int
    k: int
    beta: int
    results: list[CheckResult] = dc_field(default_factory=list)
    exhaustive: bool = True

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if r.status == "FAIL"]

    @property
    def passed(self) -> bool:
        return not self.failures

    def count(self, prop: str, status: str = "PASS") -> int:
        return sum(1 for r in self.results if r.prop == prop and r.status == status)

    def lines(self) -> list[str]:
        head = [
            f"# n={self.n} k={self.k} d={self.n - 1} beta={self.beta}",
            "# entropies are ranks of coefficient vectors; valid for this linear code only",
            f"# subsets: {'exhaustive' if self.exhaustive else 'random sample'}",
        ]
        return head + [r.line() for r in self.results]

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def _fmt(nodes) -> str:
    return "{" + ",".join(str(x) for x in sorted(nodes)) + "}"


def _subsets(pool: list[int], rng, exhaustive: bool, samples: int):
    if exhaustive:
        for a in range(len(pool) + 1):
            yield from itertools.combinations(pool, a)
        return
    for _ in range(samples):
        a = int(rng.integers(0, len(pool) + 1))
        yield tuple(sorted(rng.choice(pool, size=a, replace=False).tolist()))


def verify_code_properties(
    code: RbtCode,
    space: SymbolSpace | None = None,
    *,
    exhaustive_limit: int = 8,
    samples: int = 500,
    seed: int = 0,
) -> PropertyReport:
    """Check stored/transmitted-entropy properties of the code by rank sweeps.

    Checks, for every node l and every set A of other nodes (a = |A|):

    - node-entropy: H(W_l) = alpha
    - mutual-info: I(W_l; W_A) = a*beta for 0 < a < k and alpha for a >= k
    - repair-symbol-entropy: H(S_m^l) = beta
    - lemma3-stored: H(W_l | W_A) <= min(alpha, (d - a) beta)
    - lemma3-passed: H(W_l | S_A^l) <= min(alpha, (d - a) beta)
    - corollary5: equality in the previous line when a < k
    - reconstruction: H(W_K) = B for every k-subset K
    - exact-repair: H(W_l | S_{all others}^l) = 0

    Above ``exhaustive_limit`` nodes the subsets are a fixed-seed random sample.
    """
    p = code.params
    n, k, d, beta, alpha = p.n, p.k, p.d, p.beta, p.alpha
    space = space or SymbolSpace.from_code(code)
    exhaustive = n <= exhaustive_limit
    rng = np.random.default_rng(seed)
    report = PropertyReport(n, k, beta, exhaustive=exhaustive)
    add = report.results.append

    def W(nodes):
        return [("W", x) for x in nodes]

    def check(ok: bool, prop: str, subset: str, detail: str = "") -> None:
        add(CheckResult("PASS" if ok else "FAIL", prop, subset, "" if ok else detail))

    for l in range(n):
        h = space.entropy(W([l]))
        check(h == alpha, "node-entropy", f"l={l}", f"H={h}, expected {alpha}")

    for l in range(n):
        for m in range(n):
            if m != l:
                h = space.entropy([("S", m, l)])
                check(h == beta, "repair-symbol-entropy", f"m={m},l={l}", f"H={h}, expected {beta}")

    if exhaustive:
        k_sets = itertools.combinations(range(n), k)
    else:
        k_sets = (tuple(sorted(rng.choice(n, size=k, replace=False).tolist())) for _ in range(samples))
    for K in k_sets:
        h = space.entropy(W(K))
        check(h == p.B, "reconstruction", _fmt(K), f"H={h}, expected B={p.B}")

    for l in range(n):
        others = [x for x in range(n) if x != l]
        for A in _subsets(others, rng, exhaustive, samples):
            a = len(A)
            sub = f"l={l},A={_fmt(A)}"
            bound = min(alpha, (d - a) * beta)

            if a == 0:
                add(CheckResult("N/A", "mutual-info", sub, "a <= p = 0 case is vacuous at MBR"))
            else:
                mi = mutual_information(space, W([l]), W(A))
                want = a * beta if a < k else alpha
                check(mi == want, "mutual-info", sub, f"I={mi}, expected {want}")

            hc = conditional_entropy(space, W([l]), W(A))
            check(hc <= bound, "lemma3-stored", sub, f"H={hc} > {bound}")

            S = [("S", x, l) for x in A]
            hs = conditional_entropy(space, W([l]), S)
            check(hs <= bound, "lemma3-passed", sub, f"H={hs} > {bound}")
            if a < k:
                check(hs == bound, "corollary5", sub, f"H={hs}, expected {bound}")

        hr = conditional_entropy(space, W([l]), [("S", x, l) for x in others])
        check(hr == 0, "exact-repair", f"l={l}", f"H={hr}, expected 0")

    return report
