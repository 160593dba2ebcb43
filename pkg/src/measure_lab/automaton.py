"""Labelled automata over integer alphabets.

Parsing and validation of the JSON document format, per-label 0/1
transition matrices, strong connectivity and primitivity, and exact
path/word counting and enumeration oracles (Python integers throughout,
so counts never overflow).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from math import gcd

import numpy as np

from .errors import (
    CapExceeded,
    DuplicateEdge,
    LabelOutsideAlphabet,
    SchemaError,
    UnknownState,
)

ENUMERATION_CAP = 14


@dataclass(frozen=True)
class LabeledAutomaton:
    """Finite directed multigraph with integer edge labels.

    State order is document order and fixes the indexing of every matrix
    and report derived from the automaton.  ``beta_minpoly`` carries the
    base polynomial from the document for CLI convenience; library
    functions always take the Pisot number explicitly.
    """

    states: tuple[str, ...]
    alphabet: tuple[int, ...]
    edges: tuple[tuple[str, str, int], ...]
    initial: tuple[str, ...] = ()
    terminal: tuple[str, ...] = ()
    beta_minpoly: tuple[int, ...] | None = None

    @property
    def n_states(self) -> int:
        return len(self.states)

    def state_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    def with_initial_terminal(self, initial, terminal) -> "LabeledAutomaton":
        return replace(self, initial=tuple(initial), terminal=tuple(terminal))


@dataclass(frozen=True)
class TransitionMatrices:
    """Per-label 0/1 matrices in state order plus their sum."""

    labels: tuple[int, ...]
    per_label: dict[int, np.ndarray] = field(compare=False)
    total: np.ndarray = field(compare=False)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise SchemaError(msg)


def parse_automaton(document) -> LabeledAutomaton:
    """Validate an automaton document (JSON text or parsed dict)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    _require(isinstance(document, dict), "document must be a JSON object")
    allowed = {"beta", "alphabet", "states", "edges", "initial", "terminal"}
    unknown = set(document) - allowed
    _require(not unknown, f"unknown keys: {sorted(unknown)}")
    for key in ("alphabet", "states", "edges"):
        _require(key in document, f"missing key '{key}'")

    beta_minpoly = None
    if "beta" in document:
        beta = document["beta"]
        _require(isinstance(beta, dict) and "minpoly" in beta, "'beta' must be {'minpoly': [...]}")
        mp_ = beta["minpoly"]
        _require(
            isinstance(mp_, list) and mp_ and all(isinstance(c, int) for c in mp_),
            "'beta.minpoly' must be a nonempty integer list",
        )
        beta_minpoly = tuple(mp_)

    alphabet = document["alphabet"]
    _require(
        isinstance(alphabet, list) and all(isinstance(a, int) for a in alphabet),
        "'alphabet' must be a list of integers",
    )
    _require(len(set(alphabet)) == len(alphabet), "duplicate alphabet letters")

    states = document["states"]
    _require(
        isinstance(states, list) and states and all(isinstance(s, str) for s in states),
        "'states' must be a nonempty list of strings",
    )
    _require(len(set(states)) == len(states), "duplicate state names")
    state_set = set(states)

    edges = []
    seen = set()
    alpha_set = set(alphabet)
    _require(isinstance(document["edges"], list), "'edges' must be a list")
    for e in document["edges"]:
        _require(
            isinstance(e, dict) and set(e) == {"from", "to", "label"},
            f"edge must have exactly keys from/to/label: {e}",
        )
        src, dst, label = e["from"], e["to"], e["label"]
        if src not in state_set:
            raise UnknownState(f"edge source '{src}' not declared")
        if dst not in state_set:
            raise UnknownState(f"edge target '{dst}' not declared")
        if not isinstance(label, int) or label not in alpha_set:
            raise LabelOutsideAlphabet(f"label {label!r} outside alphabet {sorted(alpha_set)}")
        triple = (src, dst, label)
        if triple in seen:
            raise DuplicateEdge(f"duplicate edge {triple}")
        seen.add(triple)
        edges.append(triple)

    def _state_subset(key: str) -> tuple[str, ...]:
        value = document.get(key, [])
        _require(isinstance(value, list), f"'{key}' must be a list")
        for s in value:
            if s not in state_set:
                raise UnknownState(f"{key} state '{s}' not declared")
        _require(len(set(value)) == len(value), f"duplicate {key} states")
        return tuple(value)

    return LabeledAutomaton(
        states=tuple(states),
        alphabet=tuple(sorted(alphabet)),
        edges=tuple(edges),
        initial=_state_subset("initial"),
        terminal=_state_subset("terminal"),
        beta_minpoly=beta_minpoly,
    )


def serialize_automaton(a: LabeledAutomaton) -> dict:
    doc = {}
    if a.beta_minpoly is not None:
        doc["beta"] = {"minpoly": list(a.beta_minpoly)}
    doc["alphabet"] = list(a.alphabet)
    doc["states"] = list(a.states)
    doc["edges"] = [{"from": s, "to": t, "label": l} for s, t, l in a.edges]
    doc["initial"] = list(a.initial)
    doc["terminal"] = list(a.terminal)
    return doc


def automaton_to_json(a: LabeledAutomaton) -> str:
    return json.dumps(serialize_automaton(a), indent=2) + "\n"


# ----------------------------------------------------------------------
# Matrices
# ----------------------------------------------------------------------


def transition_matrices(a: LabeledAutomaton) -> TransitionMatrices:
    n = a.n_states
    idx = a.state_index()
    per = {label: np.zeros((n, n), dtype=np.int64) for label in a.alphabet}
    for src, dst, label in a.edges:
        per[label][idx[src], idx[dst]] = 1
    total = np.zeros((n, n), dtype=np.int64)
    for label in a.alphabet:
        total += per[label]
    return TransitionMatrices(labels=a.alphabet, per_label=per, total=total)


def _adjacency_exact(a: LabeledAutomaton) -> list[list[int]]:
    n = a.n_states
    idx = a.state_index()
    m = [[0] * n for _ in range(n)]
    for src, dst, _ in a.edges:
        m[idx[src]][idx[dst]] += 1
    return m


def _int_matmul(x, y):
    n, k, m = len(x), len(y), len(y[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        xi = x[i]
        oi = out[i]
        for j in range(k):
            v = xi[j]
            if v:
                yj = y[j]
                for l in range(m):
                    oi[l] += v * yj[l]
    return out


def _int_matpow(m, n):
    size = len(m)
    result = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    base = [row[:] for row in m]
    while n:
        if n & 1:
            result = _int_matmul(result, base)
        base = _int_matmul(base, base)
        n >>= 1
    return result


# ----------------------------------------------------------------------
# Connectivity and primitivity
# ----------------------------------------------------------------------


def _successors(a: LabeledAutomaton) -> list[list[int]]:
    idx = a.state_index()
    succ = [[] for _ in a.states]
    seen = set()
    for src, dst, _ in a.edges:
        pair = (idx[src], idx[dst])
        if pair not in seen:
            seen.add(pair)
            succ[pair[0]].append(pair[1])
    return succ


def _strongly_connected_components(succ: list[list[int]]) -> list[list[int]]:
    # Tarjan, iterative.
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(pi, len(succ[v])):
                w = succ[v][i]
                if index[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])
    return components


def primitivity_check(a: LabeledAutomaton) -> dict:
    """Strong connectivity, period (gcd of cycle lengths), primitivity.

    Period is 0 when there is no cycle or the graph is not strongly
    connected; primitive means strongly connected with period 1.
    """
    succ = _successors(a)
    comps = _strongly_connected_components(succ)
    strongly_connected = len(comps) == 1
    period = 0
    if strongly_connected:
        # BFS levels; every edge u->v contributes level[u]+1-level[v].
        n = a.n_states
        level = [-1] * n
        level[0] = 0
        queue = [0]
        while queue:
            u = queue.pop()
            for v in succ[u]:
                if level[v] == -1:
                    level[v] = level[u] + 1
                    queue.append(v)
        g = 0
        for u in range(n):
            for v in succ[u]:
                g = gcd(g, level[u] + 1 - level[v])
        period = abs(g)
    return {
        "strongly_connected": strongly_connected,
        "period": period,
        "primitive": strongly_connected and period == 1,
    }


# ----------------------------------------------------------------------
# Counting and enumeration
# ----------------------------------------------------------------------


def count_words(a: LabeledAutomaton, n: int, use_initial_terminal: bool = False) -> int:
    """Number of length-n label words along paths, counted with path
    multiplicity (a word with several runs counts once per run).

    With ``use_initial_terminal`` the paths are restricted to start in the
    initial set and end in the terminal set.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    m = _int_matpow(_adjacency_exact(a), n)
    idx = a.state_index()
    if use_initial_terminal:
        rows = [idx[s] for s in a.initial]
        cols = [idx[s] for s in a.terminal]
        return sum(m[i][j] for i in rows for j in cols)
    return sum(sum(row) for row in m)


def enumerate_paths(a: LabeledAutomaton, n: int, from_set, to_set, cap: int = ENUMERATION_CAP):
    """All length-n label words along paths from from_set to to_set, with
    run multiplicity, in lexicographic (state order, then label) order."""
    if n > cap:
        raise CapExceeded(f"enumeration length {n} exceeds cap {cap}")
    idx = a.state_index()
    out_edges: list[list[tuple[int, int]]] = [[] for _ in a.states]
    for src, dst, label in a.edges:
        out_edges[idx[src]].append((idx[dst], label))
    for lst in out_edges:
        lst.sort()
    targets = {idx[s] for s in to_set}
    words: list[tuple[int, ...]] = []

    def walk(state: int, depth: int, word: list[int]) -> None:
        if depth == n:
            if state in targets:
                words.append(tuple(word))
            return
        for dst, label in out_edges[state]:
            word.append(label)
            walk(dst, depth + 1, word)
            word.pop()

    for name in from_set:
        walk(idx[name], 0, [])
    return words


def ambiguous_word_count(a: LabeledAutomaton, n_max: int = 8) -> int:
    """Number of words of length <= n_max realised by more than one run.

    Run counts are taken over all start states; a positive value warns
    that path counts and distinct-word counts diverge.
    """
    idx = a.state_index()
    step: dict[int, list[list[int]]] = {}
    n = a.n_states
    for label in a.alphabet:
        m = [[0] * n for _ in range(n)]
        step[label] = m
    for src, dst, label in a.edges:
        step[label][idx[src]][idx[dst]] += 1

    ambiguous = 0
    # counts vector: number of runs of the current word ending in each state
    level: list[tuple[int, ...]] = [tuple([1] * n)]
    for _ in range(n_max):
        nxt: list[tuple[int, ...]] = []
        for counts in level:
            for label in a.alphabet:
                m = step[label]
                new = tuple(
                    sum(counts[i] * m[i][j] for i in range(n) if counts[i])
                    for j in range(n)
                )
                total = sum(new)
                if total == 0:
                    continue
                if total > 1:
                    ambiguous += 1
                nxt.append(new)
        level = nxt
    return ambiguous
