"""First-order logic over the graph vocabulary {=, ~}.

AST, concrete syntax (parse/render), static measures (variable count,
quantifier rank), an exact memoized model checker, and builders for the
bounded-diameter and terminated-chain sentence families.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterator, Optional, Union

from .graphs import Graph


class FormulaSyntaxError(ValueError):
    """Raised on malformed concrete syntax, with a position."""


class FormulaScopeError(ValueError):
    """Raised when an atom uses a variable not bound by any quantifier."""


# -- AST ---------------------------------------------------------------


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Adj:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Eq, Adj, Not, And, Or, Implies, Iff, Forall, Exists]

_BINARY = {And: "&", Or: "|", Implies: "->", Iff: "<->"}
_QUANT = {Forall: "A", Exists: "E"}


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, (Eq, Adj)):
        return
    if isinstance(f, Not):
        yield from subformulas(f.body)
    elif isinstance(f, (And, Or, Implies, Iff)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    else:
        yield from subformulas(f.body)


def free_variables(f: Formula) -> frozenset[str]:
    if isinstance(f, (Eq, Adj)):
        return frozenset((f.left, f.right))
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return free_variables(f.left) | free_variables(f.right)
    return free_variables(f.body) - {f.var}


def variable_count(f: Formula) -> int:
    """Number of distinct variable names; reuse under requantification counts once."""
    names: set[str] = set()
    for sub in subformulas(f):
        if isinstance(sub, (Eq, Adj)):
            names.add(sub.left)
            names.add(sub.right)
        elif isinstance(sub, (Forall, Exists)):
            names.add(sub.var)
    return len(names)


def quantifier_rank(f: Formula) -> int:
    if isinstance(f, (Eq, Adj)):
        return 0
    if isinstance(f, Not):
        return quantifier_rank(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return max(quantifier_rank(f.left), quantifier_rank(f.right))
    return 1 + quantifier_rank(f.body)


def render(f: Formula) -> str:
    if isinstance(f, Eq):
        return f"{f.left}={f.right}"
    if isinstance(f, Adj):
        return f"{f.left}~{f.right}"
    if isinstance(f, Not):
        return f"!{render(f.body)}"
    if isinstance(f, (And, Or, Implies, Iff)):
        return f"({render(f.left)} {_BINARY[type(f)]} {render(f.right)})"
    return f"{_QUANT[type(f)]} {f.var}. {render(f.body)}"


# -- parser ------------------------------------------------------------

_SYMBOLS = ("<->", "->", "(", ")", ".", "!", "&", "|", "=", "~")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(("sym", sym, i))
                i += len(sym)
                break
        else:
            if c.isalnum() or c == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                tokens.append(("ident", text[i:j], i))
                i = j
            else:
                raise FormulaSyntaxError(f"unexpected character {c!r} at position {i}")
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[tuple[str, str, int]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, value: str) -> None:
        tok = self.next()
        if tok[1] != value:
            raise FormulaSyntaxError(
                f"expected {value!r} at position {tok[2]}, got {tok[1]!r}"
            )

    def formula(self, bound: frozenset[str]) -> Formula:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of input")
        kind, value, pos = tok
        if kind == "ident" and value in ("A", "E"):
            self.next()
            var_tok = self.next()
            if var_tok[0] != "ident":
                raise FormulaSyntaxError(
                    f"expected variable at position {var_tok[2]}"
                )
            var = var_tok[1]
            self.expect(".")
            body = self.formula(bound | {var})
            return Forall(var, body) if value == "A" else Exists(var, body)
        if value == "!":
            self.next()
            return Not(self.formula(bound))
        if value == "(":
            self.next()
            left = self.formula(bound)
            op_tok = self.next()
            classes = {"&": And, "|": Or, "->": Implies, "<->": Iff}
            if op_tok[1] not in classes:
                raise FormulaSyntaxError(
                    f"expected connective at position {op_tok[2]}, got {op_tok[1]!r}"
                )
            right = self.formula(bound)
            self.expect(")")
            return classes[op_tok[1]](left, right)
        if kind == "ident":
            self.next()
            op_tok = self.next()
            if op_tok[1] not in ("=", "~"):
                raise FormulaSyntaxError(
                    f"expected '=' or '~' at position {op_tok[2]}, got {op_tok[1]!r}"
                )
            rhs = self.next()
            if rhs[0] != "ident":
                raise FormulaSyntaxError(f"expected variable at position {rhs[2]}")
            for name, where in ((value, pos), (rhs[1], rhs[2])):
                if name not in bound:
                    raise FormulaScopeError(
                        f"unbound variable {name!r} at position {where}"
                    )
            return Eq(value, rhs[1]) if op_tok[1] == "=" else Adj(value, rhs[1])
        raise FormulaSyntaxError(f"unexpected token {value!r} at position {pos}")


def parse(text: str) -> Formula:
    """Parse a closed sentence; raises on syntax or unbound variables."""
    parser = _Parser(_tokenize(text))
    f = parser.formula(frozenset())
    trailing = parser.peek()
    if trailing is not None:
        raise FormulaSyntaxError(
            f"trailing input at position {trailing[2]}: {trailing[1]!r}"
        )
    return f


# -- evaluation --------------------------------------------------------


def evaluate(g: Graph, f: Formula, env: Optional[dict[str, int]] = None) -> bool:
    """Exact truth value of f on g under the (possibly empty) assignment env.

    Memoized per call on (subformula, assignment restricted to its free
    variables), so cost is bounded by |f| * n^(variable count) instead of
    exponential in quantifier depth.
    """
    env = dict(env or {})
    missing = free_variables(f) - set(env)
    if missing:
        raise FormulaScopeError(f"unassigned free variables: {sorted(missing)}")

    free_cache: dict[int, tuple[str, ...]] = {}
    for sub in subformulas(f):
        if id(sub) not in free_cache:
            free_cache[id(sub)] = tuple(sorted(free_variables(sub)))
    memo: dict[tuple[int, tuple[int, ...]], bool] = {}

    def ev(node: Formula, env: dict[str, int]) -> bool:
        if isinstance(node, Eq):
            return env[node.left] == env[node.right]
        if isinstance(node, Adj):
            return g.has_edge(env[node.left], env[node.right])
        key = (id(node), tuple(env[v] for v in free_cache[id(node)]))
        if key in memo:
            return memo[key]
        if isinstance(node, Not):
            result = not ev(node.body, env)
        elif isinstance(node, And):
            result = ev(node.left, env) and ev(node.right, env)
        elif isinstance(node, Or):
            result = ev(node.left, env) or ev(node.right, env)
        elif isinstance(node, Implies):
            result = (not ev(node.left, env)) or ev(node.right, env)
        elif isinstance(node, Iff):
            result = ev(node.left, env) == ev(node.right, env)
        elif isinstance(node, Forall):
            result = all(
                ev(node.body, {**env, node.var: v}) for v in g.vertices()
            )
        elif isinstance(node, Exists):
            result = any(
                ev(node.body, {**env, node.var: v}) for v in g.vertices()
            )
        else:  # pragma: no cover
            raise TypeError(f"unknown node {node!r}")
        memo[key] = result
        return result

    return ev(f, env)


def evaluate_naive(g: Graph, f: Formula, env: Optional[dict[str, int]] = None) -> bool:
    """Reference evaluator with no memoization; oracle for the fast path."""
    env = dict(env or {})

    def ev(node: Formula, env: dict[str, int]) -> bool:
        if isinstance(node, Eq):
            return env[node.left] == env[node.right]
        if isinstance(node, Adj):
            return g.has_edge(env[node.left], env[node.right])
        if isinstance(node, Not):
            return not ev(node.body, env)
        if isinstance(node, And):
            return ev(node.left, env) and ev(node.right, env)
        if isinstance(node, Or):
            return ev(node.left, env) or ev(node.right, env)
        if isinstance(node, Implies):
            return (not ev(node.left, env)) or ev(node.right, env)
        if isinstance(node, Iff):
            return ev(node.left, env) == ev(node.right, env)
        if isinstance(node, Forall):
            return all(ev(node.body, {**env, node.var: v}) for v in g.vertices())
        return any(ev(node.body, {**env, node.var: v}) for v in g.vertices())

    return ev(f, env)


# -- builders ----------------------------------------------------------


def _conj(parts: list[Formula]) -> Formula:
    if not parts:
        raise ValueError("empty conjunction")
    return reduce(And, parts)


def _disj(parts: list[Formula]) -> Formula:
    if not parts:
        raise ValueError("empty disjunction")
    return reduce(Or, parts)


def build_diameter_sentence(d: int) -> Formula:
    """Three-variable sentence: every vertex pair is at distance <= d.

    Walks of length i are written by alternating reuse of x and z against
    the fixed endpoint y.
    """
    if d < 1:
        raise ValueError(f"diameter bound must be >= 1, got {d}")

    def walk(cur: str, steps: int) -> Formula:
        if steps == 1:
            return Adj(cur, "y")
        nxt = "z" if cur == "x" else "x"
        return Exists(nxt, And(Adj(nxt, cur), walk(nxt, steps - 1)))

    body = _disj([Eq("x", "y")] + [walk("x", i) for i in range(1, d + 1)])
    return Forall("x", Forall("y", body))


def _adjacent_to_all(var: str, targets: list[str]) -> Formula:
    return _conj([Adj(var, t) for t in targets])


def build_phi_chain(k: int, ell: int) -> Formula:
    """The k-variable sentence asserting that the minimum length of a
    terminated chain rooted at some k-2 pairwise non-adjacent vertices is
    exactly ell.

    Variables are v1..v(k-2), x0, x1; the spine alternates reuse of x1
    and x0, and the terminator reuses v(k-2).
    """
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    if ell < 1:
        raise ValueError(f"ell must be >= 1, got {ell}")

    roots = [f"v{i}" for i in range(1, k - 1)]

    def chain_exists(i: int) -> Formula:
        # Spine x_1..x_i via alternating names x1, x0; then the terminator
        # reuses v(k-2), adjacent to the last two spine names and v1..v(k-3).
        term = Exists(
            roots[-1], _adjacent_to_all(roots[-1], ["x0", "x1"] + roots[:-1])
        )
        f = term
        for level in range(i, 0, -1):
            name = "x1" if level % 2 == 1 else "x0"
            prev = "x0" if level % 2 == 1 else "x1"
            f = Exists(name, And(_adjacent_to_all(name, [prev] + roots), f))
        return f

    parts: list[Formula] = []
    for i, a in enumerate(roots):
        for b in roots[i + 1 :]:
            parts.append(And(Not(Eq(a, b)), Not(Adj(a, b))))
    parts.append(_adjacent_to_all("x0", roots))
    parts.append(chain_exists(ell))
    parts.extend(Not(chain_exists(i)) for i in range(1, ell))

    body = _conj(parts)
    f = Exists("x0", body)
    for r in reversed(roots):
        f = Exists(r, f)
    return f
