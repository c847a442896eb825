"""Parser for the compact state-spec strings accepted by ``entangloc generate``.

Grammar (whitespace is ignored)::

    spec    := atom | "product:(" spec ("," spec)* ")"
                    | "mix:(" weight "*" spec ("," weight "*" spec)* ")"
    atom    := "ghz:" n [":" d] | "w:" n | "bell" | "plus" | "minus"
             | "basis:" digits [":" d] | "random:" dims [":" seed]
             | "werner:" p | "maxmixed:" dims
    dims    := k ("x" k)*          e.g. 2x3x2

A ``product`` or ``mix`` containing any density matrix yields a density
matrix; ``mix`` always does.
"""

from __future__ import annotations

from .states import (
    MINUS,
    PLUS,
    DensityMatrix,
    PureState,
    density_from_pure,
    make_basis,
    make_bell,
    make_ghz,
    make_w,
    maximally_mixed,
    mix,
    random_pure,
    tensor,
    tensor_density,
    werner_2qubit,
)


class SpecError(ValueError):
    """Malformed state spec; ``token`` is the offending piece."""

    def __init__(self, message, token):
        super().__init__(f"{message}: {token!r}")
        self.token = token


def _int(tok, what):
    try:
        value = int(tok)
    except ValueError:
        raise SpecError(f"expected integer {what}", tok) from None
    return value


def _dims(tok):
    return tuple(_int(x, "dimension") for x in tok.split("x"))


class _Parser:
    def __init__(self, text: str, seed):
        self.s = "".join(text.split())
        self.i = 0
        self.seed = seed

    def peek(self):
        return self.s[self.i] if self.i < len(self.s) else ""

    def expect(self, ch):
        if self.peek() != ch:
            raise SpecError(f"expected {ch!r} at position {self.i}", self.s[self.i:] or "<end>")
        self.i += 1

    def word(self):
        start = self.i
        while self.i < len(self.s) and self.s[self.i] not in ":,()*":
            self.i += 1
        return self.s[start:self.i]

    def args(self):
        out = []
        while self.peek() == ":" and self.s[self.i + 1:self.i + 2] != "(":
            self.i += 1
            out.append(self.word())
        return out

    def group(self, weighted):
        self.expect(":")
        self.expect("(")
        items = []
        while True:
            if weighted:
                w = self.word()
                try:
                    weight = float(w)
                except ValueError:
                    raise SpecError("expected mixture weight", w) from None
                self.expect("*")
                items.append((weight, self.spec()))
            else:
                items.append(self.spec())
            if self.peek() == ",":
                self.i += 1
                continue
            self.expect(")")
            return items

    def spec(self):
        name = self.word().lower()
        if name == "product":
            return _product(self.group(weighted=False))
        if name == "mix":
            terms = self.group(weighted=True)
            try:
                return mix([(w, _as_density(s)) for w, s in terms])
            except ValueError as exc:
                raise SpecError(str(exc), "mix") from None
        return self.atom(name, self.args())

    def atom(self, name, args):
        def arity(lo, hi):
            if not lo <= len(args) <= hi:
                raise SpecError(f"{name} takes {lo}..{hi} arguments", ":".join([name] + args))

        try:
            if name == "ghz":
                arity(1, 2)
                return make_ghz(_int(args[0], "n"), _int(args[1], "d") if len(args) > 1 else 2)
            if name == "w":
                arity(1, 1)
                return make_w(_int(args[0], "n"))
            if name == "bell":
                arity(0, 0)
                return make_bell()
            if name in ("plus", "minus"):
                arity(0, 0)
                return PLUS if name == "plus" else MINUS
            if name == "basis":
                arity(1, 2)
                d = _int(args[1], "d") if len(args) > 1 else 2
                digits = [_int(c, "digit") for c in args[0]]
                return make_basis((d,) * len(digits), digits)
            if name == "random":
                arity(1, 2)
                seed = _int(args[1], "seed") if len(args) > 1 else self.seed
                return random_pure(_dims(args[0]), seed=seed)
            if name == "werner":
                arity(1, 1)
                try:
                    p = float(args[0])
                except ValueError:
                    raise SpecError("expected Werner parameter", args[0]) from None
                return werner_2qubit(p)
            if name == "maxmixed":
                arity(1, 1)
                return maximally_mixed(_dims(args[0]))
        except SpecError:
            raise
        except ValueError as exc:
            raise SpecError(str(exc), ":".join([name] + args)) from None
        raise SpecError("unknown state", name or "<empty>")


def _as_density(s):
    return s if isinstance(s, DensityMatrix) else density_from_pure(s)


def _product(items):
    if all(isinstance(s, PureState) for s in items):
        return tensor(*items)
    return tensor_density(*[_as_density(s) for s in items])


def parse_spec(text: str, seed=None) -> PureState | DensityMatrix:
    """Build the state described by ``text``; ``seed`` fills in ``random:dims``."""
    p = _Parser(text, seed)
    state = p.spec()
    if p.i != len(p.s):
        raise SpecError("unexpected trailing input", p.s[p.i:])
    return state
