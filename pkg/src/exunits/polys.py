"""Multivariate polynomials over Z[theta], their parser, and variety checks.

Polynomials are sparse term maps: exponent vector -> nonzero coefficient
(a ring element tuple).  The text grammar is deliberately tiny:

    expr   := ['-'] term { ('+'|'-') term }
    term   := factor { '*' factor }
    factor := base [ '^' uint ]
    base   := var | uint | elemlit | 't' | '(' expr ')'
    var    := 'x' uint                      (1-based index)
    elemlit:= '[' int {',' int} ']'

't' stands for theta.  Implicit multiplication is a syntax error.
"""

from dataclasses import dataclass

from .errors import (
    DimensionMismatch,
    EnumerationCapExceeded,
    ExponentTooLarge,
    PolySyntaxError,
    UnknownVariable,
)
from .number_ring import (
    elem_add,
    elem_mul,
    elem_neg,
    elem_scale,
    is_zero,
)
from .residues import (
    field_inverse,
    mul_mod,
    prime_ctx,
    reduce_mod,
    residues,
    sub_mod,
)

MAX_EXPONENT = 2 ** 31 - 1


@dataclass
class MultiPoly:
    """Sparse polynomial in ``amb`` variables with ring-element coefficients."""

    amb: int
    terms: dict  # exponent tuple -> coefficient tuple

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)


@dataclass
class VarietySpec:
    """Affine closed subscheme of A^amb cut out by ``equations``.

    codim is declared by the user and validated pointwise by the
    good-reduction rank check; declared_degree feeds the asymptotics mode.
    """

    amb: int
    codim: int
    equations: tuple
    declared_degree: int

    def __post_init__(self):
        if self.equations:
            if not 1 <= self.codim <= self.amb:
                raise ValueError("codim must satisfy 1 <= codim <= amb")
        elif self.codim != 0:
            raise ValueError("codim must be 0 when there are no equations")
        for eq in self.equations:
            if eq.is_zero():
                raise ValueError("every equation must be nonzero")


@dataclass
class JacobianMatrix:
    """Formal partial derivatives: rows = equations, columns = variables."""

    rows: tuple  # tuple of tuples of MultiPoly


@dataclass
class GoodReductionReport:
    ok: bool
    witness: object = None  # first offending point, in enumeration order


# --- construction helpers ---


def zero_poly(amb):
    return MultiPoly(amb=amb, terms={})


def const_poly(ring, amb, coeff):
    if is_zero(coeff):
        return zero_poly(amb)
    return MultiPoly(amb=amb, terms={(0,) * amb: tuple(coeff)})


def var_poly(ring, amb, index):
    """The variable x_index (1-based)."""
    exps = tuple(1 if i == index - 1 else 0 for i in range(amb))
    return MultiPoly(amb=amb, terms={exps: ring.one})


def poly_add(ring, p, q):
    terms = dict(p.terms)
    for exps, c in q.terms.items():
        if exps in terms:
            s = elem_add(ring, terms[exps], c)
            if is_zero(s):
                del terms[exps]
            else:
                terms[exps] = s
        else:
            terms[exps] = c
    return MultiPoly(amb=p.amb, terms=terms)


def poly_neg(ring, p):
    return MultiPoly(
        amb=p.amb, terms={e: elem_neg(ring, c) for e, c in p.terms.items()}
    )


def poly_sub(ring, p, q):
    return poly_add(ring, p, poly_neg(ring, q))


def poly_mul(ring, p, q):
    terms = {}
    for e1, c1 in p.terms.items():
        for e2, c2 in q.terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            c = elem_mul(ring, c1, c2)
            if e in terms:
                c = elem_add(ring, terms[e], c)
            if is_zero(c):
                terms.pop(e, None)
            else:
                terms[e] = c
    return MultiPoly(amb=p.amb, terms=terms)


def poly_pow(ring, p, e):
    result = const_poly(ring, p.amb, ring.one)
    base = p
    while e:
        if e & 1:
            result = poly_mul(ring, result, base)
        base = poly_mul(ring, base, base) if e > 1 else base
        e >>= 1
    return result


# --- parser ---

_TOKEN_CHARS = set("+-*^()[],")


def _tokenize(src):
    tokens = []
    i = 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _TOKEN_CHARS:
            tokens.append((ch, ch, i))
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            tokens.append(("int", int(src[i:j]), i))
            i = j
        elif ch == "x":
            j = i + 1
            while j < n and src[j].isdigit():
                j += 1
            if j == i + 1:
                raise PolySyntaxError("'x' must be followed by a variable index", i)
            tokens.append(("var", int(src[i + 1 : j]), i))
            i = j
        elif ch == "t":
            tokens.append(("theta", "t", i))
            i += 1
        else:
            raise PolySyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, tokens, ring, amb):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring
        self.amb = amb

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.advance()
        if tok[0] != kind:
            raise PolySyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse_expr(self):
        negate = False
        if self.peek()[0] == "-":
            self.advance()
            negate = True
        poly = self.parse_term()
        if negate:
            poly = poly_neg(self.ring, poly)
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.parse_term()
            if op == "+":
                poly = poly_add(self.ring, poly, rhs)
            else:
                poly = poly_sub(self.ring, poly, rhs)
        return poly

    def parse_term(self):
        poly = self.parse_factor()
        while self.peek()[0] == "*":
            self.advance()
            poly = poly_mul(self.ring, poly, self.parse_factor())
        return poly

    def parse_factor(self):
        poly = self.parse_base()
        if self.peek()[0] == "^":
            self.advance()
            tok = self.expect("int")
            if tok[1] > MAX_EXPONENT:
                raise ExponentTooLarge(f"exponent {tok[1]} too large", tok[2])
            poly = poly_pow(self.ring, poly, tok[1])
        return poly

    def parse_base(self):
        kind, value, pos = self.peek()
        if kind == "var":
            self.advance()
            if value < 1 or value > self.amb:
                raise UnknownVariable(
                    f"variable x{value} out of range 1..{self.amb}", pos
                )
            return var_poly(self.ring, self.amb, value)
        if kind == "int":
            self.advance()
            return const_poly(self.ring, self.amb, self.ring.from_int(value))
        if kind == "theta":
            self.advance()
            return const_poly(self.ring, self.amb, self.ring.theta)
        if kind == "[":
            return const_poly(self.ring, self.amb, self.parse_elemlit())
        if kind == "(":
            self.advance()
            poly = self.parse_expr()
            self.expect(")")
            return poly
        raise PolySyntaxError(f"unexpected token {value!r}", pos)

    def parse_elemlit(self):
        self.expect("[")
        coords = [self.parse_signed_int()]
        while self.peek()[0] == ",":
            self.advance()
            coords.append(self.parse_signed_int())
        self.expect("]")
        if len(coords) != self.ring.deg:
            tok = self.peek()
            raise PolySyntaxError(
                f"element literal has {len(coords)} coordinates, "
                f"ring degree is {self.ring.deg}",
                tok[2],
            )
        return tuple(coords)

    def parse_signed_int(self):
        sign = 1
        if self.peek()[0] == "-":
            self.advance()
            sign = -1
        tok = self.expect("int")
        return sign * tok[1]


def parse_poly(src, ring, amb):
    """Parse source text into a MultiPoly; errors carry a source offset."""
    parser = _Parser(_tokenize(src), ring, amb)
    poly = parser.parse_expr()
    end = parser.advance()
    if end[0] != "end":
        raise PolySyntaxError(f"trailing input {end[1]!r}", end[2])
    return poly


def _coeff_str(coeff):
    if all(c == 0 for c in coeff[1:]):
        return str(coeff[0])
    return "[" + ",".join(str(c) for c in coeff) + "]"


def poly_to_str(poly):
    """Render a polynomial in the input grammar (round-trips exactly)."""
    if not poly.terms:
        return "0"
    parts = []
    for exps in sorted(poly.terms, reverse=True):
        coeff = poly.terms[exps]
        monomial = []
        for i, e in enumerate(exps):
            if e == 1:
                monomial.append(f"x{i + 1}")
            elif e > 1:
                monomial.append(f"x{i + 1}^{e}")
        cstr = _coeff_str(coeff)
        rational = all(c == 0 for c in coeff[1:])
        sign = "+"
        if rational and coeff[0] < 0:
            sign = "-"
            cstr = str(-coeff[0])
        if monomial and rational and cstr == "1":
            body = "*".join(monomial)
        elif monomial:
            body = cstr + "*" + "*".join(monomial)
        else:
            body = cstr
        parts.append((sign, body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# --- evaluation ---


def eval_poly(poly, point, ctx):
    """Canonical representative of poly(point) in O_K / n.

    Reduction happens after every ring operation; per-variable power tables
    keep repeated exponents cheap.
    """
    if len(point) != poly.amb:
        raise DimensionMismatch(
            f"point has {len(point)} coordinates, polynomial expects {poly.amb}"
        )
    pows = [{0: reduce_mod(ctx, ctx.ring.one)} for _ in range(poly.amb)]

    def power(i, e):
        table = pows[i]
        if e not in table:
            half = power(i, e // 2)
            val = mul_mod(ctx, half, half)
            if e % 2:
                val = mul_mod(ctx, val, reduce_mod(ctx, point[i]))
            table[e] = val
        return table[e]

    acc = ctx.ring.zero
    for exps, coeff in poly.terms.items():
        val = reduce_mod(ctx, coeff)
        for i, e in enumerate(exps):
            if e:
                val = mul_mod(ctx, val, power(i, e))
        acc = elem_add(ctx.ring, acc, val)
    return reduce_mod(ctx, acc)


# --- Jacobian ---


def partial_derivative(ring, poly, j):
    """Formal d/dx_j (1-based j)."""
    terms = {}
    for exps, coeff in poly.terms.items():
        e = exps[j - 1]
        if e == 0:
            continue
        new_exps = tuple(
            v - 1 if i == j - 1 else v for i, v in enumerate(exps)
        )
        c = elem_scale(ring, e, coeff)
        if new_exps in terms:
            c = elem_add(ring, terms[new_exps], c)
        if not is_zero(c):
            terms[new_exps] = c
        else:
            terms.pop(new_exps, None)
    return MultiPoly(amb=poly.amb, terms=terms)


def jacobian(ring, V):
    rows = tuple(
        tuple(partial_derivative(ring, eq, j + 1) for j in range(V.amb))
        for eq in V.equations
    )
    return JacobianMatrix(rows=rows)


def jacobian_rank_at(J, point, ctx):
    """Rank over the residue field of the Jacobian evaluated at point.

    Gaussian elimination; the pivot is always the first nonzero entry in
    row-major order, which makes the computation deterministic.
    """
    if not J.rows:
        return 0
    mat = [
        [eval_poly(entry, point, ctx) for entry in row] for row in J.rows
    ]
    ncols = len(mat[0])
    zero = ctx.ring.zero
    rank = 0
    pivot_cols = []
    for row in mat:
        # clear previously pivoted columns
        for r, c in pivot_cols:
            if row[c] != zero:
                factor = row[c]
                for j in range(ncols):
                    row[j] = sub_mod(ctx, row[j], mul_mod(ctx, factor, r[j]))
        col = next((j for j in range(ncols) if row[j] != zero), None)
        if col is None:
            continue
        inv = field_inverse(ctx, row[col])
        row = [mul_mod(ctx, inv, x) for x in row]
        pivot_cols.append((row, col))
        rank += 1
    return rank


# --- point enumeration and good reduction ---


def iter_points(ctx, amb, start=0, stop=None):
    """Points of (O_K/n)^amb; coordinate 1 varies fastest.

    The index decoding mirrors the residue enumeration convention (highest
    position most significant), so disjoint index ranges partition the space.
    """
    reps = list(residues(ctx))
    norm = ctx.norm
    total = norm ** amb
    if stop is None:
        stop = total
    for idx in range(start, stop):
        rem = idx
        coords = []
        for _ in range(amb):
            rem, digit = divmod(rem, norm)
            coords.append(reps[digit])
        yield tuple(coords)


def on_variety(V, point, ctx):
    zero = ctx.ring.zero
    return all(eval_poly(eq, point, ctx) == zero for eq in V.equations)


def compile_equations(ctx, equations, reps):
    """Precompute per-residue power tables so point loops stay cheap.

    Returns a predicate on tuples of residue indices that is True iff every
    equation vanishes.  Single-variable monomials collapse to one table
    lookup; mixed monomials cost one modular product per extra variable.
    """
    from .residues import add_mod, pow_mod

    zero = ctx.ring.zero
    compiled = []
    for eq in equations:
        const = zero
        monomials = []  # list of [(var_index, table)] per term
        for exps, coeff in eq.terms.items():
            vars_ = [(i, e) for i, e in enumerate(exps) if e]
            if not vars_:
                const = add_mod(ctx, const, coeff)
                continue
            # fold the coefficient into the first variable's table
            tables = []
            for k, (i, e) in enumerate(vars_):
                if k == 0:
                    tables.append(
                        (i, [mul_mod(ctx, coeff, pow_mod(ctx, rep, e)) for rep in reps])
                    )
                else:
                    tables.append((i, [pow_mod(ctx, rep, e) for rep in reps]))
            monomials.append(tables)
        compiled.append((const, monomials))

    def vanishes(indices):
        for const, monomials in compiled:
            acc = const
            for tables in monomials:
                i0, t0 = tables[0]
                val = t0[indices[i0]]
                for i, t in tables[1:]:
                    val = mul_mod(ctx, val, t[indices[i]])
                acc = add_mod(ctx, acc, val)
            if acc != zero:
                return False
        return True

    return vanishes


def iter_variety_points(ctx, V, start=0, stop=None):
    """Points of X((O_K/n)^amb) in enumeration order, via compiled equations."""
    reps = list(residues(ctx))
    vanishes = compile_equations(ctx, V.equations, reps)
    norm = ctx.norm
    amb = V.amb
    if stop is None:
        stop = norm ** amb
    indices = [0] * amb
    for idx in range(start, stop):
        rem = idx
        for i in range(amb):
            rem, indices[i] = divmod(rem, norm)
        if vanishes(indices):
            yield tuple(reps[i] for i in indices)


def check_good_reduction(ring, V, prime_factor, cap=10 ** 8):
    """Smoothness of the mod-p fiber at every residue point of X.

    ok iff the Jacobian has rank equal to the declared codimension at each
    point of X(O_K/p); vacuously true for an empty fiber.  The witness is
    the first failing point in enumeration order.
    """
    ctx = prime_ctx(ring, prime_factor)
    if ctx.norm ** V.amb > cap:
        raise EnumerationCapExceeded(
            f"{ctx.norm}^{V.amb} candidate points exceed the cap {cap}"
        )
    J = jacobian(ring, V)
    for point in iter_variety_points(ctx, V):
        if jacobian_rank_at(J, point, ctx) != V.codim:
            return GoodReductionReport(ok=False, witness=point)
    return GoodReductionReport(ok=True)
