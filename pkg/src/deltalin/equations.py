"""Delta-linear equations phi(u) = (1 + p*alpha) * Phi(u) and their solutions.

Three equation types are supported, distinguished by the twist Phi:

  gl:  Phi(x) = x^{(p)}
  sl:  Phi(x) = lambda(x) * x^{(p)},
       lambda(x) = (det(x^{(p)}) / det(x)^p)^{-1/n},  p not dividing n
  so:  Phi(x) = x^{(p)} * Lambda(x),
       Lambda(x) = (((x^{(p)})^t q x^{(p)})^{-1} (x^t q x)^{(p)})^{1/2}

The -1/n-th and 1/2 powers are the unique roots congruent to 1 mod p; they
are computed here by Hensel-Newton iteration, which is exact mod p^N and
agrees with the usual binomial series by uniqueness.

The solver iterates u <- phi^{-1}((1 + p*alpha) * Phi(u)) exactly N times;
each step gains at least one digit, so the result satisfies the equation to
full working precision and is the unique solution congruent to u0 mod p.
"""

from dataclasses import dataclass, field

from .errors import AlgebraInvariantError, DomainError, ParameterError, PrecisionError
from .matrix import PMatrix, in_GLn, matrix_sqrt_one_mod_p

__all__ = [
    "KINDS",
    "SO_VARIANTS",
    "EquationSpec",
    "SolveReport",
    "build_q",
    "lambda_sl",
    "Lambda_so",
    "Phi",
    "Delta_of",
    "solve",
    "residual",
    "recover_alpha",
    "solve_scalar_closed_form",
    "solve_scalar_exp",
    "prime_integral_check",
    "frobenius_fixedness",
    "lang_map",
]

KINDS = ("gl", "sl", "so")
SO_VARIANTS = ("sp", "so_even", "so_odd")


def build_q(ctx, variant, n):
    """The bilinear-form matrix of an SO(q) variant.

    sp:      [[0, 1_r], [-1_r, 0]]        n = 2r
    so_even: [[0, 1_r], [1_r, 0]]         n = 2r
    so_odd:  [[1, 0, 0], [0, 0, 1_r], [0, 1_r, 0]]   n = 2r + 1
    """
    if variant not in SO_VARIANTS:
        raise ParameterError(f"unknown variant {variant!r}")
    if variant in ("sp", "so_even"):
        if n < 2 or n % 2:
            raise ParameterError(f"variant {variant!r} needs even n >= 2")
        r = n // 2
        rows = [[0] * n for _ in range(n)]
        for i in range(r):
            rows[i][r + i] = 1
            rows[r + i][i] = -1 if variant == "sp" else 1
    else:
        if n < 3 or n % 2 == 0:
            raise ParameterError("variant 'so_odd' needs odd n >= 3")
        r = (n - 1) // 2
        rows = [[0] * n for _ in range(n)]
        rows[0][0] = 1
        for i in range(r):
            rows[1 + i][1 + r + i] = 1
            rows[1 + r + i][1 + i] = 1
    return PMatrix.from_rows(ctx, rows)


@dataclass(frozen=True, eq=False)
class EquationSpec:
    """A delta-linear equation: the type tag, dimension, and twist alpha."""

    kind: str
    n: int
    alpha: PMatrix
    variant: str = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"kind must be one of {KINDS}")
        ctx = self.alpha.ctx
        if self.alpha.n != self.n:
            raise ParameterError("alpha dimension does not match n")
        if self.kind == "sl" and self.n % ctx.p == 0:
            raise ParameterError("p must not divide n for kind 'sl'")
        if self.kind == "so":
            if self.variant not in SO_VARIANTS:
                raise ParameterError(f"kind 'so' needs a variant from {SO_VARIANTS}")
            if self.variant in ("sp", "so_even") and self.n % 2:
                raise ParameterError(f"variant {self.variant!r} needs even n")
            if self.variant == "so_odd" and (self.n % 2 == 0 or self.n < 3):
                raise ParameterError("variant 'so_odd' needs odd n >= 3")
        elif self.variant is not None:
            raise ParameterError("variant only applies to kind 'so'")

    @property
    def ctx(self):
        return self.alpha.ctx

    def q_matrix(self):
        if self.kind != "so":
            return None
        key = ("q", self.variant, self.n)
        if key not in self.ctx._cache:
            self.ctx._cache[key] = build_q(self.ctx, self.variant, self.n)
        return self.ctx._cache[key]

    def epsilon(self):
        """1 + p*alpha."""
        return PMatrix.identity(self.ctx, self.n) + self.ctx.p * self.alpha


@dataclass(frozen=True, eq=False)
class SolveReport:
    solution: PMatrix
    iterations: int
    residual_valuation: object  # int or math.inf
    integral_values: tuple
    fixedness: int
    iterates: tuple = field(default=None, repr=False)


# -- the twists ------------------------------------------------------------------


def _nth_root_one_mod_p(base, n):
    """The unique y = 1 mod p with y^n = base, for base = 1 mod p and p not | n.

    Hensel-Newton: y <- y - (y^n - base) / (n y^{n-1}).
    """
    ctx = base.ctx
    one = ctx.one()
    if (base - one).valuation() < 1:
        raise DomainError("n-th root requires base = 1 mod p")
    K = base.known_prec
    y = one
    steps = max(1, (max(K, 2) - 1).bit_length()) + 1
    for _ in range(steps):
        err = y ** n - base
        y = y - err * (ctx.element(n) * y ** (n - 1)).invert()
    if not (y ** n).eq_at(base, K):
        raise AlgebraInvariantError("Newton n-th root failed to converge")
    return y.with_prec(K)


def lambda_sl(x):
    """lambda(x) = (det(x^{(p)}) / det(x)^p)^{-1/n}, the sl-type scalar twist.

    Characterized by lambda(x)^n * det(x^{(p)}) = det(x)^p and = 1 mod p.
    """
    ctx = x.ctx
    n = x.n
    if n % ctx.p == 0:
        raise DomainError("p must not divide n for kind 'sl'")
    d = x.det()
    if not d.is_unit():
        raise DomainError("x must be invertible")
    base = x.pow_p_entrywise().det() * (d ** ctx.p).invert()
    # lambda^n = base^{-1}
    return _nth_root_one_mod_p(base.invert(), n)


def Lambda_so(x, q):
    """Lambda(x) = (((x^{(p)})^t q x^{(p)})^{-1} (x^t q x)^{(p)})^{1/2}."""
    xp = x.pow_p_entrywise()
    A = xp.transpose() @ q @ xp
    C = (x.transpose() @ q @ x).pow_p_entrywise()
    return matrix_sqrt_one_mod_p(A.inverse() @ C)


def _phi_kind(kind, variant, x, q=None):
    if kind == "gl":
        return x.pow_p_entrywise()
    if kind == "sl":
        return lambda_sl(x) * x.pow_p_entrywise()
    if q is None:
        q = build_q(x.ctx, variant, x.n)
    return x.pow_p_entrywise() @ Lambda_so(x, q)


def Phi(spec, x):
    """The twist Phi(x) = x^{(p)} + p*Delta(x) of the given type."""
    return _phi_kind(spec.kind, spec.variant, x, spec.q_matrix())


def Delta_of(spec, x):
    """Delta(x) = (Phi(x) - x^{(p)}) / p, by exact digit-shift division."""
    return (Phi(spec, x) - x.pow_p_entrywise()).exact_div_p()


# -- solver -------------------------------------------------------------------------


def residual(spec, u):
    """phi(u) - (1 + p*alpha) * Phi(u); zero iff u solves the equation."""
    return u.frobenius_entrywise() - spec.epsilon() @ Phi(spec, u)


def solve(spec, u0, keep_iterates=False):
    """Fixed-point iteration u <- phi^{-1}(eps * Phi(u)), run exactly N times.

    Returns the unique solution congruent to u0 mod p, with residual and
    prime-integral diagnostics.
    """
    ctx = spec.ctx
    if not ctx.same(u0.ctx):
        raise DomainError("u0 belongs to a different ring")
    if u0.n != spec.n:
        raise DomainError("u0 dimension mismatch")
    if spec.alpha.known_prec < ctx.N:
        raise PrecisionError("alpha entries must be known to full precision N")
    if not in_GLn(u0):
        raise DomainError("u0 is singular mod p")

    eps = spec.epsilon()
    q = spec.q_matrix()
    u = u0
    trail = [u0] if keep_iterates else None
    for _ in range(ctx.N):
        u = (eps @ _phi_kind(spec.kind, spec.variant, u, q)).frobenius_inverse_entrywise()
        if keep_iterates:
            trail.append(u)

    res = residual(spec, u)
    rv = res.valuation()
    integrals = _integral_diagnostics(spec, u, q)
    return SolveReport(
        solution=u,
        iterations=ctx.N,
        residual_valuation=rv,
        integral_values=integrals,
        fixedness=_fixedness(u),
        iterates=tuple(trail) if keep_iterates else None,
    )


def _integral_diagnostics(spec, u, q=None):
    out = []
    if spec.kind == "sl":
        d = u.det()
        out.append(("det", d, d.delta()))
    elif spec.kind == "so":
        if q is None:
            q = spec.q_matrix()
        form = u.transpose() @ q @ u
        out.append(("xtqx", form, form.delta_entrywise()))
    return tuple(out)


def prime_integral_check(spec, u):
    """delta of each prime integral at u: [('det', d(det u))] for sl,
    [('xtqx', d(u^t q u))] for so, [] for gl."""
    if spec.kind == "sl":
        return [("det", u.det().delta())]
    if spec.kind == "so":
        return [("xtqx", (u.transpose() @ spec.q_matrix() @ u).delta_entrywise())]
    return []


def _fixedness(u):
    """Smallest nu with phi^nu(u) = u; divides m, so at most m."""
    m = u.ctx.m
    for nu in sorted(d for d in range(1, m + 1) if m % d == 0):
        if u.frobenius_entrywise(nu) == u:
            return nu
    return m


def frobenius_fixedness(u, nu):
    """Whether phi^nu fixes u at full precision."""
    if not 1 <= nu <= u.ctx.m:
        raise ParameterError("nu must satisfy 1 <= nu <= m")
    return u.frobenius_entrywise(nu) == u


def recover_alpha(u, kind, variant=None):
    """alpha = (phi(u) * Phi(u)^{-1} - 1) / p, the twist solved by u."""
    phi_u = u.frobenius_entrywise()
    P = _phi_kind(kind, variant, u)
    one = PMatrix.identity(u.ctx, u.n)
    return (phi_u @ P.inverse() - one).exact_div_p()


def lang_map(a):
    """a -> phi(a) (a^{(p)})^{-1}; its fiber over 1 + p*alpha is the gl-type
    solution set."""
    return a.frobenius_entrywise() @ a.pow_p_entrywise().inverse()


# -- scalar closed forms ------------------------------------------------------------


def solve_scalar_closed_form(zeta, epsilon, terms=None):
    """u = zeta * eps_{-1} * eps_{-2}^p * eps_{-3}^{p^2} * ... (truncated product).

    Solves phi(u) = eps * u^p with u = zeta mod p, for constant zeta and
    eps = 1 mod p.  Factor k contributes mod p^k, so N factors suffice.
    """
    ctx = zeta.ctx
    if not zeta.is_constant():
        raise DomainError("zeta must be a constant (delta zeta = 0)")
    if (epsilon - ctx.one()).valuation() < 1:
        raise DomainError("epsilon must be = 1 mod p")
    if terms is None:
        terms = ctx.N
    if terms < ctx.N:
        raise ParameterError("need at least N factors for full precision")
    m = ctx.m
    u = zeta
    pk = 1  # p^{k-1}
    for k in range(1, terms + 1):
        eps_k = epsilon.frobenius((-k) % m if m > 1 else 0)
        u = u * eps_k ** pk
        pk *= ctx.p
    return u


def solve_scalar_exp(zeta, beta):
    """u = zeta * exp(sum_{n>=1} p^n phi^{-n}(beta)); satisfies psi(u) = beta
    and phi(u) = exp_p(p*beta) * u^p."""
    from .ring import exp_p

    ctx = zeta.ctx
    if not zeta.is_constant():
        raise DomainError("zeta must be a constant (delta zeta = 0)")
    m = ctx.m
    acc = ctx.zero()
    pn = 1
    for n in range(1, ctx.N):
        pn *= ctx.p
        acc = acc + pn * beta.frobenius((-n) % m if m > 1 else 0)
    return zeta * exp_p(acc)
