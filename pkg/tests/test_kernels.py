"""Differential tests: the compiled and pure kernels must agree exactly."""

import pytest

import deltalin
from deltalin._kernel import PureKernel, make_kernel
from deltalin.errors import NotUnitError, SingularMatrixError
from deltalin.ring import make_context
from deltalin.sampling import Rng

compiled = pytest.mark.skipif(
    not deltalin.COMPILED_AVAILABLE, reason="compiled kernel not built"
)


@compiled
def test_kernel_selection_by_width(monkeypatch):
    # 13^16 < 2^63 <= 13^20: the first gets the compiled kernel, the second
    # falls back to pure
    monkeypatch.delenv("DELTA_LIN_PURE", raising=False)
    assert make_context(13, 2, 16).kernel.kind == "compiled"
    assert make_context(13, 2, 20).kernel.kind == "pure"
    assert make_context(13, 2, 16, force_pure=True).kernel.kind == "pure"


@compiled
def test_env_var_forces_pure(monkeypatch):
    monkeypatch.setenv("DELTA_LIN_PURE", "1")
    assert make_context(5, 1, 8).kernel.kind == "pure"


@compiled
def test_scalar_op_parity():
    fast = make_context(13, 2, 16)
    pure = make_context(13, 2, 16, force_pure=True)
    kf, kp = fast.kernel, pure.kernel
    assert kf.kind == "compiled" and kp.kind == "pure"
    rng = Rng(100)
    for _ in range(200):
        a = tuple(rng.below(kf.q) for _ in range(2))
        b = tuple(rng.below(kf.q) for _ in range(2))
        assert kf.s_mul(a, b) == kp.s_mul(a, b)
        assert kf.s_add(a, b) == kp.s_add(a, b)
        assert kf.s_sub(a, b) == kp.s_sub(a, b)
        assert kf.s_neg(a) == kp.s_neg(a)
        assert kf.s_frob(a, 1) == kp.s_frob(a, 1)
        assert kf.s_pow(a, 177) == kp.s_pow(a, 177)
        assert kf.s_scal_int(-7, a) == kp.s_scal_int(-7, a)
        assert kf.s_eq_mod(a, b, 4) == kp.s_eq_mod(a, b, 4)
        if kf.s_is_unit(a):
            assert kp.s_is_unit(a)
            assert kf.s_inv(a) == kp.s_inv(a)


@compiled
def test_non_unit_agreement():
    fast = make_context(7, 1, 10)
    pure = make_context(7, 1, 10, force_pure=True)
    for kernel in (fast.kernel, pure.kernel):
        with pytest.raises(NotUnitError):
            kernel.s_inv((7,))


@compiled
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 7])
def test_matrix_op_parity(n):
    fast = make_context(11, 2, 8)
    pure = make_context(11, 2, 8, force_pure=True)
    kf, kp = fast.kernel, pure.kernel
    rng = Rng(101 + n)
    for _ in range(15):
        flat = [rng.below(kf.q) for _ in range(n * n * 2)]
        flat2 = [rng.below(kf.q) for _ in range(n * n * 2)]
        Af, Ap = kf.m_new(flat, n), kp.m_new(flat, n)
        Bf, Bp = kf.m_new(flat2, n), kp.m_new(flat2, n)
        assert kf.m_export(kf.m_mul(Af, Bf)) == kp.m_export(kp.m_mul(Ap, Bp))
        assert kf.m_export(kf.m_add(Af, Bf)) == kp.m_export(kp.m_add(Ap, Bp))
        assert kf.m_export(kf.m_transpose(Af)) == kp.m_export(kp.m_transpose(Ap))
        assert kf.m_export(kf.m_powp(Af)) == kp.m_export(kp.m_powp(Ap))
        assert kf.m_export(kf.m_frob(Af, 1)) == kp.m_export(kp.m_frob(Ap, 1))
        try:
            df = kf.m_det(Af)
        except SingularMatrixError:
            with pytest.raises(SingularMatrixError):
                kp.m_det(Ap)
            continue
        assert df == kp.m_det(Ap)
        try:
            inv_f = kf.m_export(kf.m_inv(Af))
        except SingularMatrixError:
            with pytest.raises(SingularMatrixError):
                kp.m_inv(Ap)
            continue
        assert inv_f == kp.m_export(kp.m_inv(Ap))


@compiled
def test_full_solve_parity():
    from deltalin.equations import EquationSpec, solve

    fast = make_context(13, 2, 16)
    pure = make_context(13, 2, 16, force_pure=True)
    rf, rp = Rng(200), Rng(200)
    for kind, variant, n in (("gl", None, 2), ("sl", None, 3), ("so", "sp", 2)):
        if kind == "gl":
            a_f, a_p = rf.matrix(fast, n), rp.matrix(pure, n)
        elif kind == "sl":
            a_f, a_p = rf.sl_delta_alpha(fast, n), rp.sl_delta_alpha(pure, n)
        else:
            a_f, a_p = rf.so_delta_alpha(fast, n, variant), rp.so_delta_alpha(pure, n, variant)
        u0_f, u0_p = rf.gl(fast, n), rp.gl(pure, n)
        assert u0_f.flat == u0_p.flat
        s_f = solve(EquationSpec(kind, n, a_f, variant), u0_f).solution
        s_p = solve(EquationSpec(kind, n, a_p, variant), u0_p).solution
        assert s_f.flat == s_p.flat


def test_pure_kernel_handles_wide_precision():
    # beyond 63 bits everything still works exactly
    ctx = make_context(13, 1, 24)
    assert ctx.kernel.kind == "pure"
    a = ctx.element(13 ** 20 + 7)
    assert (a * a.invert()) == ctx.one()


def test_make_kernel_direct():
    k = make_kernel(5, 1, 6, (0,), force_pure=True)
    assert isinstance(k, PureKernel)
    assert k.s_add((2,), (3,)) == (5,)
