"""Pure-Python twins of the compiled kernels.

Same algorithms, same evaluation order, same floating-point semantics as
``_cykernels.pyx``; the compiled module is simply faster.  Keep the two
files in lockstep.

Drive coefficients are "two-term" tuples
``(a1, b1, p1, a2, b2, p2, off)`` encoding
``a1*sin(b1*t + p1) + a2*sin(b2*t + p2) + off``, which represents every
derived drive combination exactly.
"""

from __future__ import annotations

import math

_JACOBI_OFF_TOL = 1e-14
_JACOBI_MAX_SWEEPS = 50


def _two_term(c, base, t):
    v = c[base + 6]
    a1 = c[base]
    if a1 != 0.0:
        v += a1 * math.sin(c[base + 1] * t + c[base + 2])
    a2 = c[base + 3]
    if a2 != 0.0:
        v += a2 * math.sin(c[base + 4] * t + c[base + 5])
    return v


def rk4_block_profiles(c, y1, y2, t0, t1, n):
    """Advance a 2-amplitude block state from t0 to t1 in n RK4 steps.

    c: 21 floats, three two-term drives (field, coupling, z-diagonal);
    the block is [[field + z/4, coupling], [coupling, -field + z/4]].
    """
    h = (t1 - t0) / n
    for i in range(n):
        t = t0 + i * h

        w = _two_term(c, 0, t)
        l = _two_term(c, 7, t)
        z4 = 0.25 * _two_term(c, 14, t)
        k1a = -1j * ((w + z4) * y1 + l * y2)
        k1b = -1j * (l * y1 + (z4 - w) * y2)

        tm = t + 0.5 * h
        w = _two_term(c, 0, tm)
        l = _two_term(c, 7, tm)
        z4 = 0.25 * _two_term(c, 14, tm)
        u1 = y1 + 0.5 * h * k1a
        u2 = y2 + 0.5 * h * k1b
        k2a = -1j * ((w + z4) * u1 + l * u2)
        k2b = -1j * (l * u1 + (z4 - w) * u2)

        u1 = y1 + 0.5 * h * k2a
        u2 = y2 + 0.5 * h * k2b
        k3a = -1j * ((w + z4) * u1 + l * u2)
        k3b = -1j * (l * u1 + (z4 - w) * u2)

        te = t + h
        w = _two_term(c, 0, te)
        l = _two_term(c, 7, te)
        z4 = 0.25 * _two_term(c, 14, te)
        u1 = y1 + h * k3a
        u2 = y2 + h * k3b
        k4a = -1j * ((w + z4) * u1 + l * u2)
        k4b = -1j * (l * u1 + (z4 - w) * u2)

        y1 = y1 + (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        y2 = y2 + (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
    return y1, y2


def rk4_full_profiles(c, f0, f1, f2, f3, t0, t1, n):
    """Advance the 4-amplitude state; c: 35 floats, five two-term drives
    (omega_plus, omega_minus, lambda_m, lambda_p, lambda_z), uncoupled order.
    """
    h = (t1 - t0) / n

    def deriv(t, g0, g1, g2, g3):
        wp = _two_term(c, 0, t)
        wm = _two_term(c, 7, t)
        lm = _two_term(c, 14, t)
        lp = _two_term(c, 21, t)
        z4 = 0.25 * _two_term(c, 28, t)
        return (
            -1j * ((wp + z4) * g0 + lm * g1),
            -1j * (lm * g0 + (z4 - wp) * g1),
            -1j * ((wm - z4) * g2 + lp * g3),
            -1j * (lp * g2 + (-wm - z4) * g3),
        )

    for i in range(n):
        t = t0 + i * h
        k1 = deriv(t, f0, f1, f2, f3)
        hh = 0.5 * h
        k2 = deriv(t + hh, f0 + hh * k1[0], f1 + hh * k1[1], f2 + hh * k1[2], f3 + hh * k1[3])
        k3 = deriv(t + hh, f0 + hh * k2[0], f1 + hh * k2[1], f2 + hh * k2[2], f3 + hh * k2[3])
        k4 = deriv(t + h, f0 + h * k3[0], f1 + h * k3[1], f2 + h * k3[2], f3 + h * k3[3])
        w6 = h / 6.0
        f0 = f0 + w6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        f1 = f1 + w6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        f2 = f2 + w6 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        f3 = f3 + w6 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])
    return f0, f1, f2, f3


def _ic2_field(mu, beta, phi, kappa, cos2t0, big_a, t):
    # Effective field mu*sin(beta*t+phi)/tan(2*theta(t)) on the principal
    # branch, evaluated cancellation-free.  big_a = 1 - cos2t0 exactly.
    half = 0.5 * beta * t
    if big_a == 0.0 and phi == 0.0:
        q = math.sin(half)
        p = math.cos(half)
        one_minus = (4.0 * kappa * mu / beta) * q * q
        cth = 1.0 - one_minus
        one_plus = 1.0 + cth
        if one_plus <= 0.0 or kappa * mu / beta < 0.0:
            raise ValueError("angle branch touched inside an integration segment")
        sgn = 1.0 if q >= 0.0 else -1.0
        return sgn * p * cth * math.sqrt(mu * beta / (kappa * one_plus))
    ff = (2.0 * mu / beta) * math.sin(half) * math.sin(half + phi)
    one_minus = big_a + 2.0 * kappa * ff
    cth = 1.0 - one_minus
    one_plus = 2.0 - one_minus
    s2 = one_minus * one_plus
    if s2 <= 0.0:
        raise ValueError("angle branch touched inside an integration segment")
    return mu * math.sin(beta * t + phi) * cth / math.sqrt(s2)


def rk4_block_ic2(c, y1, y2, t0, t1, n):
    """RK4 for the block driven by the rate-matched effective field.

    c: 13 floats (mu, beta, phi, kappa, cos2theta0, 1-cos2theta0,
    then a two-term lambda_z drive).  Stage times are clamped a hair
    inside [t0, t1] so that one-sided limits at branch-touch segment
    endpoints are taken from the segment interior.
    """
    mu, beta, phi, kappa, cos2t0, big_a = c[0], c[1], c[2], c[3], c[4], c[5]
    h = (t1 - t0) / n
    nudge = 1e-9
    if (t1 - t0) < 4.0 * nudge:
        nudge = 0.25 * (t1 - t0)
    lo = t0 + nudge
    hi = t1 - nudge

    def deriv(t, g1, g2):
        te = t
        if te < lo:
            te = lo
        elif te > hi:
            te = hi
        w = _ic2_field(mu, beta, phi, kappa, cos2t0, big_a, te)
        l = mu * math.sin(beta * te + phi)
        z4 = 0.25 * _two_term(c, 6, te)
        return -1j * ((w + z4) * g1 + l * g2), -1j * (l * g1 + (z4 - w) * g2)

    for i in range(n):
        t = t0 + i * h
        k1a, k1b = deriv(t, y1, y2)
        hh = 0.5 * h
        k2a, k2b = deriv(t + hh, y1 + hh * k1a, y2 + hh * k1b)
        k3a, k3b = deriv(t + hh, y1 + hh * k2a, y2 + hh * k2b)
        k4a, k4b = deriv(t + h, y1 + h * k3a, y2 + h * k3b)
        y1 = y1 + (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        y2 = y2 + (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
    return y1, y2


def jacobi_eigh4(a):
    """Eigen-decomposition of a 4x4 Hermitian matrix by cyclic Jacobi sweeps.

    a: sequence of 16 complex entries, row-major.  Returns
    (eigenvalues ascending as list of 4 floats, eigenvectors as a flat
    row-major list of 16 complex: column j is the eigenvector of
    eigenvalue j).  Raises RuntimeError if 50 sweeps do not push the
    off-diagonal Frobenius norm below 1e-14.
    """
    A = [[complex(a[4 * i + j]) for j in range(4)] for i in range(4)]
    V = [[1.0 + 0.0j if i == j else 0.0 + 0.0j for j in range(4)] for i in range(4)]

    converged = False
    for _ in range(_JACOBI_MAX_SWEEPS):
        off2 = 0.0
        for p in range(4):
            for q in range(4):
                if p != q:
                    off2 += abs(A[p][q]) ** 2
        if math.sqrt(off2) < _JACOBI_OFF_TOL:
            converged = True
            break
        for p in range(3):
            for q in range(p + 1, 4):
                apq = A[p][q]
                r = abs(apq)
                if r == 0.0:
                    continue
                app = A[p][p].real
                aqq = A[q][q].real
                ph = apq / r
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    tt = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    tt = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                cc = 1.0 / math.sqrt(1.0 + tt * tt)
                ss = tt * cc
                phb = ph.conjugate()
                # plane unitary: U[p][p]=cc, U[p][q]=ss, U[q][p]=-ss*phb, U[q][q]=cc*phb
                for i in range(4):
                    aip = A[i][p]
                    aiq = A[i][q]
                    A[i][p] = cc * aip - ss * phb * aiq
                    A[i][q] = ss * aip + cc * phb * aiq
                    vip = V[i][p]
                    viq = V[i][q]
                    V[i][p] = cc * vip - ss * phb * viq
                    V[i][q] = ss * vip + cc * phb * viq
                for j in range(4):
                    apj = A[p][j]
                    aqj = A[q][j]
                    A[p][j] = cc * apj - ss * ph * aqj
                    A[q][j] = ss * apj + cc * ph * aqj
    if not converged:
        off2 = 0.0
        for p in range(4):
            for q in range(4):
                if p != q:
                    off2 += abs(A[p][q]) ** 2
        if math.sqrt(off2) >= _JACOBI_OFF_TOL:
            raise RuntimeError("jacobi eigensolver hit the sweep limit")

    evals = [A[i][i].real for i in range(4)]
    order = sorted(range(4), key=lambda i: evals[i])
    evals_sorted = [evals[i] for i in order]
    evecs = [0.0 + 0.0j] * 16
    for jnew, jold in enumerate(order):
        for i in range(4):
            evecs[4 * i + jnew] = V[i][jold]
    return evals_sorted, evecs
