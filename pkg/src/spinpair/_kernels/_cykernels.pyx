# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; keep in lockstep with ``_pykernels.py``."""

from libc.math cimport cos, fabs, sin, sqrt

cdef double JACOBI_OFF_TOL = 1e-14
cdef int JACOBI_MAX_SWEEPS = 50


cdef inline double _two_term(double* c, int base, double t) noexcept nogil:
    cdef double v = c[base + 6]
    cdef double a1 = c[base]
    cdef double a2 = c[base + 3]
    if a1 != 0.0:
        v += a1 * sin(c[base + 1] * t + c[base + 2])
    if a2 != 0.0:
        v += a2 * sin(c[base + 4] * t + c[base + 5])
    return v


def rk4_block_profiles(object coeffs, double complex y1, double complex y2,
                       double t0, double t1, long n):
    """Advance a 2-amplitude block state from t0 to t1 in n RK4 steps.

    coeffs: 21 floats, three two-term drives (field, coupling, z-diagonal);
    the block is [[field + z/4, coupling], [coupling, -field + z/4]].
    """
    cdef double c[21]
    cdef int idx
    for idx in range(21):
        c[idx] = coeffs[idx]

    cdef double h = (t1 - t0) / n
    cdef long i
    cdef double t, tm, te, w, l, z4
    cdef double complex k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b, u1, u2
    cdef double complex I = 1j

    for i in range(n):
        t = t0 + i * h

        w = _two_term(c, 0, t)
        l = _two_term(c, 7, t)
        z4 = 0.25 * _two_term(c, 14, t)
        k1a = -I * ((w + z4) * y1 + l * y2)
        k1b = -I * (l * y1 + (z4 - w) * y2)

        tm = t + 0.5 * h
        w = _two_term(c, 0, tm)
        l = _two_term(c, 7, tm)
        z4 = 0.25 * _two_term(c, 14, tm)
        u1 = y1 + 0.5 * h * k1a
        u2 = y2 + 0.5 * h * k1b
        k2a = -I * ((w + z4) * u1 + l * u2)
        k2b = -I * (l * u1 + (z4 - w) * u2)

        u1 = y1 + 0.5 * h * k2a
        u2 = y2 + 0.5 * h * k2b
        k3a = -I * ((w + z4) * u1 + l * u2)
        k3b = -I * (l * u1 + (z4 - w) * u2)

        te = t + h
        w = _two_term(c, 0, te)
        l = _two_term(c, 7, te)
        z4 = 0.25 * _two_term(c, 14, te)
        u1 = y1 + h * k3a
        u2 = y2 + h * k3b
        k4a = -I * ((w + z4) * u1 + l * u2)
        k4b = -I * (l * u1 + (z4 - w) * u2)

        y1 = y1 + (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        y2 = y2 + (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
    return y1, y2


cdef inline void _full_deriv(double* c, double t,
                             double complex g0, double complex g1,
                             double complex g2, double complex g3,
                             double complex* out) noexcept nogil:
    cdef double wp = _two_term(c, 0, t)
    cdef double wm = _two_term(c, 7, t)
    cdef double lm = _two_term(c, 14, t)
    cdef double lp = _two_term(c, 21, t)
    cdef double z4 = 0.25 * _two_term(c, 28, t)
    cdef double complex I = 1j
    out[0] = -I * ((wp + z4) * g0 + lm * g1)
    out[1] = -I * (lm * g0 + (z4 - wp) * g1)
    out[2] = -I * ((wm - z4) * g2 + lp * g3)
    out[3] = -I * (lp * g2 + (-wm - z4) * g3)


def rk4_full_profiles(object coeffs, double complex f0, double complex f1,
                      double complex f2, double complex f3,
                      double t0, double t1, long n):
    """Advance the 4-amplitude state; coeffs: 35 floats, five two-term drives
    (omega_plus, omega_minus, lambda_m, lambda_p, lambda_z), uncoupled order.
    """
    cdef double c[35]
    cdef int idx
    for idx in range(35):
        c[idx] = coeffs[idx]

    cdef double h = (t1 - t0) / n
    cdef double hh, w6, t
    cdef long i
    cdef double complex k1[4]
    cdef double complex k2[4]
    cdef double complex k3[4]
    cdef double complex k4[4]

    for i in range(n):
        t = t0 + i * h
        _full_deriv(c, t, f0, f1, f2, f3, k1)
        hh = 0.5 * h
        _full_deriv(c, t + hh, f0 + hh * k1[0], f1 + hh * k1[1],
                    f2 + hh * k1[2], f3 + hh * k1[3], k2)
        _full_deriv(c, t + hh, f0 + hh * k2[0], f1 + hh * k2[1],
                    f2 + hh * k2[2], f3 + hh * k2[3], k3)
        _full_deriv(c, t + h, f0 + h * k3[0], f1 + h * k3[1],
                    f2 + h * k3[2], f3 + h * k3[3], k4)
        w6 = h / 6.0
        f0 = f0 + w6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        f1 = f1 + w6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        f2 = f2 + w6 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        f3 = f3 + w6 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])
    return f0, f1, f2, f3


cdef double _ic2_field(double mu, double beta, double phi, double kappa,
                       double cos2t0, double big_a, double t) except? -1e308:
    # Effective field mu*sin(beta*t+phi)/tan(2*theta(t)) on the principal
    # branch, evaluated cancellation-free.  big_a = 1 - cos2t0 exactly.
    cdef double half = 0.5 * beta * t
    cdef double q, p, one_minus, cth, one_plus, sgn, ff, s2
    if big_a == 0.0 and phi == 0.0:
        q = sin(half)
        p = cos(half)
        one_minus = (4.0 * kappa * mu / beta) * q * q
        cth = 1.0 - one_minus
        one_plus = 1.0 + cth
        if one_plus <= 0.0 or kappa * mu / beta < 0.0:
            raise ValueError("angle branch touched inside an integration segment")
        sgn = 1.0 if q >= 0.0 else -1.0
        return sgn * p * cth * sqrt(mu * beta / (kappa * one_plus))
    ff = (2.0 * mu / beta) * sin(half) * sin(half + phi)
    one_minus = big_a + 2.0 * kappa * ff
    cth = 1.0 - one_minus
    one_plus = 2.0 - one_minus
    s2 = one_minus * one_plus
    if s2 <= 0.0:
        raise ValueError("angle branch touched inside an integration segment")
    return mu * sin(beta * t + phi) * cth / sqrt(s2)


def rk4_block_ic2(object coeffs, double complex y1, double complex y2,
                  double t0, double t1, long n):
    """RK4 for the block driven by the rate-matched effective field.

    coeffs: 13 floats (mu, beta, phi, kappa, cos2theta0, 1-cos2theta0,
    then a two-term lambda_z drive).  Stage times are clamped a hair
    inside [t0, t1] so that one-sided limits at branch-touch segment
    endpoints are taken from the segment interior.
    """
    cdef double c[13]
    cdef int idx
    for idx in range(13):
        c[idx] = coeffs[idx]
    cdef double mu = c[0], beta = c[1], phi = c[2]
    cdef double kappa = c[3], cos2t0 = c[4], big_a = c[5]

    cdef double h = (t1 - t0) / n
    cdef double nudge = 1e-9
    if (t1 - t0) < 4.0 * nudge:
        nudge = 0.25 * (t1 - t0)
    cdef double lo = t0 + nudge
    cdef double hi = t1 - nudge

    cdef long i
    cdef double t, hh, te, w, l, z4
    cdef double complex k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b, u1, u2
    cdef double complex I = 1j
    cdef double complex g1, g2
    cdef int stage

    for i in range(n):
        t = t0 + i * h
        hh = 0.5 * h
        for stage in range(4):
            if stage == 0:
                te = t
                g1 = y1
                g2 = y2
            elif stage == 1:
                te = t + hh
                g1 = y1 + hh * k1a
                g2 = y2 + hh * k1b
            elif stage == 2:
                te = t + hh
                g1 = y1 + hh * k2a
                g2 = y2 + hh * k2b
            else:
                te = t + h
                g1 = y1 + h * k3a
                g2 = y2 + h * k3b
            if te < lo:
                te = lo
            elif te > hi:
                te = hi
            w = _ic2_field(mu, beta, phi, kappa, cos2t0, big_a, te)
            l = mu * sin(beta * te + phi)
            z4 = 0.25 * _two_term(c, 6, te)
            if stage == 0:
                k1a = -I * ((w + z4) * g1 + l * g2)
                k1b = -I * (l * g1 + (z4 - w) * g2)
            elif stage == 1:
                k2a = -I * ((w + z4) * g1 + l * g2)
                k2b = -I * (l * g1 + (z4 - w) * g2)
            elif stage == 2:
                k3a = -I * ((w + z4) * g1 + l * g2)
                k3b = -I * (l * g1 + (z4 - w) * g2)
            else:
                k4a = -I * ((w + z4) * g1 + l * g2)
                k4b = -I * (l * g1 + (z4 - w) * g2)
        y1 = y1 + (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        y2 = y2 + (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
    return y1, y2


def jacobi_eigh4(object a):
    """Eigen-decomposition of a 4x4 Hermitian matrix by cyclic Jacobi sweeps.

    a: sequence of 16 complex entries, row-major.  Returns
    (eigenvalues ascending as list of 4 floats, eigenvectors as a flat
    row-major list of 16 complex: column j is the eigenvector of
    eigenvalue j).  Raises RuntimeError if 50 sweeps do not push the
    off-diagonal Frobenius norm below 1e-14.
    """
    cdef double complex A[4][4]
    cdef double complex V[4][4]
    cdef int i, j, p, q, sweep
    for i in range(4):
        for j in range(4):
            A[i][j] = a[4 * i + j]
            V[i][j] = 1.0 + 0.0j if i == j else 0.0 + 0.0j

    cdef bint converged = False
    cdef double off2, r, app, aqq, tau, tt, cc, ss
    cdef double complex apq, ph, phb, aip, aiq, vip, viq, apj, aqj

    for sweep in range(JACOBI_MAX_SWEEPS):
        off2 = 0.0
        for p in range(4):
            for q in range(4):
                if p != q:
                    off2 += (A[p][q].real * A[p][q].real
                             + A[p][q].imag * A[p][q].imag)
        if sqrt(off2) < JACOBI_OFF_TOL:
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
                    tt = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    tt = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                cc = 1.0 / sqrt(1.0 + tt * tt)
                ss = tt * cc
                phb = ph.conjugate()
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
                    off2 += (A[p][q].real * A[p][q].real
                             + A[p][q].imag * A[p][q].imag)
        if sqrt(off2) >= JACOBI_OFF_TOL:
            raise RuntimeError("jacobi eigensolver hit the sweep limit")

    cdef list evals = [A[0][0].real, A[1][1].real, A[2][2].real, A[3][3].real]
    cdef list order = sorted(range(4), key=lambda k: evals[k])
    cdef list evals_sorted = [evals[order[0]], evals[order[1]],
                              evals[order[2]], evals[order[3]]]
    cdef list evecs = [0.0 + 0.0j] * 16
    cdef int jnew
    for jnew in range(4):
        for i in range(4):
            evecs[4 * i + jnew] = V[i][order[jnew]]
    return evals_sorted, evecs
