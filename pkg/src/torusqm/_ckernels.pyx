# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels (same API as ``_pykernels``)."""
from libc.math cimport fabs, sqrt, log, exp, sin, sinh, cosh, copysign, M_PI
import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double EPS = 1.0e-16
cdef double FPMIN = 1.0e-300
cdef int MAXIT = 100000
cdef double XMIN = 2.0

cdef double[29] RGAMMA = [
    0.0,
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
    1.4123806553180317816e-18,
]

ctypedef double complex cplx


cdef inline double cabs_(cplx z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef int _jy(double nu, double x, double* out) nogil:
    """Fill out[0:4] with J, Y, J', Y'. Returns 0 on success."""
    cdef int nl, i, isign, k
    cdef double xmu, xmu2, xi, xi2, w, h, b, d, c, delta
    cdef double rjl, rjpl, rjl1, rjp1, fact, rjtemp, f
    cdef double x2, pimu, e, fact2, gam1, gam2, gampl, gammi, ff, p, q
    cdef double pimu2, fact3, r, total, total1, del1, rymu, ry1, rymup, rjmu
    cdef double a, br, bi, cr, ci, den, dr, di, dlr, dli, temp, gam
    cdef double even, odd, pw, rj, rjp, rytemp
    cdef bint ok

    if x <= 0.0 or nu < 0.0:
        return -1
    if x < XMIN:
        nl = <int>(nu + 0.5)
    else:
        nl = <int>(nu - x + 1.5)
        if nl < 0:
            nl = 0
    xmu = nu - nl
    xmu2 = xmu * xmu
    xi = 1.0 / x
    xi2 = 2.0 * xi
    w = xi2 / M_PI

    isign = 1
    h = nu * xi
    if h < FPMIN:
        h = FPMIN
    b = xi2 * nu
    d = 0.0
    c = h
    ok = False
    for i in range(MAXIT):
        b += xi2
        d = b - d
        if fabs(d) < FPMIN:
            d = FPMIN
        c = b - 1.0 / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = c * d
        h = delta * h
        if d < 0.0:
            isign = -isign
        if fabs(delta - 1.0) < EPS:
            ok = True
            break
    if not ok:
        return -2

    rjl = isign * FPMIN
    rjpl = h * rjl
    rjl1 = rjl
    rjp1 = rjpl
    fact = nu * xi
    for i in range(nl):
        rjtemp = fact * rjl + rjpl
        fact -= xi
        rjpl = fact * rjtemp - rjl
        rjl = rjtemp
    if rjl == 0.0:
        rjl = EPS
    f = rjpl / rjl

    if x < XMIN:
        x2 = 0.5 * x
        pimu = M_PI * xmu
        fact = 1.0 if fabs(pimu) < EPS else pimu / sin(pimu)
        d = -log(x2)
        e = xmu * d
        fact2 = 1.0 if fabs(e) < EPS else sinh(e) / e
        even = 0.0
        odd = 0.0
        pw = 1.0
        k = 1
        while k < 29:
            even += RGAMMA[k] * pw
            if k + 1 < 29:
                odd += RGAMMA[k + 1] * pw
            pw *= xmu2
            k += 2
        gam1 = -odd
        gam2 = even
        gampl = even + xmu * odd
        gammi = even - xmu * odd
        ff = 2.0 / M_PI * fact * (gam1 * cosh(e) + gam2 * fact2 * d)
        e = exp(e)
        p = e / (gampl * M_PI)
        q = 1.0 / (e * M_PI * gammi)
        pimu2 = 0.5 * pimu
        fact3 = 1.0 if fabs(pimu2) < EPS else sin(pimu2) / pimu2
        r = M_PI * pimu2 * fact3 * fact3
        c = 1.0
        d = -x2 * x2
        total = ff + r * q
        total1 = p
        ok = False
        for i in range(1, MAXIT):
            ff = (i * ff + p + q) / (i * <double>i - xmu2)
            c *= d / i
            p /= i - xmu
            q /= i + xmu
            delta = c * (ff + r * q)
            total += delta
            del1 = c * p - i * delta
            total1 += del1
            if fabs(delta) < (1.0 + fabs(total)) * EPS:
                ok = True
                break
        if not ok:
            return -3
        rymu = -total
        ry1 = -total1 * xi2
        rymup = xmu * xi * rymu - ry1
        rjmu = w / (rymup - f * rymu)
    else:
        a = 0.25 - xmu2
        p = -0.5 * xi
        q = 1.0
        br = 2.0 * x
        bi = 2.0
        fact = a * xi / (p * p + q * q)
        cr = br + q * fact
        ci = bi + p * fact
        den = br * br + bi * bi
        dr = br / den
        di = -bi / den
        dlr = cr * dr - ci * di
        dli = cr * di + ci * dr
        temp = p * dlr - q * dli
        q = p * dli + q * dlr
        p = temp
        ok = False
        for i in range(2, MAXIT):
            a += 2 * (i - 1)
            bi += 2.0
            dr = a * dr + br
            di = a * di + bi
            if fabs(dr) + fabs(di) < FPMIN:
                dr = FPMIN
            fact = a / (cr * cr + ci * ci)
            cr = br + cr * fact
            ci = bi - ci * fact
            if fabs(cr) + fabs(ci) < FPMIN:
                cr = FPMIN
            den = dr * dr + di * di
            dr /= den
            di /= -den
            dlr = cr * dr - ci * di
            dli = cr * di + ci * dr
            temp = p * dlr - q * dli
            q = p * dli + q * dlr
            p = temp
            if fabs(dlr - 1.0) + fabs(dli) < EPS:
                ok = True
                break
        if not ok:
            return -4
        gam = (p - f) / q
        rjmu = sqrt(w / ((p - f) * gam + q))
        rjmu = copysign(rjmu, rjl)
        rymu = rjmu * gam
        rymup = rymu * (p + q / gam)
        ry1 = xmu * xi * rymu - rymup

    fact = rjmu / rjl
    rj = rjl1 * fact
    rjp = rjp1 * fact
    for i in range(1, nl + 1):
        rytemp = (xmu + i) * xi2 * ry1 - rymu
        rymu = ry1
        ry1 = rytemp
    out[0] = rj
    out[1] = rymu
    out[2] = rjp
    out[3] = nu * xi * rymu - ry1
    return 0


cdef _raise_jy(int code):
    if code == -1:
        raise ValueError("bessel_jy requires x > 0 and nu >= 0")
    if code == -2:
        raise ArithmeticError("CF1 failed to converge; x too large")
    if code == -3:
        raise ArithmeticError("Temme series failed to converge")
    raise ArithmeticError("CF2 failed to converge")


def bessel_jy(double nu, double x):
    """Return (J_nu, Y_nu, J'_nu, Y'_nu) at x > 0 for nu >= 0."""
    cdef double out[4]
    cdef int code = _jy(nu, x, out)
    if code != 0:
        _raise_jy(code)
    return out[0], out[1], out[2], out[3]


def bessel_jy_array(double nu, x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] flat = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t n = flat.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=2] res = np.empty((4, n))
    cdef double out[4]
    cdef int code = 0
    with nogil:
        for i in range(n):
            code = _jy(nu, flat[i], out)
            if code != 0:
                break
            res[0, i] = out[0]
            res[1, i] = out[1]
            res[2, i] = out[2]
            res[3, i] = out[3]
    if code != 0:
        _raise_jy(code)
    return res.reshape((4,) + np.shape(x))


cdef int _heun_b(cplx q, cplx alpha, cplx gamma, cplx delta, cplx epsilon, cplx z,
                 double tol, int max_terms, cplx* out, int* nterms) nogil:
    cdef cplx c1 = q / gamma, c2, c_prev, c_cur, c_next, y, yp, ypp, zn, term
    cdef double last, cur, limit, ay
    cdef int n
    if z == 0:
        c2 = ((q - delta) * c1 - alpha) / (2.0 * (1.0 + gamma))
        out[0] = 1.0
        out[1] = c1
        out[2] = 2.0 * c2
        nterms[0] = 2
        return 0
    c_prev = 1.0
    c_cur = c1
    y = 1.0 + c_cur * z
    yp = c_cur
    ypp = 0
    zn = z
    last = cabs_(c_cur * z)
    n = 1
    while True:
        c_next = ((q - delta * n) * c_cur - (epsilon * (n - 1) + alpha) * c_prev) / ((n + 1) * (n + gamma))
        ypp += (n + 1) * n * c_next * zn / z
        yp += (n + 1) * c_next * zn
        zn = zn * z
        term = c_next * zn
        y += term
        n += 1
        c_prev = c_cur
        c_cur = c_next
        cur = cabs_(term)
        ay = cabs_(y)
        limit = tol * (ay if ay > 1e-300 else 1e-300)
        if cur * n <= limit and last * n <= limit:
            break
        last = cur
        if n >= max_terms:
            return -1
    out[0] = y
    out[1] = yp
    out[2] = ypp
    nterms[0] = n
    return 0


def heun_b_series(q, alpha, gamma, delta, epsilon, z, double tol=1e-16, int max_terms=100000):
    """Sum the HeunB Maclaurin series; returns (y, y', y'', n_terms)."""
    cdef cplx out[3]
    cdef int n = 0
    cdef int code = _heun_b(q, alpha, gamma, delta, epsilon, z, tol, max_terms, out, &n)
    if code != 0:
        raise ArithmeticError("HeunB series did not converge within max_terms")
    return out[0], out[1], out[2], n


def heun_b_series_array(q, alpha, gamma, delta, epsilon, z):
    zarr = np.asarray(z, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] flat = np.ascontiguousarray(zarr).ravel()
    cdef Py_ssize_t n = flat.shape[0], i
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] y = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] yp = np.empty(n, dtype=np.complex128)
    cdef cplx cq = q, ca = alpha, cg = gamma, cd = delta, ce = epsilon
    cdef cplx out[3]
    cdef int nt = 0, code = 0
    with nogil:
        for i in range(n):
            code = _heun_b(cq, ca, cg, cd, ce, flat[i], 1e-16, 100000, out, &nt)
            if code != 0:
                break
            y[i] = out[0]
            yp[i] = out[1]
    if code != 0:
        raise ArithmeticError("HeunB series did not converge within max_terms")
    return y.reshape(zarr.shape), yp.reshape(zarr.shape)


cdef int _taylor(cplx* A, cplx* B, cplx* C, cplx y0, cplx yp0, cplx t,
                 double tol, int max_terms, cplx* y_out, cplx* yp_out) nogil:
    cdef cplx am2 = 0, am1 = 0, an = y0, an1 = yp0, an2, num, y, yp, tn, term
    cdef double scale, s2
    cdef int n = 0, small = 0
    y = an + an1 * t
    yp = an1
    tn = t
    while True:
        num = ((A[1] * (n + 1) * n + B[0] * (n + 1)) * an1
               + (A[2] * n * (n - 1) + B[1] * n + C[0]) * an
               + (B[2] * (n - 1) + C[1]) * am1
               + C[2] * am2)
        an2 = -num / (A[0] * (n + 2) * (n + 1))
        yp += (n + 2) * an2 * tn
        tn = tn * t
        term = an2 * tn
        y += term
        am2 = am1
        am1 = an
        an = an1
        an1 = an2
        n += 1
        scale = cabs_(y)
        s2 = cabs_(yp * t)
        if s2 > scale:
            scale = s2
        if scale < 1e-300:
            scale = 1e-300
        if cabs_(term) * (n + 2) <= tol * scale:
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        if n >= max_terms:
            return -1
    y_out[0] = y
    yp_out[0] = yp
    return 0


cdef int _march(int kind, cplx q, cplx alpha, cplx gamma, cplx delta, cplx epsilon,
                cplx z, cplx z1, cplx* y, cplx* yp, double frac, double hmax,
                double tol, int max_terms, double min_step, int* steps) nogil:
    cdef cplx A[3]
    cdef cplx B[3]
    cdef cplx C[3]
    cdef cplx remaining, t, znext
    cdef double dist, h
    cdef int code
    steps[0] = 0
    while z != z1:
        remaining = z1 - z
        dist = cabs_(remaining)
        h = frac * cabs_(z)
        if dist < h:
            h = dist
        if hmax < h:
            h = hmax
        if h < min_step:
            return -2
        if h >= dist:
            t = remaining
            znext = z1
        else:
            t = remaining * (h / dist)
            znext = z + t
        if kind == 1:
            A[0] = z
            A[1] = 1.0
            A[2] = 0.0
        else:
            A[0] = z * z
            A[1] = 2.0 * z
            A[2] = 1.0
        B[0] = gamma + delta * z + epsilon * z * z
        B[1] = delta + 2.0 * epsilon * z
        B[2] = epsilon
        C[0] = alpha * z - q
        C[1] = alpha
        C[2] = 0.0
        code = _taylor(A, B, C, y[0], yp[0], t, tol, max_terms, y, yp)
        if code != 0:
            return code
        z = znext
        steps[0] += 1
    return 0


cdef _raise_march(int code):
    if code == -2:
        raise FloatingPointError("step size underflow near the singular point z = 0")
    raise ArithmeticError("Taylor step did not converge")


def ode2_march(int kind, q, alpha, gamma, delta, epsilon, z0, y0, yp0, z1,
               double frac=0.5, double hmax=0.5, double tol=1e-17, int max_terms=2000,
               double min_step=1e-12):
    """March (y, y') from z0 to z1 along the straight segment."""
    cdef cplx y = y0, yp = yp0
    cdef int steps = 0
    cdef int code = _march(kind, q, alpha, gamma, delta, epsilon, z0, z1, &y, &yp,
                           frac, hmax, tol, max_terms, min_step, &steps)
    if code != 0:
        _raise_march(code)
    return y, yp, steps


def ode2_march_many(int kind, q, alpha, gamma, delta, epsilon, double anchor, y0, yp0, targets,
                    double frac=0.5, double hmax=0.5):
    """Evaluate (y, y') at real targets, marching outward from a real anchor."""
    tarr = np.asarray(targets, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] flat = np.ascontiguousarray(tarr).ravel()
    cdef cnp.ndarray[cnp.int64_t, ndim=1] order = np.argsort(flat, kind="stable").astype(np.int64)
    cdef Py_ssize_t n = flat.shape[0], j, idx
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] ys = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] yps = np.empty(n, dtype=np.complex128)
    cdef cplx cq = q, ca = alpha, cg = gamma, cd = delta, ce = epsilon
    cdef cplx y, yp, z
    cdef cplx cy0 = y0, cyp0 = yp0
    cdef int steps = 0, code = 0
    with nogil:
        z = anchor
        y = cy0
        yp = cyp0
        for j in range(n):
            idx = order[j]
            if flat[idx] < anchor:
                continue
            code = _march(kind, cq, ca, cg, cd, ce, z, flat[idx], &y, &yp,
                          frac, hmax, 1e-17, 2000, 1e-12, &steps)
            if code != 0:
                break
            z = flat[idx]
            ys[idx] = y
            yps[idx] = yp
        if code == 0:
            z = anchor
            y = cy0
            yp = cyp0
            j = n - 1
            while j >= 0:
                idx = order[j]
                j -= 1
                if flat[idx] >= anchor:
                    continue
                code = _march(kind, cq, ca, cg, cd, ce, z, flat[idx], &y, &yp,
                              frac, hmax, 1e-17, 2000, 1e-12, &steps)
                if code != 0:
                    break
                z = flat[idx]
                ys[idx] = y
                yps[idx] = yp
    if code != 0:
        _raise_march(code)
    return ys.reshape(tarr.shape), yps.reshape(tarr.shape)


BACKEND = "cython"
