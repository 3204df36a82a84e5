"""Pure-Python numerical kernels.

Reference fallback for the compiled ``_ckernels`` extension. Both modules
expose the same functions with the same signatures and must agree to
rounding; ``tests/test_kernels.py`` runs every check against both.

Kernels
-------
bessel_jy(nu, x)
    J, Y and their x-derivatives for real order nu >= 0 and x > 0
    (Steed's continued fractions for x >= 2, Temme's series below).
bessel_jy_array(nu, x)
    Same, looped over a float64 array.
heun_b_series(q, alpha, gamma, delta, epsilon, z)
    Maclaurin series of the bi-confluent Heun function, y(0) = 1.
ode2_march(kind, ..., z0, y0, yp0, targets)
    Taylor-series marching for z^s y'' + (g + d z + e z^2) y' + (a z - q) y = 0.
"""
import math

import numpy as np

EPS = 1.0e-16
FPMIN = 1.0e-300
MAXIT = 100000
XMIN = 2.0

# Taylor coefficients of 1/Gamma(z) about z = 0, c[k] multiplies z**k.
_RGAMMA = (
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
)


def _temme_gammas(mu):
    """gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu) for |mu| <= 1/2."""
    even = 0.0
    odd = 0.0
    mu2 = mu * mu
    # 1/Gamma(1+mu) = sum_k c[k+1] mu**k; split into even and odd powers
    p = 1.0
    for k in range(1, len(_RGAMMA), 2):
        even += _RGAMMA[k] * p
        if k + 1 < len(_RGAMMA):
            odd += _RGAMMA[k + 1] * p
        p *= mu2
    gampl = even + mu * odd
    gammi = even - mu * odd
    return -odd, even, gampl, gammi


def bessel_jy(nu, x):
    """Return (J_nu, Y_nu, J'_nu, Y'_nu) at x > 0 for nu >= 0."""
    if x <= 0.0 or nu < 0.0:
        raise ValueError("bessel_jy requires x > 0 and nu >= 0")
    if x < XMIN:
        nl = int(nu + 0.5)
    else:
        nl = max(0, int(nu - x + 1.5))
    xmu = nu - nl
    xmu2 = xmu * xmu
    xi = 1.0 / x
    xi2 = 2.0 * xi
    w = xi2 / math.pi

    # CF1: J'_nu / J_nu by modified Lentz
    isign = 1
    h = nu * xi
    if h < FPMIN:
        h = FPMIN
    b = xi2 * nu
    d = 0.0
    c = h
    for _ in range(MAXIT):
        b += xi2
        d = b - d
        if abs(d) < FPMIN:
            d = FPMIN
        c = b - 1.0 / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = c * d
        h = delta * h
        if d < 0.0:
            isign = -isign
        if abs(delta - 1.0) < EPS:
            break
    else:
        raise ArithmeticError("CF1 failed to converge; x too large")

    rjl = isign * FPMIN
    rjpl = h * rjl
    rjl1 = rjl
    rjp1 = rjpl
    fact = nu * xi
    for _ in range(nl):
        rjtemp = fact * rjl + rjpl
        fact -= xi
        rjpl = fact * rjtemp - rjl
        rjl = rjtemp
    if rjl == 0.0:
        rjl = EPS
    f = rjpl / rjl

    if x < XMIN:
        x2 = 0.5 * x
        pimu = math.pi * xmu
        fact = 1.0 if abs(pimu) < EPS else pimu / math.sin(pimu)
        d = -math.log(x2)
        e = xmu * d
        fact2 = 1.0 if abs(e) < EPS else math.sinh(e) / e
        gam1, gam2, gampl, gammi = _temme_gammas(xmu)
        ff = 2.0 / math.pi * fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
        e = math.exp(e)
        p = e / (gampl * math.pi)
        q = 1.0 / (e * math.pi * gammi)
        pimu2 = 0.5 * pimu
        fact3 = 1.0 if abs(pimu2) < EPS else math.sin(pimu2) / pimu2
        r = math.pi * pimu2 * fact3 * fact3
        c = 1.0
        d = -x2 * x2
        total = ff + r * q
        total1 = p
        for i in range(1, MAXIT):
            ff = (i * ff + p + q) / (i * i - xmu2)
            c *= d / i
            p /= i - xmu
            q /= i + xmu
            delta = c * (ff + r * q)
            total += delta
            del1 = c * p - i * delta
            total1 += del1
            if abs(delta) < (1.0 + abs(total)) * EPS:
                break
        else:
            raise ArithmeticError("Temme series failed to converge")
        rymu = -total
        ry1 = -total1 * xi2
        rymup = xmu * xi * rymu - ry1
        rjmu = w / (rymup - f * rymu)
    else:
        # CF2: p + iq by Steed's algorithm
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
        for i in range(2, MAXIT):
            a += 2 * (i - 1)
            bi += 2.0
            dr = a * dr + br
            di = a * di + bi
            if abs(dr) + abs(di) < FPMIN:
                dr = FPMIN
            fact = a / (cr * cr + ci * ci)
            cr = br + cr * fact
            ci = bi - ci * fact
            if abs(cr) + abs(ci) < FPMIN:
                cr = FPMIN
            den = dr * dr + di * di
            dr /= den
            di /= -den
            dlr = cr * dr - ci * di
            dli = cr * di + ci * dr
            temp = p * dlr - q * dli
            q = p * dli + q * dlr
            p = temp
            if abs(dlr - 1.0) + abs(dli) < EPS:
                break
        else:
            raise ArithmeticError("CF2 failed to converge")
        gam = (p - f) / q
        rjmu = math.sqrt(w / ((p - f) * gam + q))
        rjmu = math.copysign(rjmu, rjl)
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
    ry = rymu
    ryp = nu * xi * rymu - ry1
    return rj, ry, rjp, ryp


def bessel_jy_array(nu, x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty((4,) + x.shape)
    flat = x.ravel()
    res = out.reshape(4, -1)
    for i, xi in enumerate(flat):
        res[:, i] = bessel_jy(nu, float(xi))
    return out


def heun_b_series(q, alpha, gamma, delta, epsilon, z, tol=1e-16, max_terms=100000):
    """Sum the HeunB Maclaurin series; returns (y, y', y'', n_terms).

    Recurrence: (n+1)(n+gamma) c[n+1] = (q - delta n) c[n] - (epsilon (n-1) + alpha) c[n-1].
    Stops once two consecutive terms c[n] z**n drop below tol relative to y.
    """
    z = complex(z)
    c1 = q / gamma
    if z == 0:
        c2 = ((q - delta) * c1 - alpha) / (2.0 * (1.0 + gamma))
        return 1.0 + 0j, complex(c1), complex(2.0 * c2), 2
    c_prev = 1.0 + 0j
    c_cur = complex(c1)
    y = 1.0 + c_cur * z
    yp = c_cur
    ypp = 0j
    zn = z  # z**n with n = 1
    last = abs(c_cur * z)
    n = 1
    while True:
        c_next = ((q - delta * n) * c_cur - (epsilon * (n - 1) + alpha) * c_prev) / ((n + 1) * (n + gamma))
        # adds the z**(n+1) term
        ypp += (n + 1) * n * c_next * zn / z
        yp += (n + 1) * c_next * zn
        zn = zn * z
        term = c_next * zn
        y += term
        n += 1
        c_prev, c_cur = c_cur, c_next
        cur = abs(term)
        limit = tol * max(abs(y), 1e-300)
        if cur * n <= limit and last * n <= limit:
            break
        last = cur
        if n >= max_terms:
            raise ArithmeticError("HeunB series did not converge within max_terms")
    return y, yp, ypp, n


def _taylor_coeffs(A, B, C, y0, yp0, t, tol, max_terms):
    """Taylor step for A(t) y'' + B(t) y' + C(t) y = 0 about t = 0.

    A, B, C are coefficient triples of quadratics in t. Returns y(t), y'(t).
    """
    a0, a1, a2 = A
    b0, b1, b2 = B
    c0, c1, c2 = C
    # a[n] stored in a rolling window of the last four coefficients
    am2, am1, an, an1 = 0j, 0j, complex(y0), complex(yp0)
    y = an + an1 * t
    yp = an1
    tn = t  # t**(n+1)
    small = 0
    n = 0
    while True:
        num = (
            (a1 * (n + 1) * n + b0 * (n + 1)) * an1
            + (a2 * n * (n - 1) + b1 * n + c0) * an
            + (b2 * (n - 1) + c1) * am1
            + c2 * am2
        )
        an2 = -num / (a0 * (n + 2) * (n + 1))
        yp += (n + 2) * an2 * tn
        tn = tn * t
        term = an2 * tn
        y += term
        am2, am1, an, an1 = am1, an, an1, an2
        n += 1
        if abs(term) * (n + 2) <= tol * max(abs(y), abs(yp * t), 1e-300):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        if n >= max_terms:
            raise ArithmeticError("Taylor step did not converge")
    return y, yp


def _shifted(kind, q, alpha, gamma, delta, epsilon, z0):
    # A(z) = z (kind 1) or z**2 (kind 2), expanded about z0
    if kind == 1:
        A = (z0, 1.0, 0.0)
    else:
        A = (z0 * z0, 2.0 * z0, 1.0)
    B = (gamma + delta * z0 + epsilon * z0 * z0, delta + 2.0 * epsilon * z0, epsilon)
    C = (alpha * z0 - q, alpha, 0.0)
    return A, B, C


def ode2_march(kind, q, alpha, gamma, delta, epsilon, z0, y0, yp0, z1,
               frac=0.5, hmax=0.5, tol=1e-17, max_terms=2000, min_step=1e-12):
    """March (y, y') from z0 to z1 along the straight segment.

    kind = 1: z y'' + ..., kind = 2: z^2 y'' + ...; the only finite singular
    point is z = 0, so each step is limited to ``frac * |z|``.
    """
    z = complex(z0)
    z1 = complex(z1)
    y = complex(y0)
    yp = complex(yp0)
    steps = 0
    while z != z1:
        remaining = z1 - z
        dist = abs(remaining)
        h = min(dist, frac * abs(z), hmax)
        if h < min_step:
            raise FloatingPointError("step size underflow near the singular point z = 0")
        if h >= dist:
            t = remaining
            znext = z1
        else:
            t = remaining * (h / dist)
            znext = z + t
        A, B, C = _shifted(kind, q, alpha, gamma, delta, epsilon, z)
        y, yp = _taylor_coeffs(A, B, C, y, yp, t, tol, max_terms)
        z = znext
        steps += 1
    return y, yp, steps


def ode2_march_many(kind, q, alpha, gamma, delta, epsilon, anchor, y0, yp0, targets,
                    frac=0.5, hmax=0.5):
    """Evaluate (y, y') at real targets, marching outward from a real anchor.

    Targets are visited in sorted order on each side of the anchor so every
    point costs only the steps between it and its neighbour.
    """
    targets = np.asarray(targets, dtype=np.float64)
    flat = targets.ravel()
    ys = np.empty(flat.shape, dtype=np.complex128)
    yps = np.empty(flat.shape, dtype=np.complex128)
    order = np.argsort(flat, kind="stable")
    above = [i for i in order if flat[i] >= anchor]
    below = [i for i in order[::-1] if flat[i] < anchor]
    for chain in (above, below):
        z, y, yp = anchor, complex(y0), complex(yp0)
        for i in chain:
            y, yp, _ = ode2_march(kind, q, alpha, gamma, delta, epsilon, z, y, yp, float(flat[i]),
                                  frac=frac, hmax=hmax)
            z = float(flat[i])
            ys[i] = y
            yps[i] = yp
    return ys.reshape(targets.shape), yps.reshape(targets.shape)


def heun_b_series_array(q, alpha, gamma, delta, epsilon, z):
    z = np.asarray(z, dtype=np.complex128)
    flat = z.ravel()
    y = np.empty(flat.shape, dtype=np.complex128)
    yp = np.empty(flat.shape, dtype=np.complex128)
    for i, zi in enumerate(flat):
        y[i], yp[i], _, _ = heun_b_series(q, alpha, gamma, delta, epsilon, zi)
    return y.reshape(z.shape), yp.reshape(z.shape)


BACKEND = "python"
