#!/usr/bin/env python3
"""High-precision reference values for the regression tests.

Evaluates the closed-form quantities of the library (radiation pressure,
photon creation, conductivity bounds, exact velocity/acceleration
covariances) with mpmath at 60 significant digits, independently of the
Rust implementation. The printed values are frozen into the test suites;
re-run this script to regenerate them.

Usage: python3 scripts/reference_values.py
"""

from mpmath import mp, mpf, exp, log, sqrt, pi, quad, findroot

mp.dps = 60

# CODATA constants (SI)
SIGMA_SB = mpf("5.670374419e-8")
K_B = mpf("1.380649e-23")
C = mpf("2.99792458e8")
EPS0 = mpf("8.8541878128e-12")
ALPHA = 4 * SIGMA_SB / C


def log10(x):
    return log(x) / log(mpf(10))


def show(name, value, digits=30):
    print(f"{name:55s} {mp.nstr(value, digits)}")


# ---------------------------------------------------------------------------
# Thermal noise quantities (SI examples)
# ---------------------------------------------------------------------------

def blackbody_pressure(t):
    return ALPHA * t**4 / 3


def pressure_variance_single(t, v):
    return ALPHA * K_B * t**5 / (3 * v)


def pressure_diff_variance(t, v):
    return 2 * ALPHA * K_B * t**5 / (3 * v)


def relaxation_rate(r, lx, c=C):
    return 3 * (1 - r) * c / (2 * lx)


print("== thermal noise (SI) ==")
show("alpha", ALPHA)
show("blackbody_pressure(290 K)", blackbody_pressure(mpf(290)))
show("energy_density u(290 K)", ALPHA * mpf(290) ** 4)
show("pressure_variance_single(290 K, 1e-3 m^3)", pressure_variance_single(mpf(290), mpf("1e-3")))
show("pressure_diff_variance(290 K, 1e-3 m^3)", pressure_diff_variance(mpf(290), mpf("1e-3")))
show("relaxation_rate(R=0, lx=0.2)", relaxation_rate(mpf(0), mpf("0.2")))
show("relaxation_rate(R=0.9999655, lx=0.2)", relaxation_rate(mpf("0.9999655"), mpf("0.2")))

# ---------------------------------------------------------------------------
# Photon creation: single realization and ensemble forms
# ---------------------------------------------------------------------------


def photon_number_single(n, k, occupancy, x0, a0, a1, c):
    """Expected number in mode n from source mode k for one realization."""
    if n == k:
        return mpf(occupancy)
    root = sqrt(mpf(n) / k) * x0 * a1 / 6 - sqrt(mpf(k) / n) * x0 * a0 / 6
    return occupancy * (36 * n**2 / (c**4 * pi**4)) / (n - k) ** 6 * root**2


def ensemble_bracket(n, k, gamma, lam, t1):
    """Curly-bracket factor of the ensemble expectation (off-diagonal)."""
    n, k = mpf(n), mpf(k)
    first = n / k + k / n - 2 * exp(-lam * t1)
    if lam == gamma:
        second = (gamma * t1 / 2) * (1 - exp(-2 * gamma * t1)) * (n / k)
    else:
        second = (
            gamma**2
            / (gamma**2 - lam**2)
            * (n / k)
            * (1 - exp((lam - gamma) * t1) + exp(-2 * gamma * t1) - exp(-(gamma + lam) * t1))
        )
    return first + second


def ensemble_photon_number(n, k, occupancy, x0, s, sigma2, gamma, lam, t1, c):
    if n == k:
        return mpf(occupancy)
    amp = (n**2 / (c**4 * pi**4)) * x0**2 * s**2 * sigma2 * ensemble_bracket(n, k, gamma, lam, t1)
    return occupancy * amp / (n - k) ** 6


def total_creation_rate(x0, s, sigma2, gamma, lam, t1, c):
    """Closed-form total rate for the lowest mode pair."""
    if lam == gamma:
        bracket = gamma * t1 / 2 + mpf(5) / 4
    else:
        bracket = gamma**2 / (lam**2 - gamma**2) * (exp((lam - gamma) * t1) - 1) + mpf(5) / 4
    return (2 * x0**2 * s**2 * sigma2 / (t1 * c**4 * pi**4)) * bracket


def mode_creation_rate(k, x0, s, sigma2, gamma, lam, t1, c, n_max):
    total = mpf(0)
    for n in range(1, n_max + 1):
        if n == k:
            continue
        amp = (n**2 / (c**4 * pi**4)) * x0**2 * s**2 * sigma2 * ensemble_bracket(n, k, gamma, lam, t1)
        total += amp / (n - k) ** 6
    return total / t1


print()
print("== photon creation, natural units ==")
show("photon_number_single(n=2,k=1,occ=1,x0=1,a0=0,a1=6,c=1)", photon_number_single(2, 1, 1, mpf(1), mpf(0), mpf(6), mpf(1)))
show("  (= 288/pi^4)", 288 / pi**4)

# benchmark A: sigma2 derived from T=V=1 natural units -> 2/3
sig_derived = mpf(2) / 3
en_derived = ensemble_photon_number(2, 1, 1, mpf(1), mpf(1), sig_derived, mpf(1), mpf("0.5"), mpf(10), mpf(1))
show("ensemble_photon_number nk=1 benchmark sigma2=2/3", en_derived)
show("  log10", log10(en_derived))
rate_derived = total_creation_rate(mpf(1), mpf(1), sig_derived, mpf(1), mpf("0.5"), mpf(10), mpf(1))
show("total_creation_rate benchmark sigma2=2/3", rate_derived)
show("  log10", log10(rate_derived))

# benchmark B: sigma2 pinned to 1 (bundled nondimensional config)
sig_one = mpf(1)
en_one = ensemble_photon_number(2, 1, 1, mpf(1), mpf(1), sig_one, mpf(1), mpf("0.5"), mpf(10), mpf(1))
show("ensemble_photon_number benchmark sigma2=1", en_one)
show("  log10", log10(en_one))
rate_one = total_creation_rate(mpf(1), mpf(1), sig_one, mpf(1), mpf("0.5"), mpf(10), mpf(1))
show("total_creation_rate benchmark sigma2=1", rate_one)
show("  log10", log10(rate_one))
mode_one = mode_creation_rate(1, mpf(1), mpf(1), sig_one, mpf(1), mpf("0.5"), mpf(10), mpf(1), 64)
show("mode_creation_rate k=1 n_max=64 sigma2=1", mode_one)
show("  log10", log10(mode_one))
mode_two = mode_creation_rate(2, mpf(1), mpf(1), sig_one, mpf(1), mpf("0.5"), mpf(10), mpf(1), 64)
show("mode_creation_rate k=2 n_max=64 sigma2=1", mode_two)

# degenerate-limit continuity probe
en_limit = ensemble_photon_number(2, 1, 1, mpf(1), mpf(1), sig_one, mpf(1), mpf(1), mpf(10), mpf(1))
show("ensemble_photon_number lambda=gamma=1 (limit)", en_limit)
rate_limit = total_creation_rate(mpf(1), mpf(1), sig_one, mpf(1), mpf(1), mpf(10), mpf(1))
show("total_creation_rate lambda=gamma=1 (limit)", rate_limit)

# ---------------------------------------------------------------------------
# Conductivity bounds
# ---------------------------------------------------------------------------


def reflectivity(omega, sigma_c, eps0):
    r = 1 - 2 * sqrt(2 * omega * eps0 / sigma_c)
    return max(mpf(0), r)


def reflectivity_deficit(omega, sigma_c, eps0):
    """1 - R without cancellation; the solver needs this for sigma >> eps0*omega."""
    return min(mpf(1), 2 * sqrt(2 * omega * eps0 / sigma_c))


def bound_general(omega, eps0, f, t1, c, x0, s, sigma2, gamma, lam):
    if lam == gamma:
        bracket = gamma * t1 / 2 + mpf(5) / 4
    else:
        bracket = gamma**2 / (lam**2 - gamma**2) * (exp((lam - gamma) * t1) - 1) + mpf(5) / 4
    num = sqrt(8 * omega * eps0) * f * t1 * c**4 * pi**4
    den = 2 * x0**2 * s**2 * sigma2 * bracket
    return (num / den) ** 2


def bound_fast(omega, eps0, f, t1, c, x0, s, sigma2, gamma, lam):
    bracket = gamma**2 / lam**2 * exp(lam * t1) + mpf(5) / 4
    num = sqrt(8 * omega * eps0) * f * t1 * c**4 * pi**4
    den = 2 * x0**2 * s**2 * sigma2 * bracket
    return (num / den) ** 2


def bound_slow(omega, eps0, f, t1, c, x0, s, sigma2):
    num = sqrt(8 * omega * eps0) * f * t1 * c**4 * pi**4
    den = 2 * x0**2 * s**2 * sigma2
    return (num / den * mpf(4) / 9) ** 2


print()
print("== conductivity bounds, nondimensional benchmark (sigma2=1) ==")
ones = dict(omega=mpf(1), eps0=mpf(1), f=mpf(1), t1=mpf(10), c=mpf(1), x0=mpf(1), s=mpf(1), sigma2=mpf(1))
bg = bound_general(gamma=mpf(1), lam=mpf("0.5"), **ones)
show("bound_general", bg)
show("  log10", log10(bg))
bf = bound_fast(gamma=mpf(1), lam=mpf("0.5"), **ones)
show("bound_fast_relaxation", bf)
show("  log10", log10(bf))
bs = bound_slow(**ones)
show("bound_slow_relaxation", bs)
show("  log10", log10(bs))

print()
print("== conductivity bounds, room-temperature SI scenario ==")
# cavity 0.1 m cube, plate M = 0.01 kg, S = ly*lz = 0.01 m^2, gamma = 1e-3 1/s,
# T = 290 K, t1 = 3600 s, omega = 1e9 rad/s, x0 = lx/4 = 0.025 m, l = lx.
LX = mpf("0.1")
si = dict(
    omega=mpf("1e9"),
    eps0=EPS0,
    f=C / LX,
    t1=mpf(3600),
    c=C,
    x0=LX / 4,
    s=mpf(1),
    sigma2=pressure_diff_variance(mpf(290), LX**3),
)
show("sigma_P^2 (T=290 K, V=1e-3 m^3)", si["sigma2"])
bs_si = bound_slow(**si)
show("bound_slow log10", log10(bs_si))

show("reflectivity(omega=1e9, sigma=5.96e7)", reflectivity(mpf("1e9"), mpf("5.96e7"), EPS0))


def fixed_point(bound_fn, si_params, lx, gamma):
    """Self-consistent sigma* with lambda = relaxation_rate(R(sigma*))."""

    def g(x):
        sigma = mpf(10) ** x
        deficit = reflectivity_deficit(si_params["omega"], sigma, si_params["eps0"])
        lam = 3 * deficit * si_params["c"] / (2 * lx)
        b = bound_fn(gamma=gamma, lam=lam, **si_params)
        return log10(b) - x

    # scan from the top of the bracket for the outermost sign change
    lo, hi = mpf(-10), mpf(300)
    n = 124
    xs = [lo + (hi - lo) * i / n for i in range(n + 1)]
    upper = None
    for i in range(n, 0, -1):
        if g(xs[i - 1]) > 0 >= g(xs[i]):
            upper = (xs[i - 1], xs[i])
            break
    a, b = upper
    for _ in range(220):
        m = (a + b) / 2
        if g(m) > 0:
            a = m
        else:
            b = m
    return (a + b) / 2


x_fast = fixed_point(bound_fast, si, LX, mpf("1e-3"))
show("self-consistent fast bound log10 sigma*", x_fast)
sigma_star = mpf(10) ** x_fast
deficit_star = reflectivity_deficit(si["omega"], sigma_star, EPS0)
lam_star = 3 * deficit_star * C / (2 * LX)
show("  lambda at sigma*", lam_star)
show("  bound_fast(lambda*) log10", log10(bound_fast(gamma=mpf("1e-3"), lam=lam_star, **si)))

x_gen = fixed_point(bound_general, si, LX, mpf("1e-3"))
show("self-consistent general bound log10 sigma*", x_gen)

# covariance quadrature below only needs ~20 digits; nested tanh-sinh at
# dps=60 is needlessly slow
mp.dps = 25

# ---------------------------------------------------------------------------
# Exact velocity / acceleration covariances (stationary-kernel model)
# ---------------------------------------------------------------------------


def velocity_covariance(t, tp, gamma, lam, s, sigma2, v0):
    """<v(t) v(t')> for the exponentially correlated drive, by quadrature."""

    def inner(xi):
        return quad(lambda eta: exp(gamma * eta - lam * abs(xi - eta)), [0, min(xi, tp), tp])

    dbl = quad(lambda xi: exp(gamma * xi) * inner(xi), [0, min(t, tp), t])
    return v0**2 * exp(-gamma * (t + tp)) + s**2 * sigma2 * exp(-gamma * (t + tp)) * dbl


def velocity_pressure_cov(t, tp, gamma, lam, s, sigma2):
    """<v(t) dP(t')>"""
    return s * sigma2 * exp(-gamma * t) * quad(lambda xi: exp(gamma * xi - lam * abs(xi - tp)), [0, min(t, tp), t])


def acceleration_covariance(t, tp, gamma, lam, s, sigma2, v0):
    cvv = velocity_covariance(t, tp, gamma, lam, s, sigma2, v0)
    cvp = velocity_pressure_cov(t, tp, gamma, lam, s, sigma2)
    cpv = velocity_pressure_cov(tp, t, gamma, lam, s, sigma2)
    return gamma**2 * cvv - gamma * s * (cvp + cpv) + s**2 * sigma2 * exp(-lam * abs(t - tp))


print()
print("== exact covariances, nondimensional (gamma=1, s=1, sigma2=1, v0=0) ==")
for lam in [mpf("0.25"), mpf("0.5"), mpf(2), mpf(4)]:
    for t in [mpf(1), mpf(5), mpf(10)]:
        cv = velocity_covariance(t, t, mpf(1), lam, mpf(1), mpf(1), mpf(0))
        ca = acceleration_covariance(t, t, mpf(1), lam, mpf(1), mpf(1), mpf(0))
        print(f"lambda={float(lam):4g} t={float(t):3g}  Cvv={mp.nstr(cv, 22)}  Caa={mp.nstr(ca, 22)}")
    cv_off = velocity_covariance(mpf(5), mpf(10), mpf(1), lam, mpf(1), mpf(1), mpf(0))
    ca_off = acceleration_covariance(mpf(5), mpf(10), mpf(1), lam, mpf(1), mpf(1), mpf(0))
    print(f"lambda={float(lam):4g} t=5 t'=10  Cvv={mp.nstr(cv_off, 22)}  Caa={mp.nstr(ca_off, 22)}")

print()
print("== off-diagonal with initial velocity (v0=2), gamma=1, lambda=0.5 ==")
cv = velocity_covariance(mpf(2), mpf(3), mpf(1), mpf("0.5"), mpf(1), mpf(1), mpf(2))
show("Cvv(2,3)", cv)
ca = acceleration_covariance(mpf(2), mpf(3), mpf(1), mpf("0.5"), mpf(1), mpf(1), mpf(2))
show("Caa(2,3)", ca)
