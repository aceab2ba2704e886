"""Regenerates the fixture CSVs under tests/data and the frozen reference
values in tests/oracle_values.hpp.

Reference values come from statsmodels, scipy, scikit-learn and arch, so the
C++ code is checked against implementations it shares nothing with. The
C++ tests only read the frozen outputs; rerun this script by hand after
changing a fixture.
"""

import math
import pathlib

import numpy as np
import scipy.optimize as opt
import scipy.special as sp
import scipy.stats as st
from arch.unitroot import PhillipsPerron
from sklearn.mixture import GaussianMixture
from statsmodels.regression.linear_model import OLS
from statsmodels.tsa.api import VAR
from statsmodels.tsa.stattools import acf, adfuller, kpss

HERE = pathlib.Path(__file__).resolve().parent
DATA = HERE.parent / "data"
HEADER = HERE.parent / "oracle_values.hpp"

rng = np.random.default_rng(20240611)
values = {}


def months(n, year=1990):
    return [f"{year + i // 12:04d}-{i % 12 + 1:02d}" for i in range(n)]


def write_csv(name, columns):
    labels = list(columns)
    n = len(columns[labels[0]])
    lines = ["date," + ",".join(labels)]
    for i, d in enumerate(months(n)):
        lines.append(d + "," + ",".join(repr(float(columns[c][i])) for c in labels))
    (DATA / name).write_text("\n".join(lines) + "\n")


def put(name, v):
    values[name] = float(v)


def put_matrix(name, m):
    m = np.atleast_2d(np.asarray(m, dtype=float))
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            put(f"{name}_{i}_{j}", m[i, j])


# ---------------------------------------------------------------- fixture.csv
n = 240
white = 0.8 + 4.0 * rng.standard_t(5, n)
rw = np.cumsum(rng.normal(0.0, 1.0, n))
ar = np.zeros(n)
for t in range(1, n):
    ar[t] = 0.6 * ar[t - 1] + rng.normal()
mkt = rng.normal(0.9, 4.3, n)
asset = 0.2 + 0.7 * mkt + 0.3 * np.r_[0.0, mkt[:-1]] + rng.normal(0.0, 2.0, n)

A1 = np.array([[0.5, 0.1, 0.0], [0.2, 0.3, 0.1], [0.0, -0.2, 0.4]])
A2 = np.array([[-0.2, 0.0, 0.1], [0.0, 0.1, 0.0], [0.1, 0.0, -0.1]])
c = np.array([0.3, 0.1, -0.2])
L = np.linalg.cholesky(np.array([[1.0, 0.3, 0.2], [0.3, 2.0, 0.5], [0.2, 0.5, 1.5]]))
y = np.zeros((n + 100, 3))
for t in range(2, n + 100):
    y[t] = c + A1 @ y[t - 1] + A2 @ y[t - 2] + L @ rng.normal(size=3)
y = y[100:]

write_csv("fixture.csv", {"white": white, "rw": rw, "ar": ar, "mkt": mkt, "asset": asset,
                          "v1": y[:, 0], "v2": y[:, 1], "v3": y[:, 2]})

# Descriptive statistics (n-denominator shape moments).
put("white_mean", white.mean())
put("white_sd", white.std(ddof=1))
put("white_skewness", st.skew(white))
put("white_excess_kurtosis", st.kurtosis(white))
put("white_jarque_bera", st.jarque_bera(white).statistic)
put("white_autocorr1", acf(white, nlags=1, adjusted=False, fft=False)[1])
for k, v in enumerate(acf(ar, nlags=5, adjusted=False, fft=False)):
    put(f"ar_acf_{k}", v)
put("asset_ols_beta", np.cov(asset, mkt, ddof=1)[0, 1] / mkt.var(ddof=1))

# Scholes-Williams on the common window t = 2..n-1 (1-based).
s_, m_ = asset[1:-1], mkt[1:-1]
lag_m, lead_m = mkt[:-2], mkt[2:]


def slope(a, b):
    return OLS(a, np.column_stack([np.ones_like(b), b])).fit().params[1]


b_lag, b_con, b_lead = slope(s_, lag_m), slope(s_, m_), slope(s_, lead_m)
rho = np.corrcoef(m_, lag_m)[0, 1]
put("sw_lag", b_lag)
put("sw_contemporaneous", b_con)
put("sw_lead", b_lead)
put("sw_rho", rho)
put("sw_beta", (b_lag + b_con + b_lead) / (1 + 2 * rho))

# Unit-root tests.
bw = int(math.floor(4 * (n / 100) ** (2 / 9)))
put("nw_bandwidth", bw)
for name, series in (("rw", rw), ("ar", ar)):
    stat, pval, lags, nobs, _, _ = adfuller(series, regression="c", autolag="BIC")
    put(f"{name}_adf_stat", stat)
    put(f"{name}_adf_lags", lags)
    put(f"{name}_adf_nobs", nobs)
    put(f"{name}_adf_mackinnon_p", pval)
    k = kpss(series, regression="c", nlags=bw)
    put(f"{name}_kpss_stat", k[0])
    pp = PhillipsPerron(series, lags=bw, trend="c", test_type="tau")
    put(f"{name}_pp_stat", pp.stat)

# ARCH-LM on white with 4 lags: nobs * R^2 of e^2 on its lags.
e2 = (white - white.mean()) ** 2
X = np.column_stack([np.ones(n - 4)] + [e2[4 - j:n - j] for j in range(1, 5)])
r2 = OLS(e2[4:], X).fit().rsquared
put("white_arch_lm_stat", (n - 4) * r2)
put("white_arch_lm_p", st.chi2.sf((n - 4) * r2, 4))

# VAR(2) on v1..v3.
res = VAR(y).fit(2, trend="c")
put_matrix("var_intercept", res.intercept.reshape(1, -1))
put_matrix("var_a1", res.coefs[0])
put_matrix("var_a2", res.coefs[1])
put_matrix("var_sigma", res.sigma_u)
put_matrix("var_stderr", res.stderr)
put_matrix("var_tvalues", res.tvalues)
put("var_max_modulus", np.abs(np.linalg.eigvals(
    np.block([[res.coefs[0], res.coefs[1]], [np.eye(3), np.zeros((3, 3))]]))).max())
irf = res.irf(10).orth_irfs
put_matrix("var_irf0", irf[0])
put_matrix("var_irf3", irf[3])
put_matrix("var_irf10", irf[10])
dec = res.fevd(10).decomp  # (equation, step, shock)
put_matrix("var_fevd1", dec[:, 0, :])
put_matrix("var_fevd5", dec[:, 4, :])
put_matrix("var_fevd10", dec[:, 9, :])
fc = res.forecast(y[-2:], 6)
put_matrix("var_forecast", fc)
put_matrix("var_forecast_se", np.sqrt(np.array([np.diag(m) for m in res.mse(6)])))
for r in range(res.resid.shape[1]):
    put(f"var_rsq_{r}", OLS(y[2:, r], np.column_stack([np.ones(n - 2), y[1:-1], y[:-2]])).fit().rsquared)

sel = VAR(y).select_order(6, trend="c")
put("var_select_aic", sel.selected_orders["aic"])
put("var_select_bic", sel.selected_orders["bic"])
for p in range(1, 7):
    put(f"var_ic_aic_{p}", sel.ics["aic"][p])
    put(f"var_ic_bic_{p}", sel.ics["bic"][p])

# Single-equation Granger F-tests: (i, j) tests whether series j helps predict i.
Xu = np.column_stack([np.ones(n - 2), y[1:-1], y[:-2]])
for i in range(3):
    full = OLS(y[2:, i], Xu).fit()
    for j in range(3):
        if i == j:
            continue
        keep = [0] + [1 + l * 3 + q for l in range(2) for q in range(3) if q != j]
        restricted = OLS(y[2:, i], Xu[:, keep]).fit()
        f, p, _ = full.compare_f_test(restricted)
        put(f"granger_f_{i}_{j}", f)
        put(f"granger_p_{i}_{j}", p)

# PCA of v1..v3 plus asset and mkt.
panel = np.column_stack([y, asset, mkt])
w, V = np.linalg.eigh(np.cov(panel, rowvar=False, ddof=1))
order = np.argsort(w)[::-1]
w, V = w[order], V[:, order]
for q in range(V.shape[1]):
    if V[np.argmax(np.abs(V[:, q])), q] < 0:
        V[:, q] = -V[:, q]
put_matrix("pca_eigenvalues", w.reshape(1, -1))
put_matrix("pca_loadings", V)

# ------------------------------------------------------------- garch.csv
ng = 1500
omega, alpha, beta, mu = 0.2, 0.12, 0.8, 0.5
h = omega / (1 - alpha - beta)
xs = np.zeros(ng + 300)
eprev = 0.0
for t in range(ng + 300):
    h = omega + alpha * eprev ** 2 + beta * h
    eprev = math.sqrt(h) * rng.normal()
    xs[t] = mu + eprev
xg = xs[300:]
write_csv("garch.csv", {"x": xg})
h1 = xg.var(ddof=1)


def garch_nll(theta):
    m, om, a, b = theta
    if om <= 0 or a < 0 or b < 0 or a + b >= 1:
        return 1e300
    hh = h1
    ll = 0.0
    ep = 0.0
    for t in range(ng):
        if t > 0:
            hh = om + a * ep * ep + b * hh
        ep = xg[t] - m
        ll -= 0.5 * (math.log(2 * math.pi) + math.log(hh) + ep * ep / hh)
    return -ll


sol = opt.minimize(garch_nll, [xg.mean(), 0.1 * h1, 0.1, 0.8], method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 40000, "maxfev": 80000})
sol = opt.minimize(garch_nll, sol.x, method="Nelder-Mead",
                   options={"xatol": 1e-11, "fatol": 1e-13, "maxiter": 40000, "maxfev": 80000})
for name, v in zip(("mu", "omega", "alpha", "beta"), sol.x):
    put(f"garch_{name}", v)
put("garch_loglik", -sol.fun)

# --------------------------------------------------------------- gpd.csv
ny = 400
yg = st.genpareto.rvs(0.25, scale=1.5, size=ny, random_state=rng)
write_csv("gpd.csv", {"excess": yg})


def gpd_nll(theta):
    xi, sc = theta
    if sc <= 0:
        return 1e300
    z = 1 + xi * yg / sc
    if np.any(z <= 0):
        return 1e300
    return ny * math.log(sc) + (1 + 1 / xi) * np.log(z).sum()


xi0, _, sc0 = st.genpareto.fit(yg, floc=0)
sol = opt.minimize(gpd_nll, [xi0, sc0], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 20000})
put("gpd_shape", sol.x[0])
put("gpd_scale", sol.x[1])
put("gpd_loglik", -sol.fun)

# ----------------------------------------------------------- mixture.csv
nm = 800
comp = rng.uniform(size=nm) < 0.85
xm = np.where(comp, rng.normal(1.0, 3.0, nm), rng.normal(-3.0, 8.0, nm))
write_csv("mixture.csv", {"x": xm})
gm = GaussianMixture(2, n_init=30, tol=1e-14, max_iter=100000, reg_covar=0.0, random_state=0)
gm.fit(xm.reshape(-1, 1))
sds = np.sqrt(gm.covariances_.ravel())
order = np.argsort(sds)
put_matrix("mixture_weights", gm.weights_[order].reshape(1, -1))
put_matrix("mixture_means", gm.means_.ravel()[order].reshape(1, -1))
put_matrix("mixture_sds", sds[order].reshape(1, -1))
put("mixture_loglik", gm.score(xm.reshape(-1, 1)) * nm)
for k in (1, 2, 3):
    g = GaussianMixture(k, n_init=30, tol=1e-14, max_iter=100000, reg_covar=0.0, random_state=0)
    g.fit(xm.reshape(-1, 1))
    put(f"mixture_bic_{k}", -2 * g.score(xm.reshape(-1, 1)) * nm + (3 * k - 1) * math.log(nm))

# ------------------------------------------------- closed-form risk values
wts, mus, sgs = np.array([0.9, 0.1]), np.array([1.2, -2.0]), np.array([4.0, 12.0])


def mix_cdf(x):
    return float((wts * st.norm.cdf((x - mus) / sgs)).sum())


for p in (0.95, 0.99, 0.999):
    tag = str(p).replace(".", "")
    v = -opt.brentq(lambda x: mix_cdf(x) - (1 - p), -500, 500, xtol=1e-14)
    z = (-v - mus) / sgs
    es = (wts * (-mus * st.norm.cdf(z) + sgs * st.norm.pdf(z))).sum() / (1 - p)
    put(f"mix_var_{tag}", v)
    put(f"mix_es_{tag}", es)

# -------------------------------------------------------- special functions
put("chi2_sf_5_991_2", st.chi2.sf(5.991, 2))
put("chi2_sf_12_5_7", st.chi2.sf(12.5, 7))
put("f_sf_2_3_4_120", st.f.sf(2.3, 4, 120))
put("f_sf_0_7_2_30", st.f.sf(0.7, 2, 30))
put("norm_ppf_0999", st.norm.ppf(0.999))
put("norm_ppf_1e_9", st.norm.ppf(1e-9))
put("norm_cdf_m1_3", st.norm.cdf(-1.3))
put("betainc_2_5_3_0_4", sp.betainc(2.5, 3.0, 0.4))
put("gammainc_3_2_5", sp.gammainc(3.0, 2.5))
put("gammaincc_0_5_7", sp.gammaincc(0.5, 7.0))

lines = ["#pragma once", "",
         "// Generated by tests/oracles/make_oracles.py; do not edit by hand.", "",
         "namespace oracle {", ""]
for k, v in values.items():
    lines.append(f"inline constexpr double {k} = {v!r};")
lines += ["", "}  // namespace oracle", ""]
HEADER.write_text("\n".join(lines))
print(f"{len(values)} values written")
