"""High-precision reference values for the literal instance in tests/frozen.hpp.

Evaluates the loss and residuals straight from their component definitions in
mpmath at 50 digits and differentiates numerically at that precision. Run with
`python3 tests/oracles/frozen_values.py` to regenerate the constants.
"""
import itertools

import mpmath as mp

mp.mp.dps = 50

n, d = 3, 2
W = [[mp.mpf("0.3"), mp.mpf("-0.7")], [mp.mpf("0.5"), mp.mpf("0.2")]]
V = [[mp.mpf("0.9"), mp.mpf("0.1")], [mp.mpf("-0.4"), mp.mpf("0.6")]]
X0 = [[mp.mpf("0.2"), mp.mpf("-0.5"), mp.mpf("0.8")], [mp.mpf("0.7"), mp.mpf("0.3"), mp.mpf("-0.6")]]
B = [[mp.mpf("0.1"), mp.mpf("-0.2")], [mp.mpf("0.3"), mp.mpf("0.05")], [mp.mpf("-0.15"), mp.mpf("0.25")]]
gamma = mp.mpf("0.3")


def unvec(v):
    # k = i*d + j, column i, row j
    return [[v[i * d + j] for i in range(n)] for j in range(d)]


def residual(X, i0, j0):
    col = [X[j][i0] for j in range(d)]
    logits = [sum(X[a][i] * W[a][b] * col[b] for a in range(d) for b in range(d)) for i in range(n)]
    u = [mp.e ** t for t in logits]
    alpha = sum(u)
    h = [sum(X[j][i] * V[j][j0] for j in range(d)) for i in range(n)]
    return sum(u[i] / alpha * h[i] for i in range(n)) - B[i0][j0]


def loss(*v):
    X = unvec(v)
    r = sum(residual(X, i0, j0) ** 2 for i0 in range(n) for j0 in range(d))
    return r + gamma * sum(t * t for t in v)


x0 = [X0[j][i] for i in range(n) for j in range(d)]
m = n * d


def orders(*ks):
    o = [0] * m
    for k in ks:
        o[k] += 1
    return tuple(o)


def fmt(v):
    return mp.nstr(v, 20, min_fixed=-30, max_fixed=30)


print("loss", fmt(loss(*x0)))
print("grad", ", ".join(fmt(mp.diff(loss, x0, orders(k))) for k in range(m)))
for a in range(m):
    print("hess", a, ", ".join(fmt(mp.diff(loss, x0, orders(a, b))) for b in range(m)))

# d2c for residual (1, 0), one probe per index case
probes = {"case1": (1, 0, 1, 1), "case2": (1, 0, 2, 1), "case3": (0, 1, 1, 0),
          "case4": (2, 0, 2, 1), "case5": (0, 1, 2, 0)}
for name, (i1, j1, i2, j2) in probes.items():
    f = lambda *v: residual(unvec(v), 1, 0)
    val = mp.diff(f, x0, orders(i1 * d + j1, i2 * d + j2))
    print(name, fmt(val))
