"""Independent sympy derivation of the half-integer r=2 reference values."""

import itertools
import sympy as sp

Q, c0, c1, ce1, ce2, g1, nu = sp.symbols("Q c0 c1 ce1 ce2 g1 nu")
cv = 1 + 6 * Q**2
RHO = 1


def make_reducer(rho, eigen):
    def add(store, key, val):
        store[key] = store.get(key, 0) + val

    def reduce_word(word, coeff):
        state = {tuple(word): coeff}
        done = {}
        while state:
            w, c = state.popitem()
            if c == 0:
                continue
            spot = next((i for i in range(len(w) - 1) if w[i] > w[i + 1]), None)
            if spot is not None:
                a, b = w[spot], w[spot + 1]
                add(state, w[:spot] + (b, a) + w[spot + 2:], c)
                add(state, w[:spot] + (a + b,) + w[spot + 2:], c * (a - b))
                if a + b == 0:
                    add(state, w[:spot] + w[spot + 2:], c * cv * sp.Rational(a**3 - a, 12))
                continue
            if w and w[-1] >= rho:
                ev = eigen.get(w[-1], 0)
                if ev != 0:
                    add(state, w[:-1], c * ev)
                continue
            add(done, tuple(rho - m for m in w), c)
        return {k: sp.expand(v) for k, v in done.items() if sp.expand(v) != 0}

    return reduce_word


E1 = (2 * Q - c0) * c1
E2 = -c1**2
red = make_reducer(RHO, {1: E1, 2: E2})


def act(vec, mode):
    out = {}
    for lam, c in vec.items():
        word = (mode,) + tuple(RHO - a for a in lam)
        for mu, d in red(word, c).items():
            out[mu] = sp.expand(out.get(mu, 0) + d)
    return {k: v for k, v in out.items() if v != 0}


def vec_sub(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = sp.expand(out.get(k, 0) - v)
    return {k: v for k, v in out.items() if v != 0}


def vec_scale(a, s):
    return {k: sp.expand(v * s) for k, v in a.items() if sp.expand(v * s) != 0}


def parts(n, mx=None):
    if n == 0:
        return [()]
    mx = n if mx is None else min(mx, n)
    out = []
    for f in range(mx, 0, -1):
        for rest in parts(n - f, f):
            out.append((f,) + rest)
    return out


def solve_linear(eqs, unknowns):
    sol = sp.solve(eqs, unknowns, dict=True)
    assert len(sol) == 1, sol
    return sol[0]


# half r=2: relations  L~2 v_k = 0,  L3 v_k = v_{k-1},  L_{>=4} v_k = 0
# f0 = (2/3) c1^2 L1,  f1 = (1/3) L0  (full modes)
def f0(vec):
    return vec_scale(act(vec, 1), sp.Rational(2, 3) * c1**2)


def f1(vec):
    return vec_scale(act(vec, 0), sp.Rational(1, 3))


def Y(k, vectors):
    def get(j):
        return vectors[j] if 0 <= j < len(vectors) else {}
    out = {}
    for lam, c in f0(get(k)).items():
        out[lam] = out.get(lam, 0) + c
    for lam, c in get(k).items():
        out[lam] = out.get(lam, 0) + g1 * c
    for lam, c in f1(get(k - 1)).items():
        out[lam] = out.get(lam, 0) + c
    for lam, c in get(k - 1).items():
        out[lam] = out.get(lam, 0) - (nu + k - 1) * c
    return {lam: sp.expand(v) for lam, v in out.items() if sp.expand(v) != 0}


u = {(): sp.Integer(1)}
v0 = dict(u)

y0 = Y(0, [v0])
g1_val = sp.solve(sp.Eq(y0.get((), 0), 0), g1)[0]
print("half r=2 g1:", sp.factor(g1_val))

# v1: unknown coefficients at weights 1..2
unknowns, v1 = [], {(): ce1}
for w in (1, 2):
    for lam in parts(w):
        s = sp.Symbol("x_" + "_".join(map(str, lam)))
        v1[lam] = s
        unknowns.append(s)
eqs = []
for n, rhs, tilde in [(2, {}, True), (3, v0, False), (4, {}, False), (5, {}, False)]:
    lhs = act(v1, n)
    if tilde:
        lhs = vec_sub(lhs, vec_scale(v1, E2))
    for lam in set(lhs) | set(rhs):
        eqs.append(sp.Eq(lhs.get(lam, 0), rhs.get(lam, 0)))
sol1 = solve_linear(eqs, unknowns)
v1 = {k: sp.expand(sp.sympify(v).subs(sol1)) for k, v in v1.items()}
v1 = {k: v for k, v in v1.items() if v != 0}
print("half r=2 v1:", {k: sp.factor(v) for k, v in v1.items()})

y1 = {k: sp.expand(v.subs(g1, g1_val)) for k, v in Y(1, [v0, v1]).items()}
nu_val = sp.solve(sp.Eq(y1.get((), 0), 0), nu)[0]
print("half r=2 nu:", sp.factor(nu_val))
y1 = {k: sp.expand(v.subs(nu, nu_val)) for k, v in y1.items()}
print("half r=2 Y1 residual (should be empty):", {k: v for k, v in y1.items() if v != 0})

# v2 and the ce1 pin from {Y_2}=0
unknowns, v2 = [], {(): ce2}
for w in (1, 2, 3, 4):
    for lam in parts(w):
        s = sp.Symbol("z_" + "_".join(map(str, lam)))
        v2[lam] = s
        unknowns.append(s)
eqs = []
for n, rhs, tilde in [(2, {}, True), (3, v1, False), (4, {}, False),
                      (5, {}, False), (6, {}, False)]:
    lhs = act(v2, n)
    if tilde:
        lhs = vec_sub(lhs, vec_scale(v2, E2))
    for lam in set(lhs) | set(rhs):
        eqs.append(sp.Eq(lhs.get(lam, 0), rhs.get(lam, 0)))
sol2 = solve_linear(eqs, unknowns)
v2 = {k: sp.expand(sp.sympify(v).subs(sol2)) for k, v in v2.items()}
v2 = {k: v for k, v in v2.items() if v != 0}

y2 = {k: sp.expand(v.subs([(g1, g1_val), (nu, nu_val)]))
      for k, v in Y(2, [v0, v1, v2]).items()}
const = y2.get((), 0)
print("half r=2 pivot d{Y2}/d ce1:", sp.expand(sp.diff(const, ce1)))
ce1_val = sp.solve(sp.Eq(const, 0), ce1)[0]
print("half r=2 ce1:", sp.factor(ce1_val))
y2 = {k: sp.expand(v.subs(ce1, ce1_val)) for k, v in y2.items()}
print("half r=2 Y2 residual (should be empty):", {k: v for k, v in y2.items() if v != 0})
print("half r=2 v1 with ce1:", {k: sp.factor(v.subs(ce1, ce1_val)) for k, v in v1.items()})
