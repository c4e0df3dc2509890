#!/usr/bin/env python3
"""Reference oracles for Haar averages, gap-ratio statistics, and GOE moments.

Pins the constants frozen into the C++ tests:

  * Haar-averaged squared commutator for fixed eigenphase lists v, w:
        A(v,w) = 2(d-1)/(d+1)
                 + [2/(d^2(d^2-1))] Re[ S_v * S_w ]
                 - [2/(d(d+1))] Re[ S_v + S_w ],
        S_v = |sum v|^2 - d,  S_w = |sum w|^2 - d,
    checked against Monte-Carlo sampling of (1/d)||[V, U^dag W U]||_F^2
    over Haar U with V = diag(v), W = diag(w). Includes the d=2,
    v=w=(1,-1) value 8/3.
  * Haar-averaged coherence-generating power (d-1)/(d+1) for d=8.
  * Mean consecutive-gap ratio <r> for Poisson and GOE spectra using the
    central 80% of each spectrum (the convention the C++ library uses).
  * Mean 2-coherence of random real unit vectors vs analytic 1 - 3/(d+2).
"""

import numpy as np


def haar(d, rng):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(a)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def closed_form(v, w):
    d = len(v)
    sv = abs(v.sum()) ** 2 - d
    sw = abs(w.sum()) ** 2 - d
    return (2.0 * (d - 1) / (d + 1)
            + 2.0 / (d * d * (d * d - 1)) * (sv * sw).real
            - 2.0 / (d * (d + 1)) * (sv + sw).real)


def mc_haar_otoc(v, w, rng, n):
    d = len(v)
    vals = np.empty(n)
    for i in range(n):
        u = haar(d, rng)
        wt = u.conj().T @ np.diag(w) @ u
        k = np.diag(v) @ wt - wt @ np.diag(v)
        vals[i] = (np.abs(k) ** 2).sum() / d
    return vals.mean(), vals.std(ddof=1) / np.sqrt(n)


def cgp(u):
    d = u.shape[0]
    x = np.abs(u) ** 2
    return 1.0 - (x * x).sum() / d


def mean_gap_ratio(spectra):
    rs = []
    for lam in spectra:
        d = len(lam)
        lo, hi = int(0.1 * d), int(0.9 * d)
        s = np.diff(np.sort(lam)[lo:hi])
        r = np.minimum(s[:-1], s[1:]) / np.maximum(s[:-1], s[1:])
        rs.append(r.mean())
    return np.mean(rs), np.std(rs, ddof=1) / np.sqrt(len(rs))


def main():
    rng = np.random.default_rng(77001)

    print("== Haar-averaged squared commutator ==")
    v = np.array([1.0, -1.0], dtype=complex)
    cf = closed_form(v, v)
    mc, se = mc_haar_otoc(v, v, rng, 4000)
    print(f"  d=2 v=w=(1,-1): closed form {cf:.6f} (expect {8/3:.6f}), MC {mc:.4f} +- {se:.4f}")
    assert abs(cf - 8.0 / 3.0) < 1e-12
    assert abs(mc - cf) < 3.5 * se

    for d in (4,):
        phases = np.exp(2j * np.pi * rng.random(2 * d))
        v, w = phases[:d], phases[d:]
        cf = closed_form(v, w)
        mc, se = mc_haar_otoc(v, w, rng, 3000)
        print(f"  d={d} random phases: closed form {cf:.6f}, MC {mc:.4f} +- {se:.4f}")
        assert abs(mc - cf) < 3.5 * se

    print("== Haar-averaged CGP, d=8 ==")
    vals = np.array([cgp(haar(8, rng)) for _ in range(2000)])
    print(f"  MC {vals.mean():.5f} +- {vals.std(ddof=1)/np.sqrt(len(vals)):.5f} "
          f"(expect {(8-1)/(8+1):.5f})")

    print("== mean consecutive-gap ratio, central 80% ==")
    pois = [np.sort(rng.random(500)) for _ in range(400)]
    m, se = mean_gap_ratio(pois)
    print(f"  Poisson: {m:.4f} +- {se:.4f} (literature 2 ln 2 - 1 = {2*np.log(2)-1:.4f})")
    goe = []
    for _ in range(400):
        a = rng.normal(size=(300, 300))
        goe.append(np.linalg.eigvalsh((a + a.T) / 2.0))
    m, se = mean_gap_ratio(goe)
    print(f"  GOE: {m:.4f} +- {se:.4f} (literature ~0.5307)")

    print("== 2-coherence of random real unit vectors ==")
    for d in (64, 3003):
        n = 200
        x = rng.normal(size=(n, d))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        c2 = 1.0 - (x ** 4).sum(axis=1)
        analytic = 1.0 - 3.0 / (d + 2)
        print(f"  d={d}: MC {c2.mean():.6f} +- {c2.std(ddof=1)/np.sqrt(n):.6f}, "
              f"analytic {analytic:.6f}")

    print("ok")


if __name__ == "__main__":
    main()
