#!/usr/bin/env python3
"""Monte-Carlo cap for the sublevel integral of the 4 x 9 example on [-50, 50]^2.

Independent of the C++ estimator: numpy sampling of bases and points, and the form
norm evaluated as |det R| from a QR factorization. Random bases are screened,
the largest values re-estimated, and a short local search pushes the best ones
further. The fixture records `factor` times the largest confirmed estimate.
"""
import argparse
import json

import numpy as np

TAU = 9.0 / 13.0
HALF = 50.0


def rows(t):
    s1, s2 = t[:, 0], t[:, 1]
    n = t.shape[0]
    u = np.zeros((n, 4, 9))
    for i in range(4):
        u[:, i, i] = 1.0
    u[:, 0, 4], u[:, 0, 8] = s1, s1**2
    u[:, 1, 5], u[:, 1, 8] = s2, s2**2
    u[:, 2, 6], u[:, 2, 8] = s1, s1**3
    u[:, 3, 7], u[:, 3, 8] = s2, s2**3
    return u


def haar(rng, q):
    z = rng.standard_normal((q, q))
    qm, r = np.linalg.qr(z)
    return qm * np.sign(np.diag(r))


def clip_scales(w, scale_max):
    w = w - w.mean()
    m = np.abs(w).max()
    if m > scale_max > 0:
        w = w * (scale_max / m)
    return w


def basis(o1, w, o2):
    return o1 @ np.diag(np.exp(w)) @ o2


def random_params(rng, q, scale_max):
    o1, o2 = haar(rng, q), haar(rng, q)
    w = clip_scales(rng.uniform(-scale_max, scale_max, q), scale_max)
    return o1, w, o2


def estimate(rng, omega, samples, chunk=20000):
    vol = (2 * HALF) ** 2
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        t = rng.uniform(-HALF, HALF, (n, 2))
        x = rows(t) @ omega
        r = np.linalg.qr(np.transpose(x, (0, 2, 1)), mode="r")
        norm = np.abs(np.diagonal(r, axis1=1, axis2=2)).prod(axis=1)
        f = norm ** (-TAU)
        total += f.sum()
        total_sq += (f * f).sum()
        done += n
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    return vol * mean, vol * np.sqrt(var / samples)


def perturb(rng, params, scale_max, step):
    o1, w, o2 = params
    q = w.size
    skew = rng.standard_normal((q, q)) * step
    skew = skew - skew.T
    rot = np.linalg.solve(np.eye(q) - skew, np.eye(q) + skew)
    w = clip_scales(w + rng.standard_normal(q) * step * scale_max, scale_max)
    return rot @ o1, w, o2


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", required=True)
    ap.add_argument("--screen", type=int, default=4000, help="random bases in the screening pass")
    ap.add_argument("--screen-samples", type=int, default=3000)
    ap.add_argument("--refine", type=int, default=40, help="bases re-estimated with more samples")
    ap.add_argument("--samples", type=int, default=50000)
    ap.add_argument("--climb", type=int, default=5, help="bases used as hill-climbing starts")
    ap.add_argument("--climb-steps", type=int, default=40)
    ap.add_argument("--scale-max", type=float, default=8.0)
    ap.add_argument("--seed", type=int, default=20240613)
    ap.add_argument("--factor", type=float, default=2.0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    q = 9
    pool = [random_params(rng, q, args.scale_max) for _ in range(args.screen)]
    screen = [estimate(rng, basis(*p), args.screen_samples)[0] for p in pool]
    order = np.argsort(screen)[::-1][: args.refine]
    refined = sorted(
        ((estimate(rng, basis(*pool[i]), args.samples)[0], int(i)) for i in order), reverse=True
    )
    best = refined[0][0]
    # Local search around the largest values; noisy acceptance only inflates the cap.
    for value, i in refined[: args.climb]:
        cur, cur_val = pool[i], value
        for step in range(args.climb_steps):
            cand = perturb(rng, cur, args.scale_max, 0.1 * (1 - step / args.climb_steps) + 0.01)
            v = estimate(rng, basis(*cand), args.samples // 2)[0]
            if v > cur_val:
                cur, cur_val = cand, v
        confirmed = estimate(rng, basis(*cur), 4 * args.samples)[0]
        best = max(best, confirmed)
    record = {
        "tau": {"num": 9, "den": 13},
        "box": [[-HALF, HALF], [-HALF, HALF]],
        "scale_max": args.scale_max,
        "screen": args.screen,
        "samples": args.samples,
        "seed": args.seed,
        "max_estimate": best,
        "factor": args.factor,
        "cap": args.factor * best,
    }
    with open(args.out, "w") as f:
        json.dump(record, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
