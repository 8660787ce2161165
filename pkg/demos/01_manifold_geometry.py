"""Covariance matrices live on a curved manifold, not in a flat vector space.

Channel-by-channel covariance is the workhorse feature for EEG decoding,
but covariance matrices are symmetric positive-definite (SPD): averaging
or measuring distances with ordinary Euclidean arithmetic distorts them.
This script tours the geometry toolkit the rest of the package is built
on: the affine-invariant distance, geometric (Frechet) means, and the
tangent-space vectorization that turns matrices into ordinary feature
vectors for linear classifiers.

Run with: python3 demos/01_manifold_geometry.py
"""

import numpy as np

from eegbench.spd import (
    airm_distance,
    exp_map,
    frechet_mean,
    log_map,
    matrix_fn,
    tangent_unvectorize,
    tangent_vectorize,
)

rng = np.random.default_rng(7)


def random_spd(n):
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return (q * np.exp(rng.uniform(-1.0, 1.0, n))) @ q.T


print("=== 1. A distance that ignores how the sensors are wired ===")
a, b = random_spd(4), random_spd(4)
d = airm_distance(a, b)
print(f"distance between two random 4x4 SPD matrices: {d:.6f}")

w = rng.standard_normal((4, 4))  # any invertible mixing of the channels
d_mixed = airm_distance(w.T @ a @ w, w.T @ b @ w)
print(f"after recoloring both through the same mixing: {d_mixed:.6f}")
print(f"difference: {abs(d - d_mixed):.2e}  (invariant to linear mixing,")
print("so electrode montage and amplifier gains drop out of the analysis)\n")

print("=== 2. Geometric means do not inflate the spectrum ===")
m1 = np.diag([10.0, 0.1])
m2 = np.diag([0.1, 10.0])
arith = (m1 + m2) / 2.0
geo = frechet_mean([m1, m2]).values
print(f"two covariances, both with determinant {np.linalg.det(m1):.2f}")
print(f"arithmetic mean determinant: {np.linalg.det(arith):.2f}  (swollen)")
print(f"geometric mean determinant:  {np.linalg.det(geo):.2f}  (preserved)")

stack = [random_spd(6) for _ in range(12)]
center = frechet_mean(stack)
pulls = [airm_distance(center.values, s) for s in stack]
print(f"Frechet mean of 12 matrices: mean distance to members "
      f"{np.mean(pulls):.3f} (the balance point on the manifold)\n")

print("=== 3. Log/exp maps move between manifold and tangent plane ===")
base = center.values
v = log_map(base, stack[0]).values
back = exp_map(base, v).values
print(f"log then exp round-trip error: "
      f"{np.linalg.norm(back - stack[0]):.2e}")
root = matrix_fn(base, "sqrt")
print(f"matrix square root check: "
      f"{np.linalg.norm(root @ root - base):.2e}\n")

print("=== 4. Tangent vectors preserve the metric ===")
vec = tangent_vectorize(a, b)
print(f"vectorized at a: {vec.shape[0]} features for a 4x4 matrix "
      f"(upper triangle, off-diagonal scaled by sqrt(2))")
print(f"vector norm {np.linalg.norm(vec):.6f} == manifold distance "
      f"{airm_distance(a, b):.6f}")
restored = tangent_unvectorize(a, vec).values
print(f"un-vectorize round-trip error: {np.linalg.norm(restored - b):.2e}")
print("\nThis is why tangent-space pipelines work: project covariances to")
print("the tangent plane at the training mean, then hand the coordinates")
print("to any plain linear classifier.")
