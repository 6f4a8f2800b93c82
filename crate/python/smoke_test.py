"""Smoke test for the qdiv extension module.

Build and install the module first, for example with
`maturin develop --release -m crates/python/Cargo.toml`, then run
`python python/smoke_test.py` from the repository root.
"""

import math

import qdiv


def main():
    pure = [[1, 0], [0, 0]]
    mixed = [[0.5, 0], [0, 0.5]]

    assert abs(qdiv.umegaki(pure, mixed) - math.log(2)) < 1e-14
    assert qdiv.sandwiched(mixed, pure, 2.0) == math.inf
    print("umegaki(pure, mixed) =", qdiv.umegaki(pure, mixed))

    a = qdiv.random_density(3, rank=2, seed=1)
    b = qdiv.random_density(3, seed=2)
    for alpha in (0.5, 2.0, 3.0):
        d = qdiv.Divergence("sandwiched", alpha=alpha)
        print(f"{d!r}: {d(a, b):.12f}")
        assert abs(d(b, b)) < 1e-9

    u = qdiv.haar_unitary(3, seed=5)
    for anti in (False, True):
        v, kind, residual = qdiv.wigner_reconstruct(qdiv.wigner_images(u, antiunitary=anti))
        print(f"reconstructed {kind}, residual {residual:.2e}")
        assert kind == ("antiunitary" if anti else "unitary") and residual < 1e-8

    report = qdiv.check_invariance(u, qdiv.Divergence("renyi", alpha=2.0), samples=50, seed=7)
    print("invariance:", report)
    assert report["passed"]

    t, s, lhs, rhs, gap = qdiv.prop1_refutation(2.0)
    print(f"prop1 witness t={t:.4f} s={s:.4f} gap={gap:.4f}")
    assert gap > 1e-3

    try:
        qdiv.umegaki([[2, 0], [0, 0]], mixed)
    except ValueError as e:
        print("rejected invalid input:", e)
    else:
        raise AssertionError("expected ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
