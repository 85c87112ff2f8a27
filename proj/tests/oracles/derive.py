"""High-precision reference values frozen into the unit tests. Run with mpmath installed."""
import mpmath as mp

mp.mp.dps = 40


def dist(r1, t1, r2, t2):
    return mp.acosh(mp.cosh(r1) * mp.cosh(r2) - mp.sinh(r1) * mp.sinh(r2) * mp.cos(t1 - t2))


def h3(t, rho):
    return (4 * mp.pi * t) ** mp.mpf(-1.5) * (rho / mp.sinh(rho)) * mp.exp(-t - rho**2 / (4 * t))


def h2(t, rho):
    # s = rho + w^2 removes the inverse square root at s = rho
    def f(w):
        s = rho + w**2
        return 2 * w * s * mp.exp(-s**2 / (4 * t)) / mp.sqrt(2 * mp.sinh((s + rho) / 2) * mp.sinh(w**2 / 2))
    c = mp.sqrt(2) * mp.exp(-t / 4) / (4 * mp.pi * t) ** mp.mpf(1.5)
    return c * mp.quad(f, [0, 1, 3, 6, mp.inf])


def main():
    print("geodesic_distance((0.7,0.3),(1.2,2.1)) =", mp.nstr(dist(0.7, 0.3, 1.2, 2.1), 20))
    print("volume_density(1,2) =", mp.nstr(mp.sinh(1), 20))
    print("volume_density(1,3) =", mp.nstr(mp.sinh(1) ** 2, 20))
    print("kernel_h3(0.5,1) =", mp.nstr(h3(mp.mpf("0.5"), 1), 20))
    print("kernel_h3(1,0) =", mp.nstr((4 * mp.pi) ** mp.mpf(-1.5) * mp.exp(-1), 20))
    for t, r in [(1, 0), (1, 1), (1, 3), (0.5, 1), (0.1, 0.5), (2, 4)]:
        print(f"kernel_h2({t},{r}) =", mp.nstr(h2(mp.mpf(t), mp.mpf(r)), 20))
    m3 = mp.quad(lambda r: h3(1, r) * 4 * mp.pi * mp.sinh(r) ** 2, [0, 5, 10, 40])
    print("h3 mass t=1 =", mp.nstr(m3, 20))
    m2 = mp.quad(lambda r: h2(1, r) * 2 * mp.pi * mp.sinh(r), [0, 2, 5, 10, 20])
    print("h2 mass t=1 (to 20) =", mp.nstr(m2, 20))
    print("area rho_max=8 =", mp.nstr(2 * mp.pi * (mp.cosh(8) - 1), 20))
    print("B(1/2,1/4) =", mp.nstr(mp.beta(0.5, 0.25), 20))
    print("gauss bump L2 e^{-rho^2}, rho_max=8 =",
          mp.nstr(mp.sqrt(mp.quad(lambda r: mp.exp(-2 * r**2) * 2 * mp.pi * mp.sinh(r), [0, 8])), 20))
    # Constants under delta_n = 1/4, c0 = 1 (n = 2); gamma(3,3,9) with delta_3 = 1
    g = lambda dn, p, q: dn / 2 * ((1 / p - 1 / q) + (8 / q) * (1 - 1 / p))
    b1 = lambda dn, c0, p, q: (g(dn, p, q) + c0) / 2
    b3 = lambda dn, c0, p, q: (g(dn, q, q) + g(dn, p, q)) / 4 + c0 / 2
    dn, c0 = mp.mpf(1) / 4, mp.mpf(1)
    print("gamma(3,3,9)/delta_3 =", mp.nstr(g(1, mp.mpf(3), mp.mpf(9)), 20))
    beta = min(b1(dn, c0, 2, 4), b3(dn, c0, 2, 4))
    print("beta(2,0.5) =", mp.nstr(beta, 20))
    bpp = min(beta, b3(dn, c0, 2, 3), b3(dn, c0, 2 / (mp.mpf(2) / 3 + mp.mpf(0.5)), 3))
    print("beta''(2,3,0.5) =", mp.nstr(bpp, 20))
    dn3, c03 = mp.mpf(1), mp.mpf(2)
    beta3 = min(b1(dn3, c03, 3, 6), b3(dn3, c03, 3, 6))
    bs = min(beta3, b1(dn3, c03, 2, 2), b3(dn3, c03, 3 / (mp.mpf(3) / 2 + mp.mpf(0.5)), 2))
    print("beta*(3,2,0.5) [delta_3=1,c0=2] =", mp.nstr(bs, 20))


if __name__ == "__main__":
    main()
